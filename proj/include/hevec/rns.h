/*
 * Copyright 2026 The hevec Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HEVEC_RNS_H_
#define HEVEC_RNS_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"

namespace hevec {

// Residues are stored in 32-bit words; products use 64-bit intermediates.
using Word = uint32_t;

inline Word ModAdd(Word a, Word b, Word q) {
  uint64_t s = uint64_t{a} + b;
  return static_cast<Word>(s >= q ? s - q : s);
}

inline Word ModSub(Word a, Word b, Word q) {
  return a >= b ? a - b : static_cast<Word>(uint64_t{a} + q - b);
}

inline Word ModMul(Word a, Word b, Word q) {
  return static_cast<Word>((uint64_t{a} * b) % q);
}

inline Word ModNeg(Word a, Word q) { return a == 0 ? 0 : q - a; }

Word ModPow(Word base, uint64_t exp, Word q);

// Inverse of `a` modulo prime `q`. `a` must be nonzero mod q.
Word ModInv(Word a, Word q);

// Deterministic Miller-Rabin for 64-bit inputs.
bool IsPrime(uint64_t n);

// An NTT-friendly prime together with a primitive 2*n_max-th root of unity.
struct PrimeModulus {
  Word q = 0;
  size_t n_max = 0;
  Word psi = 0;
  Word psi_inv = 0;
  Word n_inv = 0;  // n_max^{-1} mod q

  // Validates q (prime, q ≡ 1 mod 2*n_max) and picks the smallest-generator
  // primitive root. Fails if either condition does not hold.
  static absl::StatusOr<PrimeModulus> Create(Word q, size_t n_max);

  // Validates a caller-supplied root; used when reloading a serialized basis.
  static absl::StatusOr<PrimeModulus> CreateWithRoot(Word q, size_t n_max,
                                                     Word psi);

  // Primitive 2n-th root of unity for a ring dimension n dividing n_max.
  Word PsiFor(size_t n) const;

  bool operator==(const PrimeModulus& other) const {
    return q == other.q && n_max == other.n_max && psi == other.psi;
  }
};

struct RnsBasis {
  std::vector<PrimeModulus> moduli;
  int word_bits = 32;

  size_t size() const { return moduli.size(); }
  const PrimeModulus& operator[](size_t i) const { return moduli[i]; }

  // The first `level` moduli.
  RnsBasis Prefix(size_t level) const;

  bool operator==(const RnsBasis& other) const {
    return moduli == other.moduli && word_bits == other.word_bits;
  }
};

// Samples `l` distinct primes q ≡ 1 (mod 2n) with exactly `bits` bits.
// Candidates c*2n+1 are visited in a seed-determined pseudo-random order, so
// every admissible candidate is eventually considered and the result is
// reproducible.
absl::StatusOr<RnsBasis> GenerateModuli(size_t n, size_t l, int bits,
                                        uint64_t seed);

enum class RestrictedResidue { kMinusOne, kPlusOne };

// Counts primes q < 2^word_bits with q ≡ -1 (mod 2^16) (or +1 when asked),
// i.e. the moduli admitted by the simplified Montgomery multiplier.
int64_t CountRestrictedModuli(
    int word_bits, RestrictedResidue residue = RestrictedResidue::kMinusOne);

}  // namespace hevec

#endif  // HEVEC_RNS_H_
