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

#ifndef HEVEC_BGV_H_
#define HEVEC_BGV_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "hevec/residue_vector.h"
#include "hevec/rns.h"

namespace hevec {

using Prng = std::mt19937_64;

struct BgvParams {
  size_t n = 0;
  RnsBasis basis;  // L_max moduli
  Word t = 257;
  double error_stddev = 3.2;
  uint64_t seed = 0;

  size_t max_level() const { return basis.size(); }

  // t must be below and coprime to every modulus; every modulus must
  // support ring dimension n.
  absl::Status Validate() const;

  // Samples `levels` primes of `bits` bits and validates the result.
  static absl::StatusOr<BgvParams> Create(size_t n, size_t levels,
                                          int bits = 30, Word t = 257,
                                          uint64_t seed = 0);
};

// Returns a message when log2(Q) exceeds the 128-bit guidance for this N.
// Parameters are never rejected for being insecure.
std::optional<std::string> SecurityWarning(const BgvParams& params);

// A ring element in RNS form over the first level() moduli.
struct RnsPoly {
  std::vector<ResidueVector> residues;

  size_t level() const { return residues.size(); }
  bool operator==(const RnsPoly& other) const {
    return residues == other.residues;
  }
};

struct SecretKey {
  std::vector<int8_t> coeffs;  // ternary
  RnsPoly ntt;                 // over the full basis
};

struct Plaintext {
  std::vector<Word> coeffs;  // in [0, t)

  bool operator==(const Plaintext& other) const {
    return coeffs == other.coeffs;
  }
};

enum class CiphertextOrigin { kFresh, kDerived };

// Decrypts as b - a*s. Both polynomials are NTT-domain.
struct Ciphertext {
  RnsPoly a;
  RnsPoly b;
  size_t level = 0;
  CiphertextOrigin origin = CiphertextOrigin::kFresh;
};

struct HintTarget {
  enum class Kind { kRelinearize, kAutomorphism };
  Kind kind = Kind::kRelinearize;
  uint64_t k = 1;  // automorphism index when kind == kAutomorphism

  static HintTarget Relinearize() { return {Kind::kRelinearize, 1}; }
  static HintTarget Automorphism(uint64_t k) { return {Kind::kAutomorphism, k}; }

  std::string ToString() const;
  bool operator==(const HintTarget& o) const {
    return kind == o.kind && (kind == Kind::kRelinearize || k == o.k);
  }
};

// ksh0[i][j] and ksh1[i][j] are NTT-domain vectors modulo q_j.
struct KeySwitchHint {
  std::vector<std::vector<ResidueVector>> ksh0;
  std::vector<std::vector<ResidueVector>> ksh1;
  HintTarget target;
  size_t level = 0;

  int64_t ByteSize(int word_bits = 32) const;
};

// 2 * L^2 * N words.
int64_t KeySwitchHintBytes(size_t level, size_t n, int word_bits = 32);

SecretKey KeyGen(const BgvParams& params);

absl::StatusOr<Ciphertext> Encrypt(const BgvParams& params, const Plaintext& m,
                                   const SecretKey& sk, size_t level,
                                   Prng& prng, bool zero_error = false);

absl::StatusOr<Plaintext> Decrypt(const BgvParams& params,
                                  const Ciphertext& ct, const SecretKey& sk);

absl::StatusOr<Ciphertext> HomAdd(const Ciphertext& ct0,
                                  const Ciphertext& ct1);

struct KeySwitchOutput {
  RnsPoly u1;
  RnsPoly u0;
};

// Listing-style key switch of an NTT-domain polynomial. The result satisfies
// u0 - u1*s = x*s_from + t*e for the hint's source secret s_from.
absl::StatusOr<KeySwitchOutput> KeySwitch(const BgvParams& params,
                                          const RnsPoly& x,
                                          const KeySwitchHint& hint);

// Source secret encrypted by a hint: s^2 for relinearization and
// -sigma_k(s) for an automorphism, as integer coefficients.
std::vector<int64_t> HintSource(const SecretKey& sk, const HintTarget& target,
                                const BgvParams& params);

absl::StatusOr<KeySwitchHint> GenerateHint(const BgvParams& params,
                                           const SecretKey& sk,
                                           const HintTarget& target,
                                           size_t level, Prng& prng);

absl::StatusOr<Ciphertext> HomMul(const BgvParams& params,
                                  const Ciphertext& ct0,
                                  const Ciphertext& ct1,
                                  const KeySwitchHint& hint);

absl::StatusOr<Ciphertext> Rotate(const BgvParams& params,
                                  const Ciphertext& ct, uint64_t k,
                                  const KeySwitchHint& hint);

// Scalars used by modulus switching from `level` to level - 1.
struct ModSwitchConstants {
  Word ql = 0;
  Word neg_ql_inv_mod_t = 0;       // -q_L^-1 mod t
  std::vector<Word> ql_mod_qj;     // q_L mod q_j
  std::vector<Word> scale;         // q_L^-1 * [q_L]_t mod q_j
  std::vector<Word> neg_scale;     // -scale mod q_j
};

ModSwitchConstants GetModSwitchConstants(const BgvParams& params,
                                         size_t level);

// Drops the last modulus. Plaintext is preserved and noise shrinks by about
// q_L (times the small correction [q_L]_t).
absl::StatusOr<Ciphertext> ModSwitch(const BgvParams& params,
                                     const Ciphertext& ct);

// max |b - a*s - m| over coefficients, centered modulo Q.
double Noise(const BgvParams& params, const Ciphertext& ct,
             const SecretKey& sk, const Plaintext& expected);

// Plaintext-side ring operations over R_t.
Plaintext PlaintextAdd(const Plaintext& a, const Plaintext& b, Word t);
Plaintext PlaintextMul(const Plaintext& a, const Plaintext& b, Word t);
Plaintext PlaintextAutomorphism(const Plaintext& a, uint64_t k, Word t);
Plaintext RandomPlaintext(size_t n, Word t, Prng& prng);

}  // namespace hevec

#endif  // HEVEC_BGV_H_
