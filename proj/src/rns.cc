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

#include "hevec/rns.h"

#include <numeric>
#include <random>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace hevec {
namespace {

using u128 = unsigned __int128;

uint64_t MulMod64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(u128{a} * b % m);
}

uint64_t PowMod64(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = MulMod64(result, base, m);
    base = MulMod64(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool IsPowerOfTwo(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Word ModPow(Word base, uint64_t exp, Word q) {
  return static_cast<Word>(PowMod64(base, exp, q));
}

Word ModInv(Word a, Word q) { return ModPow(a, q - 2, q); }

bool IsPrime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    uint64_t x = PowMod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = MulMod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

absl::StatusOr<PrimeModulus> PrimeModulus::Create(Word q, size_t n_max) {
  if (!IsPowerOfTwo(n_max)) {
    return absl::InvalidArgumentError("`n_max` must be a power of two");
  }
  if (!IsPrime(q)) {
    return absl::InvalidArgumentError(absl::StrCat("modulus ", q, " is not prime"));
  }
  if ((uint64_t{q} - 1) % (2 * uint64_t{n_max}) != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("modulus ", q, " is not 1 mod ", 2 * n_max));
  }
  const uint64_t cofactor = (uint64_t{q} - 1) / (2 * n_max);
  for (Word x = 2; x < q; ++x) {
    Word candidate = ModPow(x, cofactor, q);
    if (ModPow(candidate, n_max, q) == q - 1) {
      return CreateWithRoot(q, n_max, candidate);
    }
  }
  return absl::InternalError("no primitive root found");
}

absl::StatusOr<PrimeModulus> PrimeModulus::CreateWithRoot(Word q, size_t n_max,
                                                          Word psi) {
  if (!IsPowerOfTwo(n_max) || !IsPrime(q) ||
      (uint64_t{q} - 1) % (2 * uint64_t{n_max}) != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("modulus ", q, " is not NTT-friendly for n=", n_max));
  }
  if (psi == 0 || psi >= q || ModPow(psi, n_max, q) != q - 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        psi, " is not a primitive ", 2 * n_max, "-th root mod ", q));
  }
  PrimeModulus m;
  m.q = q;
  m.n_max = n_max;
  m.psi = psi;
  m.psi_inv = ModInv(psi, q);
  m.n_inv = ModInv(static_cast<Word>(n_max % q), q);
  return m;
}

Word PrimeModulus::PsiFor(size_t n) const {
  return ModPow(psi, n_max / n, q);
}

RnsBasis RnsBasis::Prefix(size_t level) const {
  RnsBasis out;
  out.word_bits = word_bits;
  out.moduli.assign(moduli.begin(), moduli.begin() + level);
  return out;
}

absl::StatusOr<RnsBasis> GenerateModuli(size_t n, size_t l, int bits,
                                        uint64_t seed) {
  if (!IsPowerOfTwo(n)) {
    return absl::InvalidArgumentError("`n` must be a power of two");
  }
  if (bits > 32) {
    return absl::InvalidArgumentError("`bits` must fit a 32-bit word");
  }
  const uint64_t step = 2 * uint64_t{n};
  const uint64_t lo = uint64_t{1} << (bits - 1);
  const uint64_t hi = (uint64_t{1} << bits) - 1;  // inclusive
  if (bits < 2 || step + 1 > hi) {
    return absl::InvalidArgumentError(
        absl::StrCat("no ", bits, "-bit candidates are 1 mod ", step));
  }
  const uint64_t c_min = lo <= 1 ? 1 : (lo - 1 + step - 1) / step;
  const uint64_t c_max = (hi - 1) / step;
  if (c_max < c_min) {
    return absl::InvalidArgumentError(
        absl::StrCat("no ", bits, "-bit candidates are 1 mod ", step));
  }
  const uint64_t count = c_max - c_min + 1;

  std::mt19937_64 rng(seed);
  const uint64_t start = rng() % count;
  uint64_t stride = 1;
  if (count > 1) {
    do {
      stride = 1 + rng() % (count - 1);
    } while (std::gcd(stride, count) != 1);
  }

  RnsBasis basis;
  for (uint64_t i = 0; i < count && basis.moduli.size() < l; ++i) {
    uint64_t c = c_min + static_cast<uint64_t>((u128{i} * stride + start) % count);
    uint64_t q = c * step + 1;
    if (!IsPrime(q)) continue;
    auto modulus = PrimeModulus::Create(static_cast<Word>(q), n);
    if (!modulus.ok()) return modulus.status();
    basis.moduli.push_back(*modulus);
  }
  if (basis.moduli.size() < l) {
    return absl::NotFoundError(absl::StrCat(
        "only ", basis.moduli.size(), " of ", l, " requested ", bits,
        "-bit primes are 1 mod ", step));
  }
  return basis;
}

int64_t CountRestrictedModuli(int word_bits, RestrictedResidue residue) {
  const uint64_t limit = uint64_t{1} << word_bits;
  const uint64_t unit = uint64_t{1} << 16;
  int64_t count = 0;
  for (uint64_t k = 1;; ++k) {
    uint64_t q = residue == RestrictedResidue::kMinusOne ? k * unit - 1
                                                         : k * unit + 1;
    if (q >= limit) break;
    if (IsPrime(q)) ++count;
  }
  return count;
}

}  // namespace hevec
