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

#include "hevec/automorphism.h"

#include "absl/strings/str_cat.h"
#include "hevec/transpose.h"

namespace hevec {
namespace {

// Inverse of an odd x modulo 2^64 by Newton iteration.
uint64_t InverseMod2k(uint64_t x) {
  uint64_t inv = x;
  for (int i = 0; i < 6; ++i) inv *= 2 - x * inv;
  return inv;
}

// The map i -> (a*i + b) mod N, written as one rule for both domains.
struct AffineIndexMap {
  uint64_t a = 1;
  uint64_t b = 0;
};

AffineIndexMap IndexMapFor(uint64_t k, size_t n, Domain domain) {
  if (domain == Domain::kCoefficient) return {k % n, 0};
  const uint64_t kappa = GaloisInverse(k, n);
  return {kappa % n, (kappa - 1) / 2};
}

bool CoefficientNegated(size_t i, uint64_t k, size_t n) {
  return (static_cast<uint64_t>(i) * k) % (2 * n) >= n;
}

}  // namespace

absl::Status ValidateGaloisIndex(uint64_t k, size_t n) {
  if (k % 2 == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("automorphism index ", k, " is even"));
  }
  if (k >= 2 * n) {
    return absl::InvalidArgumentError(
        absl::StrCat("automorphism index ", k, " is not below 2N=", 2 * n));
  }
  return absl::OkStatus();
}

uint64_t GaloisInverse(uint64_t k, size_t n) {
  return InverseMod2k(k) & (2 * n - 1);
}

uint64_t RotationGaloisElement(int64_t r, size_t n) {
  const uint64_t two_n = 2 * n;
  uint64_t k = 1;
  const uint64_t steps = r < 0 ? static_cast<uint64_t>(-r) : r;
  for (uint64_t s = 0; s < steps; ++s) k = (k * 5) % two_n;
  return r < 0 ? GaloisInverse(k, n) : k;
}

size_t AutomorphismDestination(size_t i, uint64_t k, size_t n,
                               Domain domain) {
  AffineIndexMap map = IndexMapFor(k, n, domain);
  return (map.a * i + map.b) % n;
}

std::vector<Word> ApplyAutomorphism(std::span<const Word> in, Word q,
                                    uint64_t k, Domain domain) {
  const size_t n = in.size();
  const AffineIndexMap map = IndexMapFor(k, n, domain);
  std::vector<Word> out(n);
  for (size_t i = 0; i < n; ++i) {
    const size_t dest = (map.a * i + map.b) % n;
    Word v = in[i];
    if (domain == Domain::kCoefficient && CoefficientNegated(i, k, n)) {
      v = ModNeg(v, q);
    }
    out[dest] = v;
  }
  return out;
}

absl::StatusOr<ResidueVector> AutomorphismCoeff(const ResidueVector& rv,
                                                uint64_t k) {
  if (rv.domain() != Domain::kCoefficient) {
    return absl::InvalidArgumentError("expected a coefficient-domain vector");
  }
  if (auto s = ValidateGaloisIndex(k, rv.n()); !s.ok()) return s;
  return ResidueVector::Create(
      ApplyAutomorphism(rv.coeffs(), rv.q(), k, Domain::kCoefficient),
      rv.modulus(), Domain::kCoefficient);
}

absl::StatusOr<ResidueVector> AutomorphismEval(const ResidueVector& rv,
                                               uint64_t k) {
  if (rv.domain() != Domain::kNtt) {
    return absl::InvalidArgumentError("expected an NTT-domain vector");
  }
  if (auto s = ValidateGaloisIndex(k, rv.n()); !s.ok()) return s;
  return ResidueVector::Create(
      ApplyAutomorphism(rv.coeffs(), rv.q(), k, Domain::kNtt), rv.modulus(),
      Domain::kNtt);
}

absl::StatusOr<ResidueVector> AutomorphismVectorized(const ResidueVector& rv,
                                                     uint64_t k,
                                                     GridShape shape) {
  if (auto s = ValidateGaloisIndex(k, rv.n()); !s.ok()) return s;
  if (auto s = shape.Validate(); !s.ok()) return s;
  if (shape.n() != rv.n()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "grid ", shape.g, "x", shape.e, " does not cover N=", rv.n()));
  }
  const size_t g = shape.g, e = shape.e, n = rv.n();
  const Word q = rv.q();
  const bool coeff = rv.domain() == Domain::kCoefficient;
  const AffineIndexMap map = IndexMapFor(k, n, rv.domain());
  const uint64_t a_inv_e = InverseMod2k(map.a) & (e - 1);

  // Column permutation, identical for every chunk.
  Matrix m1(g, e);
  for (size_t r = 0; r < g; ++r) {
    for (size_t c = 0; c < e; ++c) {
      m1.at(r, (map.a * c + map.b) % e) = rv[r * e + c];
    }
  }
  absl::StatusOr<TransposeResult> t1 = TransposeQuadrantSwap(m1);
  if (!t1.ok()) return t1.status();

  // Row permutation: one fixed permutation per transposed row.
  Matrix m3(e, g);
  for (size_t cp = 0; cp < e; ++cp) {
    const uint64_t c = (a_inv_e * ((cp + e - map.b % e) % e)) % e;
    const uint64_t carry = (map.a * c + map.b) / e;
    for (size_t r = 0; r < g; ++r) {
      Word v = t1->out.at(cp, r);
      if (coeff && CoefficientNegated(r * e + c, k, n)) v = ModNeg(v, q);
      m3.at(cp, (map.a * r + carry) % g) = v;
    }
  }
  absl::StatusOr<TransposeResult> t2 = TransposeQuadrantSwap(m3);
  if (!t2.ok()) return t2.status();
  return ResidueVector::Create(std::move(t2->out.data), rv.modulus(),
                               rv.domain());
}

}  // namespace hevec
