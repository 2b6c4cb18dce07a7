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

#include "hevec/ntt.h"

#include <bit>
#include <map>
#include <mutex>
#include <tuple>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "hevec/transpose.h"

namespace hevec {
namespace {

bool IsPow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Power tables for the reference transform at one (q, N).
struct ReferenceTables {
  std::vector<Word> psi_pows;      // psi^i
  std::vector<Word> psi_inv_pows;  // N^-1 * psi^-i
  std::vector<Word> omega_pows;    // omega^i, i < N/2
  std::vector<Word> omega_inv_pows;
};

std::shared_ptr<const ReferenceTables> GetReferenceTables(
    const PrimeModulus& modulus, size_t n) {
  static std::mutex mu;
  static std::map<std::tuple<Word, Word, size_t>,
                  std::shared_ptr<const ReferenceTables>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(modulus.q, modulus.psi, n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const Word q = modulus.q;
  const Word psi = modulus.PsiFor(n);
  const Word psi_inv = ModInv(psi, q);
  const Word omega = ModMul(psi, psi, q);
  const Word omega_inv = ModInv(omega, q);
  const Word n_inv = ModInv(static_cast<Word>(n % q), q);
  auto tables = std::make_shared<ReferenceTables>();
  tables->psi_pows.resize(n);
  tables->psi_inv_pows.resize(n);
  Word p = 1, pi = n_inv;
  for (size_t i = 0; i < n; ++i) {
    tables->psi_pows[i] = p;
    tables->psi_inv_pows[i] = pi;
    p = ModMul(p, psi, q);
    pi = ModMul(pi, psi_inv, q);
  }
  tables->omega_pows.resize(n / 2);
  tables->omega_inv_pows.resize(n / 2);
  Word w = 1, wi = 1;
  for (size_t i = 0; i < n / 2; ++i) {
    tables->omega_pows[i] = w;
    tables->omega_inv_pows[i] = wi;
    w = ModMul(w, omega, q);
    wi = ModMul(wi, omega_inv, q);
  }
  cache.emplace(key, tables);
  return tables;
}

// Natural-order cyclic DFT with the given half table of root powers.
void CyclicDft(std::span<Word> a, const std::vector<Word>& pows, Word q) {
  const size_t n = a.size();
  for (size_t i = 0; i < n; ++i) {
    size_t j = BitReverse(i, n);
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t half = len / 2;
    const size_t stride = n / len;
    for (size_t s = 0; s < n; s += len) {
      for (size_t k = 0; k < half; ++k) {
        Word u = a[s + k];
        Word v = ModMul(a[s + k + half], pows[k * stride], q);
        a[s + k] = ModAdd(u, v, q);
        a[s + k + half] = ModSub(u, v, q);
      }
    }
  }
}

absl::Status CheckNttInput(const ResidueVector& rv, Domain expected) {
  if (rv.domain() != expected) {
    return absl::InvalidArgumentError(
        expected == Domain::kCoefficient
            ? "forward NTT expects a coefficient-domain vector"
            : "inverse NTT expects an NTT-domain vector");
  }
  if (rv.modulus().n_max % rv.n() != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "modulus ", rv.q(), " has no ", 2 * rv.n(), "-th root of unity"));
  }
  return absl::OkStatus();
}

// Decimation-in-time butterflies, natural order in, bit-reversed out.
void StageOneDit(std::span<Word> a, const std::vector<Word>& tw, Word q) {
  const size_t e = a.size();
  for (size_t m = 1, t = e / 2; m < e; m <<= 1, t >>= 1) {
    for (size_t i = 0; i < m; ++i) {
      const Word w = tw[m + i];
      const size_t j1 = 2 * i * t;
      for (size_t j = j1; j < j1 + t; ++j) {
        Word u = a[j];
        Word v = ModMul(a[j + t], w, q);
        a[j] = ModAdd(u, v, q);
        a[j + t] = ModSub(u, v, q);
      }
    }
  }
}

// Decimation-in-frequency butterflies, natural order in, bit-reversed out.
void StageTwoDif(std::span<Word> a, const std::vector<std::vector<Word>>& tw,
                 Word q) {
  const size_t g = a.size();
  size_t level = 0;
  for (size_t m = g; m >= 2; m >>= 1, ++level) {
    const size_t h = m / 2;
    const std::vector<Word>& w = tw[level];
    for (size_t s = 0; s < g; s += m) {
      for (size_t k = 0; k < h; ++k) {
        Word u = a[s + k];
        Word v = a[s + k + h];
        a[s + k] = ModAdd(u, v, q);
        a[s + k + h] = ModMul(ModSub(u, v, q), w[k], q);
      }
    }
  }
}

}  // namespace

size_t BitReverse(size_t x, size_t n) {
  const int bits = std::countr_zero(n);
  size_t r = 0;
  for (int b = 0; b < bits; ++b) {
    r = (r << 1) | ((x >> b) & 1);
  }
  return r;
}

void ForwardNttInPlace(std::span<Word> a, const PrimeModulus& modulus) {
  const size_t n = a.size();
  auto tables = GetReferenceTables(modulus, n);
  for (size_t i = 0; i < n; ++i) {
    a[i] = ModMul(a[i], tables->psi_pows[i], modulus.q);
  }
  CyclicDft(a, tables->omega_pows, modulus.q);
}

void InverseNttInPlace(std::span<Word> a, const PrimeModulus& modulus) {
  const size_t n = a.size();
  auto tables = GetReferenceTables(modulus, n);
  CyclicDft(a, tables->omega_inv_pows, modulus.q);
  for (size_t i = 0; i < n; ++i) {
    a[i] = ModMul(a[i], tables->psi_inv_pows[i], modulus.q);
  }
}

absl::StatusOr<ResidueVector> NttReference(const ResidueVector& rv) {
  if (auto s = CheckNttInput(rv, Domain::kCoefficient); !s.ok()) return s;
  ResidueVector out = rv;
  ForwardNttInPlace(out.mutable_coeffs(), rv.modulus());
  out.set_domain(Domain::kNtt);
  return out;
}

absl::StatusOr<ResidueVector> InttReference(const ResidueVector& rv) {
  if (auto s = CheckNttInput(rv, Domain::kNtt); !s.ok()) return s;
  ResidueVector out = rv;
  InverseNttInPlace(out.mutable_coeffs(), rv.modulus());
  out.set_domain(Domain::kCoefficient);
  return out;
}

std::vector<Word> NegacyclicMulSchoolbook(std::span<const Word> a,
                                          std::span<const Word> b, Word q) {
  const size_t n = a.size();
  std::vector<Word> c(n, 0);
  for (size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < n; ++j) {
      Word prod = ModMul(a[i], b[j], q);
      size_t k = i + j;
      if (k < n) {
        c[k] = ModAdd(c[k], prod, q);
      } else {
        c[k - n] = ModSub(c[k - n], prod, q);
      }
    }
  }
  return c;
}

absl::StatusOr<ResidueVector> NegacyclicMulReference(const ResidueVector& a,
                                                     const ResidueVector& b) {
  if (a.n() != b.n() || a.q() != b.q()) {
    return absl::InvalidArgumentError("operands differ in length or modulus");
  }
  if (a.domain() != Domain::kCoefficient ||
      b.domain() != Domain::kCoefficient) {
    return absl::InvalidArgumentError("operands must be coefficient-domain");
  }
  return ResidueVector::Create(
      NegacyclicMulSchoolbook(a.coeffs(), b.coeffs(), a.q()), a.modulus(),
      Domain::kCoefficient);
}

absl::Status GridShape::Validate() const {
  if (!IsPow2(g) || !IsPow2(e)) {
    return absl::InvalidArgumentError(
        absl::StrCat("grid ", g, "x", e, " is not power-of-two"));
  }
  if (g > e) {
    return absl::InvalidArgumentError(
        absl::StrCat("grid ", g, "x", e, " has more groups than lanes"));
  }
  return absl::OkStatus();
}

absl::StatusOr<GridShape> GridShape::ForLanes(size_t n, size_t e) {
  if (!IsPow2(n) || !IsPow2(e)) {
    return absl::InvalidArgumentError("lengths must be powers of two");
  }
  GridShape shape = n >= e ? GridShape{n / e, e} : GridShape{1, n};
  if (auto s = shape.Validate(); !s.ok()) return s;
  return shape;
}

TwiddleTable TwiddleTable::Build(const PrimeModulus& modulus, GridShape shape,
                                 NttDirection direction) {
  const Word q = modulus.q;
  const size_t g = shape.g, e = shape.e, n = shape.n();
  const Word psi = modulus.PsiFor(n);
  const Word psi_inv = ModInv(psi, q);
  const bool forward = direction == NttDirection::kForward;
  const Word n_inv = ModInv(static_cast<Word>(n % q), q);

  TwiddleTable t;
  t.q = q;
  t.n = n;
  t.shape = shape;
  t.direction = direction;

  // psi_e = psi^g is a primitive 2e-th root.
  const Word psi_e = ModPow(forward ? psi : psi_inv, g, q);
  t.stage1.assign(e, 0);
  for (size_t m = 1; m < e; m <<= 1) {
    for (size_t i = 0; i < m; ++i) {
      const uint64_t scale = e / (2 * m);
      const uint64_t rev = m == 1 ? 0 : BitReverse(i, m);
      // Forward: negacyclic roots; inverse: cyclic roots omega_e^-1.
      const uint64_t exp = forward ? (2 * rev + 1) * scale : 2 * rev * scale;
      t.stage1[m + i] = ModPow(psi_e, exp, q);
    }
  }

  t.grid.assign(g * e, 0);
  for (size_t r = 0; r < g; ++r) {
    for (size_t p = 0; p < e; ++p) {
      const uint64_t je = BitReverse(p, e);
      if (forward) {
        t.grid[r * e + p] = ModPow(psi, r * (2 * je + 1) % (2 * n), q);
      } else {
        t.grid[r * e + p] =
            ModMul(n_inv, ModPow(psi_inv, (2 * r + 1) * je % (2 * n), q), q);
      }
    }
  }

  // psi_g = psi^e is a primitive 2g-th root.
  const Word psi_g = ModPow(psi, e, q);
  const Word psi_g_inv = ModPow(psi_inv, e, q);
  for (size_t m = g; m >= 2; m >>= 1) {
    std::vector<Word> level(m / 2);
    for (size_t k = 0; k < m / 2; ++k) {
      if (forward) {
        // Cyclic: omega_g^(k g/m) = psi_g^(2 k g/m).
        level[k] = ModPow(psi_g, 2 * k * (g / m), q);
      } else {
        level[k] = ModPow(psi_g_inv, (2 * k + 1) * (g / m), q);
      }
    }
    t.stage2.push_back(std::move(level));
  }
  return t;
}

std::shared_ptr<const TwiddleTable> GetTwiddleTable(const PrimeModulus& modulus,
                                                    GridShape shape,
                                                    NttDirection direction) {
  static std::mutex mu;
  static std::map<std::tuple<Word, Word, size_t, size_t, int>,
                  std::shared_ptr<const TwiddleTable>>
      cache;
  auto key = std::make_tuple(modulus.q, modulus.psi, shape.g, shape.e,
                             static_cast<int>(direction));
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto table = std::make_shared<const TwiddleTable>(
      TwiddleTable::Build(modulus, shape, direction));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, table).first->second;
}

void NttFourStepInPlace(std::span<Word> a, const PrimeModulus& modulus,
                        GridShape shape, NttDirection direction) {
  const size_t g = shape.g, e = shape.e;
  const Word q = modulus.q;
  auto tw = GetTwiddleTable(modulus, shape, direction);

  // Groups are strided: group r holds elements r, r+g, r+2g, ...
  Matrix groups(g, e);
  for (size_t r = 0; r < g; ++r) {
    std::span<Word> row(groups.data.data() + r * e, e);
    for (size_t c = 0; c < e; ++c) row[c] = a[r + g * c];
    StageOneDit(row, tw->stage1, q);
    for (size_t p = 0; p < e; ++p) {
      row[p] = ModMul(row[p], tw->grid[r * e + p], q);
    }
  }
  Matrix transposed = TransposeQuadrantSwap(groups)->out;  // e x g
  for (size_t p = 0; p < e; ++p) {
    std::span<Word> row(transposed.data.data() + p * g, g);
    StageTwoDif(row, tw->stage2, q);
    const size_t je = BitReverse(p, e);
    for (size_t r = 0; r < g; ++r) {
      a[je + e * BitReverse(r, g)] = row[r];
    }
  }
}

absl::StatusOr<ResidueVector> NttFourStep(const ResidueVector& rv,
                                          GridShape shape,
                                          NttDirection direction) {
  if (auto s = shape.Validate(); !s.ok()) return s;
  if (shape.n() != rv.n()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "grid ", shape.g, "x", shape.e, " does not cover N=", rv.n()));
  }
  const Domain expected = direction == NttDirection::kForward
                              ? Domain::kCoefficient
                              : Domain::kNtt;
  if (auto s = CheckNttInput(rv, expected); !s.ok()) return s;
  ResidueVector out = rv;
  NttFourStepInPlace(out.mutable_coeffs(), rv.modulus(), shape, direction);
  out.set_domain(direction == NttDirection::kForward ? Domain::kNtt
                                                     : Domain::kCoefficient);
  return out;
}

NttMultiplierCount NttUnitMultiplierCount(int64_t e) {
  const int64_t log_e = std::countr_zero(static_cast<uint64_t>(e));
  NttMultiplierCount count;
  count.per_stage_ntt = e * (log_e - 1) / 2;
  count.total = 2 * count.per_stage_ntt + e;
  return count;
}

}  // namespace hevec
