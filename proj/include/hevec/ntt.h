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

#ifndef HEVEC_NTT_H_
#define HEVEC_NTT_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "hevec/residue_vector.h"
#include "hevec/rns.h"

namespace hevec {

// Negacyclic NTT convention: output_j = a(psi^(2j+1)) for a primitive 2N-th
// root psi, outputs in natural order.

// In-place transforms over raw words. Inputs must be reduced mod q and N
// must divide modulus.n_max.
void ForwardNttInPlace(std::span<Word> a, const PrimeModulus& modulus);
void InverseNttInPlace(std::span<Word> a, const PrimeModulus& modulus);

absl::StatusOr<ResidueVector> NttReference(const ResidueVector& rv);
absl::StatusOr<ResidueVector> InttReference(const ResidueVector& rv);

// O(N^2) product in Z_q[x]/(x^N + 1).
absl::StatusOr<ResidueVector> NegacyclicMulReference(const ResidueVector& a,
                                                     const ResidueVector& b);

// Negacyclic schoolbook product over raw words, used by oracles that work
// modulo a non-NTT modulus (e.g. the plaintext modulus t).
std::vector<Word> NegacyclicMulSchoolbook(std::span<const Word> a,
                                          std::span<const Word> b, Word q);

// A residue polynomial viewed as g groups (chunks) of e lanes.
struct GridShape {
  size_t g = 1;
  size_t e = 1;

  size_t n() const { return g * e; }

  // Checks powers of two and g <= e.
  absl::Status Validate() const;

  // Shape used by an e-lane unit for an n-element vector.
  static absl::StatusOr<GridShape> ForLanes(size_t n, size_t e);
};

enum class NttDirection { kForward, kInverse };

// Precomputed factors for the four-step pipeline: the stage-1 E-point
// decimation-in-time butterflies, the G x E inter-stage twiddle grid (which
// also carries the negacyclic pre/post factors and N^-1), and the stage-2
// G-point decimation-in-frequency butterflies.
struct TwiddleTable {
  Word q = 0;
  size_t n = 0;
  GridShape shape;
  NttDirection direction = NttDirection::kForward;
  std::vector<Word> stage1;               // indexed m + i, size e
  std::vector<Word> grid;                 // g rows x e columns
  std::vector<std::vector<Word>> stage2;  // per level (m = g, g/2, ..., 2)

  static TwiddleTable Build(const PrimeModulus& modulus, GridShape shape,
                            NttDirection direction);

  bool operator==(const TwiddleTable& other) const {
    return q == other.q && n == other.n && direction == other.direction &&
           stage1 == other.stage1 && grid == other.grid &&
           stage2 == other.stage2;
  }
};

// Process-wide cache; construction is internally synchronized.
std::shared_ptr<const TwiddleTable> GetTwiddleTable(const PrimeModulus& modulus,
                                                    GridShape shape,
                                                    NttDirection direction);

// Four-step NTT on an e-lane datapath: E-point DIT NTTs on each group,
// twiddle-grid multiply, quadrant-swap transpose, G-point DIF NTTs. Equal to
// NttReference / InttReference bit for bit.
absl::StatusOr<ResidueVector> NttFourStep(const ResidueVector& rv,
                                          GridShape shape,
                                          NttDirection direction);

// Raw-word variant; `a` must have shape.n() reduced elements.
void NttFourStepInPlace(std::span<Word> a, const PrimeModulus& modulus,
                        GridShape shape, NttDirection direction);

struct NttMultiplierCount {
  int64_t per_stage_ntt = 0;  // butterflies of one E-point NTT
  int64_t total = 0;          // two E-point NTTs plus the twiddle multipliers
};

// Multipliers in a fully pipelined four-step unit with e lanes.
NttMultiplierCount NttUnitMultiplierCount(int64_t e);

// Bit reversal of `x` over log2(n) bits.
size_t BitReverse(size_t x, size_t n);

}  // namespace hevec

#endif  // HEVEC_NTT_H_
