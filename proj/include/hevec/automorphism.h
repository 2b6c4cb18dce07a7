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

#ifndef HEVEC_AUTOMORPHISM_H_
#define HEVEC_AUTOMORPHISM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "hevec/ntt.h"
#include "hevec/residue_vector.h"
#include "hevec/rns.h"

namespace hevec {

// Checks that k is odd and lies in (0, 2N).
absl::Status ValidateGaloisIndex(uint64_t k, size_t n);

// sigma_k on a coefficient-domain vector: a_i moves to (i*k) mod N and is
// negated when (i*k) mod 2N >= N.
absl::StatusOr<ResidueVector> AutomorphismCoeff(const ResidueVector& rv,
                                                uint64_t k);

// sigma_k on an NTT-domain vector: out[j] = in[j'] with
// 2j'+1 = k(2j+1) mod 2N.
absl::StatusOr<ResidueVector> AutomorphismEval(const ResidueVector& rv,
                                               uint64_t k);

// Dispatches on the domain tag. Preconditions are not checked.
std::vector<Word> ApplyAutomorphism(std::span<const Word> in, Word q,
                                    uint64_t k, Domain domain);

// Output position of source index `i` under sigma_k in the given domain.
size_t AutomorphismDestination(size_t i, uint64_t k, size_t n, Domain domain);

// The same map computed as a column permutation, a transpose, a row
// permutation and a transpose back, each stage touching only e-element rows.
absl::StatusOr<ResidueVector> AutomorphismVectorized(const ResidueVector& rv,
                                                     uint64_t k,
                                                     GridShape shape);

// Galois element used for a rotation by r: 5^r mod 2N (r may be negative).
uint64_t RotationGaloisElement(int64_t r, size_t n);

// Inverse of an odd k modulo 2N.
uint64_t GaloisInverse(uint64_t k, size_t n);

}  // namespace hevec

#endif  // HEVEC_AUTOMORPHISM_H_
