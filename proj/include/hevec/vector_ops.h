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

#ifndef HEVEC_VECTOR_OPS_H_
#define HEVEC_VECTOR_OPS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "hevec/residue_vector.h"
#include "hevec/rns.h"

namespace hevec {

// Semantics of the residue-vector instructions. Every operand word is first
// reduced modulo the instruction modulus, so any 32-bit vector is a valid
// input; outputs are canonical.

std::vector<Word> VecAdd(std::span<const Word> a, std::span<const Word> b,
                         Word q);

std::vector<Word> VecMul(std::span<const Word> a, std::span<const Word> b,
                         Word q);

std::vector<Word> VecMulScalar(std::span<const Word> a, Word scalar, Word q);

std::vector<Word> VecNtt(std::span<const Word> a, const PrimeModulus& modulus);

std::vector<Word> VecIntt(std::span<const Word> a, const PrimeModulus& modulus);

std::vector<Word> VecAutomorphism(std::span<const Word> a, uint64_t k, Word q,
                                  Domain domain);

}  // namespace hevec

#endif  // HEVEC_VECTOR_OPS_H_
