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

#ifndef HEVEC_MONTGOMERY_H_
#define HEVEC_MONTGOMERY_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "hevec/rns.h"

namespace hevec {

// Montgomery arithmetic with R = 2^32 for moduli q ≡ -1 (mod 2^16).
//
// The congruence makes -q^{-1} ≡ 1 (mod 2^16), so each of the two 16-bit
// reduction rounds takes m = T mod 2^16 directly, with no multiplication by
// the usual q' constant.
class MontgomeryModulus {
 public:
  static absl::StatusOr<MontgomeryModulus> Create(Word q);

  Word modulus() const { return q_; }

  Word ToMontgomery(Word a) const;
  Word FromMontgomery(Word a) const { return Mul(a, 1); }

  // a * b * 2^-32 mod q for inputs in [0, q).
  Word Mul(Word a, Word b) const;

 private:
  explicit MontgomeryModulus(Word q) : q_(q) {}

  Word q_;
};

}  // namespace hevec

#endif  // HEVEC_MONTGOMERY_H_
