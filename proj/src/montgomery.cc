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

#include "hevec/montgomery.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace hevec {

absl::StatusOr<MontgomeryModulus> MontgomeryModulus::Create(Word q) {
  if ((q & 0xFFFFu) != 0xFFFFu) {
    return absl::InvalidArgumentError(
        absl::StrCat("modulus ", q, " is not -1 mod 2^16"));
  }
  if (!IsPrime(q)) {
    return absl::InvalidArgumentError(absl::StrCat("modulus ", q, " is not prime"));
  }
  return MontgomeryModulus(q);
}

Word MontgomeryModulus::ToMontgomery(Word a) const {
  return static_cast<Word>((uint64_t{a} << 32) % q_);
}

Word MontgomeryModulus::Mul(Word a, Word b) const {
  unsigned __int128 t = static_cast<unsigned __int128>(uint64_t{a} * b);
  for (int round = 0; round < 2; ++round) {
    uint64_t m = static_cast<uint64_t>(t) & 0xFFFFu;
    t = (t + static_cast<unsigned __int128>(m) * q_) >> 16;
  }
  uint64_t r = static_cast<uint64_t>(t);
  return static_cast<Word>(r >= q_ ? r - q_ : r);
}

}  // namespace hevec
