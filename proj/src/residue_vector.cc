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

#include "hevec/residue_vector.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace hevec {

absl::StatusOr<ResidueVector> ResidueVector::Create(std::vector<Word> coeffs,
                                                    const PrimeModulus& modulus,
                                                    Domain domain) {
  const size_t n = coeffs.size();
  if (n < 2 || (n & (n - 1)) != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("length ", n, " is not a power of two >= 2"));
  }
  if (n > modulus.n_max) {
    return absl::InvalidArgumentError(absl::StrCat(
        "length ", n, " exceeds modulus capacity ", modulus.n_max));
  }
  for (Word c : coeffs) {
    if (c >= modulus.q) {
      return absl::InvalidArgumentError(
          absl::StrCat("coefficient ", c, " not reduced mod ", modulus.q));
    }
  }
  return ResidueVector(std::move(coeffs), modulus, domain);
}

ResidueVector ResidueVector::Zero(size_t n, const PrimeModulus& modulus,
                                  Domain domain) {
  return ResidueVector(std::vector<Word>(n, 0), modulus, domain);
}

}  // namespace hevec
