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

#ifndef HEVEC_RESIDUE_VECTOR_H_
#define HEVEC_RESIDUE_VECTOR_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "hevec/rns.h"

namespace hevec {

enum class Domain { kCoefficient, kNtt };

// One RNS component: N words modulo a single prime, tagged with the domain
// it currently lives in.
class ResidueVector {
 public:
  ResidueVector() = default;

  // Validates that N is a power of two in [2, modulus.n_max] and that every
  // coefficient is already reduced.
  static absl::StatusOr<ResidueVector> Create(std::vector<Word> coeffs,
                                              const PrimeModulus& modulus,
                                              Domain domain);

  static ResidueVector Zero(size_t n, const PrimeModulus& modulus,
                            Domain domain);

  size_t n() const { return coeffs_.size(); }
  Word q() const { return modulus_.q; }
  const PrimeModulus& modulus() const { return modulus_; }
  Domain domain() const { return domain_; }

  std::span<const Word> coeffs() const { return coeffs_; }
  std::span<Word> mutable_coeffs() { return coeffs_; }
  Word operator[](size_t i) const { return coeffs_[i]; }

  void set_domain(Domain domain) { domain_ = domain; }

  bool operator==(const ResidueVector& other) const {
    return domain_ == other.domain_ && modulus_.q == other.modulus_.q &&
           coeffs_ == other.coeffs_;
  }

 private:
  ResidueVector(std::vector<Word> coeffs, const PrimeModulus& modulus,
                Domain domain)
      : coeffs_(std::move(coeffs)), modulus_(modulus), domain_(domain) {}

  std::vector<Word> coeffs_;
  PrimeModulus modulus_;
  Domain domain_ = Domain::kCoefficient;
};

}  // namespace hevec

#endif  // HEVEC_RESIDUE_VECTOR_H_
