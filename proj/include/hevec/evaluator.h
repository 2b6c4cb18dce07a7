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

#ifndef HEVEC_EVALUATOR_H_
#define HEVEC_EVALUATOR_H_

#include <map>
#include <vector>

#include "absl/status/statusor.h"
#include "hevec/bgv.h"
#include "hevec/dsl.h"

namespace hevec {

using HintSet = std::map<HintId, KeySwitchHint>;

// One hint per distinct identity used by the program.
absl::StatusOr<HintSet> GenerateProgramHints(const BgvParams& params,
                                             const SecretKey& sk,
                                             const HomProgram& program,
                                             Prng& prng);

// A plaintext polynomial reduced into each of the first `level` moduli and
// transformed to the NTT domain.
RnsPoly EncodePlaintext(const BgvParams& params, const Plaintext& p,
                        size_t level);

// Runs the program on ciphertexts with the scheme's reference operations.
absl::StatusOr<std::vector<Ciphertext>> EvaluateEncrypted(
    const BgvParams& params, const HomProgram& program,
    const std::vector<Ciphertext>& inputs, const HintSet& hints);

}  // namespace hevec

#endif  // HEVEC_EVALUATOR_H_
