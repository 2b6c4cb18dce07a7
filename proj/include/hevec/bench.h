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

#ifndef HEVEC_BENCH_H_
#define HEVEC_BENCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "hevec/dfg.h"
#include "hevec/formats.h"
#include "hevec/machine.h"

namespace hevec {

// Desk-scale benchmark suites: matvec, keyswitch-micro, ntt-micro,
// automorphism-micro and reuse-ablation.
const std::vector<std::string>& BenchSuites();

struct BenchOptions {
  size_t n = 64;
  size_t level = 4;
  size_t rows = 4;  // matvec rows
  int modulus_bits = 30;
  uint64_t seed = 1;
};

struct BenchResult {
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;  // one line per check or derived figure
  bool ok = true;                  // every schedule valid, every check held
};

absl::StatusOr<BenchResult> RunBench(absl::string_view suite,
                                     const MachineConfig& config,
                                     const BenchOptions& options = {});

// Per-residue transform kernels on one ciphertext input at `level`: the
// a-part goes through an INTT, the b-part through an INTT then an NTT.
// Output objects belong to node 0, which is also the program's output.
InstructionDfg BuildTransformMicro(size_t n, size_t level,
                                   const std::vector<PrimeModulus>& moduli,
                                   Word t);

// sigma_k applied to every NTT-domain residue of one ciphertext input.
InstructionDfg BuildAutomorphismMicro(size_t n, size_t level, uint64_t k,
                                      const std::vector<PrimeModulus>& moduli,
                                      Word t);

}  // namespace hevec

#endif  // HEVEC_BENCH_H_
