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

#ifndef HEVEC_SIMULATOR_H_
#define HEVEC_SIMULATOR_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "hevec/bgv.h"
#include "hevec/compiler.h"
#include "hevec/dfg.h"
#include "hevec/dsl.h"
#include "hevec/evaluator.h"
#include "hevec/machine.h"

namespace hevec {

enum class ViolationKind {
  kMalformed,     // stream does not match the data-movement schedule
  kRaw,           // operand read before its producer completed
  kClobber,       // slot overwritten before its last scheduled use
  kFuOverlap,     // more than one instruction in flight on an FU issue slot
  kOversubscribed,  // port or bandwidth over capacity in some cycle
  kCapacity,      // scratchpad or register file overflow
  kLatency,       // result written back before the pipeline produced it
};

const char* ViolationKindName(ViolationKind kind);

struct Violation {
  ViolationKind kind = ViolationKind::kMalformed;
  int64_t cycle = 0;
  std::string component;
  std::string instruction;
  std::string message;

  std::string ToString() const;
};

// Off-chip bytes by object class. Compulsory traffic is the first load of
// each distinct object and the first store of each output object.
struct TrafficBreakdown {
  int64_t ksh_compulsory = 0;
  int64_t ksh_noncompulsory = 0;
  int64_t io_compulsory = 0;
  int64_t io_noncompulsory = 0;
  int64_t intermediate_load = 0;
  int64_t intermediate_store = 0;

  int64_t Total() const {
    return ksh_compulsory + ksh_noncompulsory + io_compulsory +
           io_noncompulsory + intermediate_load + intermediate_store;
  }
};

TrafficBreakdown TrafficReport(const DataMovementSchedule& dms,
                               const InstructionDfg& dfg);

struct SimStats {
  int64_t total_cycles = 0;
  std::array<int64_t, kNumFuKinds> fu_busy_cycles{};
  std::array<int64_t, kNumFuKinds> fu_units{};  // across all clusters
  TrafficBreakdown traffic;
  int64_t offchip_bytes = 0;  // every transfer, summed independently
  std::vector<int64_t> bandwidth_series;  // off-chip bytes per cycle
  int64_t peak_resident_bytes = 0;

  double FuUtilization(FuKind kind) const;
};

// Data for functional co-simulation. `program` must be the program the DFG
// was translated from (after any reordering); inputs follow its input list.
struct FunctionalInputs {
  BgvParams params;
  HomProgram program;
  std::vector<Ciphertext> inputs;
  HintSet hints;
};

struct SimResult {
  SimStats stats;
  std::vector<Violation> violations;
  std::optional<std::vector<Ciphertext>> outputs;

  bool ok() const { return violations.empty(); }
};

// Replays every component stream against the machine model and the
// data-movement schedule, reporting each hazard found. With functional
// inputs, also executes the ring arithmetic at the replayed times and
// returns the program outputs read back from off-chip memory.
absl::StatusOr<SimResult> ValidateAndRun(
    const CycleSchedule& schedule, const DataMovementSchedule& dms,
    const InstructionDfg& dfg, const MachineConfig& config,
    const FunctionalInputs* functional = nullptr);

// Seeded end-to-end check: generates a key, random plaintext inputs and the
// program's hints, encrypts, replays the schedule functionally and compares
// the decrypted outputs with plaintext evaluation and the replayed
// ciphertexts with the scheme's reference evaluation.
struct FunctionalCheck {
  SimResult result;
  bool decrypts = false;  // every output decrypts to the plaintext result
  bool bit_exact = false;  // outputs equal the reference ciphertexts
};

absl::StatusOr<FunctionalCheck> RunFunctionalCheck(
    const HomProgram& ordered, const BgvParams& params,
    const CycleSchedule& schedule, const DataMovementSchedule& dms,
    const InstructionDfg& dfg, const MachineConfig& config, uint64_t seed);

// Lower bounds on cycle count: FU work divided over all units, and
// off-chip bytes over HBM bandwidth.
int64_t ComputeBoundCycles(const InstructionDfg& dfg,
                           const MachineConfig& config);
int64_t BandwidthBoundCycles(const DataMovementSchedule& dms,
                             const InstructionDfg& dfg,
                             const MachineConfig& config);

struct NamedProgram {
  std::string name;
  HomProgram program;
  BgvParams params;
};

struct SweepRow {
  std::string program;
  std::string config;
  absl::Status status;
  SimStats stats;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Pairs where a config with at least as much of every resource ran
  // slower on the same program.
  std::vector<std::string> monotonicity_violations;
};

// True if `a` has at least as much of every resource as `b` and the same
// latencies and FU models.
bool Dominates(const MachineConfig& a, const MachineConfig& b);

SweepResult Sweep(const std::vector<MachineConfig>& configs,
                  const std::vector<NamedProgram>& programs);

}  // namespace hevec

#endif  // HEVEC_SIMULATOR_H_
