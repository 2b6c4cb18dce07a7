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

#ifndef HEVEC_COMPILER_H_
#define HEVEC_COMPILER_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "hevec/bgv.h"
#include "hevec/dfg.h"
#include "hevec/dsl.h"
#include "hevec/machine.h"

namespace hevec {

// ---------------------------------------------------------------------------
// Phase 1: homomorphic-operation ordering.

// A dependence-respecting order of node ids. Independent operations sharing
// a hint are clustered so each hint's uses are contiguous; clusters are list
// scheduled by earliest readiness with ties broken by node id. Falls back to
// program order if that has fewer hint transitions.
std::vector<int> OrderHomOps(const HomProgram& program);

// Rewrites the program so node i is the i-th node of `order`.
absl::StatusOr<HomProgram> ApplyOrder(const HomProgram& program,
                                      const std::vector<int>& order);

// Adjacent-pair hint changes along the hinted operations of `order`.
int CountHintTransitions(const HomProgram& program,
                         const std::vector<int>& order);

// ---------------------------------------------------------------------------
// Key-switch variants.

enum class KeySwitchVariant { kDigitPerResidue = 1 };

struct KeySwitchCost {
  int64_t transforms = 0;
  int64_t multiplies = 0;
  int64_t adds = 0;
  int64_t word_ops = 0;  // vector multiplies and adds times N
  int64_t hint_bytes = 0;
};

absl::StatusOr<KeySwitchCost> KeySwitchVariantCost(int variant_id,
                                                   size_t level, size_t n,
                                                   int word_bits = 32);

// Picks the variant with the lowest estimated cost. Only one variant exists.
KeySwitchVariant ChooseKeySwitchVariant(size_t level, double reuse_estimate,
                                        double fu_load_estimate);

// ---------------------------------------------------------------------------
// Translation to residue-vector instructions.

// Expands every node of the (already ordered) program into instructions,
// following the scheme's reference operations step for step. Hint matrix
// entries, input residues and plaintext constants become Load-able objects;
// program outputs are stored to output objects. Dead instructions are
// removed and priorities follow expansion order.
absl::StatusOr<InstructionDfg> Translate(const HomProgram& program,
                                         const BgvParams& params);

// ---------------------------------------------------------------------------
// Phase 2: off-chip data-movement scheduling.

enum class DmsKind { kCompute, kLoad, kStore };

struct DmsEntry {
  DmsKind kind = DmsKind::kCompute;
  int instruction = -1;  // DFG instruction (compute, initial load, output store)
  int value = -1;        // value produced, loaded or stored
  int object = -1;       // loads and stores
  int slot = -1;         // destination (compute, load) or source (store)
  std::vector<int> operand_slots;
  bool spill = false;    // store of an evicted dirty value
  int64_t resident = 0;  // resident vectors after this entry

  bool operator==(const DmsEntry& o) const;
};

struct DataMovementSchedule {
  int64_t capacity = 0;  // slots, one residue vector each
  int64_t vector_bytes = 0;
  std::vector<DataObject> spill_objects;  // ids continue the DFG's objects
  std::vector<DmsEntry> entries;

  int64_t PeakResident() const;
  const DataObject& Object(const InstructionDfg& dfg, int id) const;
  bool operator==(const DataMovementSchedule& o) const;
};

// A resident value that could be evicted.
struct VictimCandidate {
  int slot = 0;
  int64_t next_use = 0;  // max priority of unissued users; unused when dead
  bool dead = false;
};

// Index into `candidates` of the value to evict: a dead value if any,
// otherwise the one needed furthest in the future (lowest next_use). Ties go
// to the lowest slot. Returns -1 if no candidate has next_use strictly below
// `below` (pass INT64_MAX to force a choice).
int SelectVictim(const std::vector<VictimCandidate>& candidates,
                 int64_t below);

absl::StatusOr<DataMovementSchedule> ScheduleOffchip(
    const InstructionDfg& dfg, const MachineConfig& config);

// Same with an explicit capacity in vectors.
absl::StatusOr<DataMovementSchedule> ScheduleOffchipWithCapacity(
    const InstructionDfg& dfg, int64_t capacity, int64_t vector_bytes);

// ---------------------------------------------------------------------------
// Phase 3: cycle-level scheduling.

struct StreamEntry {
  std::string op;
  int64_t wait = 0;  // cycles until the next entry issues

  bool operator==(const StreamEntry& o) const {
    return op == o.op && wait == o.wait;
  }
};

// Component names: "hbm" carries loads ("L<step>") and stores ("S<step>");
// "c<k>.<fu><u>" carries instruction starts ("I<id>") on unit u of an FU
// kind (ntt, aut, mul, add); "c<k>.in<p>" carries operand transfers
// ("I<id>.rd<j>") on inbound crossbar port p; "c<k>.out" carries writebacks
// ("I<id>.wb"). Every stream begins with a "nop" whose wait is the first
// issue cycle.
struct ComponentStream {
  std::string component;
  std::vector<StreamEntry> entries;

  bool operator==(const ComponentStream& o) const {
    return component == o.component && entries == o.entries;
  }
};

struct CycleSchedule {
  int64_t total_cycles = 0;
  std::vector<ComponentStream> streams;

  bool operator==(const CycleSchedule& o) const {
    return total_cycles == o.total_cycles && streams == o.streams;
  }
};

inline constexpr int kInboundPorts = 2;

FuKind FuKindFor(Opcode op);

absl::StatusOr<CycleSchedule> ScheduleCycles(const DataMovementSchedule& dms,
                                             const InstructionDfg& dfg,
                                             const MachineConfig& config);

// ---------------------------------------------------------------------------
// Whole pipeline.

struct CompileOptions {
  bool reorder = true;  // phase-1 ordering; false keeps program order
};

struct CompiledProgram {
  HomProgram ordered;
  InstructionDfg dfg;
  DataMovementSchedule dms;
  CycleSchedule schedule;
};

absl::StatusOr<CompiledProgram> Compile(const HomProgram& program,
                                        const BgvParams& params,
                                        const MachineConfig& config,
                                        const CompileOptions& options = {});

}  // namespace hevec

#endif  // HEVEC_COMPILER_H_
