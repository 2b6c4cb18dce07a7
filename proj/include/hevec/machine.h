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

#ifndef HEVEC_MACHINE_H_
#define HEVEC_MACHINE_H_

#include <cstddef>
#include <cstdint>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace hevec {

enum class FuKind { kNtt = 0, kAutomorphism = 1, kMultiplier = 2, kAdder = 3 };
inline constexpr int kNumFuKinds = 4;

const char* FuKindName(FuKind kind);

// High throughput: every unit accepts one E-element chunk per cycle.
// Low throughput: NTT units run one butterfly stage per pass and the
// automorphism unit permutes one element per cycle; the unit count is
// scaled so aggregate throughput is unchanged.
enum class FuModel { kHighThroughput, kLowThroughput };

struct MachineConfig {
  std::string name = "default";
  int clusters = 16;
  int lanes = 128;  // E
  int fus_ntt = 1;
  int fus_automorphism = 1;
  int fus_multiplier = 2;
  int fus_adder = 2;
  int64_t scratchpad_bytes = int64_t{64} << 20;
  int banks = 16;
  int rf_vectors_per_cluster = 64;
  int rf_read_ports = 10;
  int rf_write_ports = 6;
  int64_t hbm_bytes_per_cycle = 1024;
  int port_bytes = 512;
  int word_bits = 32;
  int latency_add = 4;
  int latency_mul = 8;
  int latency_ntt = 0;  // 0 derives the value from the lane count
  int latency_automorphism = 0;
  int mem_latency = 100;
  FuModel ntt_model = FuModel::kHighThroughput;
  FuModel automorphism_model = FuModel::kHighThroughput;

  absl::Status Validate() const;

  int64_t VectorBytes(size_t n) const {
    return static_cast<int64_t>(n) * word_bits / 8;
  }
  // Scratchpad capacity in residue vectors of length n.
  int64_t ScratchpadVectors(size_t n) const {
    return scratchpad_bytes / VectorBytes(n);
  }
  // Cycles to stream one vector through an E-lane port or unit.
  int64_t ChunkCycles(size_t n) const;

  // Off-chip transfer of `bytes`: cycles it occupies the memory interface
  // and a bank port, and the bytes per cycle it draws from HBM bandwidth.
  int64_t OffchipCycles(int64_t bytes) const;
  int64_t OffchipRate(int64_t bytes) const;

  int Bank(int64_t slot) const { return static_cast<int>(slot % banks); }

  // Physical units of a kind in one cluster, after low-throughput scaling.
  int FuCount(FuKind kind, size_t n) const;

  // Desk-scale defaults: E = 16 lanes, 4 clusters, 1 MiB scratchpad.
  static MachineConfig Desk();
};

struct FuTiming {
  int64_t issue_cycles = 0;  // unit occupancy per instruction
  int64_t latency = 0;       // first input chunk to first output chunk
};

// Latency of one pass through the quadrant-swap transpose: 3E/2.
int64_t TransposeLatency(int lanes);

absl::StatusOr<FuTiming> GetFuTiming(FuKind kind, size_t n,
                                     const MachineConfig& config);

}  // namespace hevec

#endif  // HEVEC_MACHINE_H_
