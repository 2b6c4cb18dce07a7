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

#include "hevec/machine.h"

#include <algorithm>
#include <bit>
#include <initializer_list>
#include <utility>

#include "absl/strings/str_cat.h"

namespace hevec {
namespace {

int Log2(uint64_t x) { return std::countr_zero(x); }

bool IsPow2(uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

}  // namespace

const char* FuKindName(FuKind kind) {
  switch (kind) {
    case FuKind::kNtt:
      return "ntt";
    case FuKind::kAutomorphism:
      return "aut";
    case FuKind::kMultiplier:
      return "mul";
    case FuKind::kAdder:
      return "add";
  }
  return "?";
}

absl::Status MachineConfig::Validate() const {
  auto positive = [](const char* what, int64_t v) -> absl::Status {
    if (v >= 1) return absl::OkStatus();
    return absl::InvalidArgumentError(absl::StrCat(what, " must be >= 1"));
  };
  for (auto [what, v] : std::initializer_list<std::pair<const char*, int64_t>>{
           {"clusters", clusters},
           {"lanes", lanes},
           {"fus_ntt", fus_ntt},
           {"fus_automorphism", fus_automorphism},
           {"fus_multiplier", fus_multiplier},
           {"fus_adder", fus_adder},
           {"scratchpad_bytes", scratchpad_bytes},
           {"banks", banks},
           {"rf_vectors_per_cluster", rf_vectors_per_cluster},
           {"rf_read_ports", rf_read_ports},
           {"rf_write_ports", rf_write_ports},
           {"hbm_bytes_per_cycle", hbm_bytes_per_cycle},
           {"port_bytes", port_bytes},
           {"word_bits", word_bits},
           {"latency_add", latency_add},
           {"latency_mul", latency_mul},
           {"mem_latency", mem_latency}}) {
    if (auto s = positive(what, v); !s.ok()) return s;
  }
  if (!IsPow2(lanes)) {
    return absl::InvalidArgumentError("lanes must be a power of two");
  }
  if (word_bits % 8 != 0) {
    return absl::InvalidArgumentError("word_bits must be a multiple of 8");
  }
  if (port_bytes != lanes * word_bits / 8) {
    return absl::InvalidArgumentError(absl::StrCat(
        "port_bytes ", port_bytes, " must equal lanes*word_bits/8 = ",
        lanes * word_bits / 8));
  }
  if (latency_ntt < 0 || latency_automorphism < 0) {
    return absl::InvalidArgumentError("latencies must be non-negative");
  }
  // Operands of one instruction plus its result must fit.
  if (rf_vectors_per_cluster < 3) {
    return absl::InvalidArgumentError("rf_vectors_per_cluster must be >= 3");
  }
  if (rf_read_ports < 2 || rf_write_ports < 2) {
    return absl::InvalidArgumentError("register file needs >= 2 ports");
  }
  return absl::OkStatus();
}

int64_t MachineConfig::ChunkCycles(size_t n) const {
  return std::max<int64_t>(1, static_cast<int64_t>(n) / lanes);
}

int64_t MachineConfig::OffchipCycles(int64_t bytes) const {
  const int64_t per_cycle = std::min<int64_t>(port_bytes, hbm_bytes_per_cycle);
  return std::max<int64_t>(1, (bytes + per_cycle - 1) / per_cycle);
}

int64_t MachineConfig::OffchipRate(int64_t bytes) const {
  const int64_t cycles = OffchipCycles(bytes);
  return (bytes + cycles - 1) / cycles;
}

int MachineConfig::FuCount(FuKind kind, size_t n) const {
  switch (kind) {
    case FuKind::kNtt:
      return ntt_model == FuModel::kHighThroughput
                 ? fus_ntt
                 : fus_ntt * std::max(1, Log2(n));
    case FuKind::kAutomorphism:
      return automorphism_model == FuModel::kHighThroughput
                 ? fus_automorphism
                 : fus_automorphism *
                       static_cast<int>(std::min<int64_t>(lanes, n));
    case FuKind::kMultiplier:
      return fus_multiplier;
    case FuKind::kAdder:
      return fus_adder;
  }
  return 0;
}

MachineConfig MachineConfig::Desk() {
  MachineConfig c;
  c.name = "desk";
  c.clusters = 4;
  c.lanes = 16;
  c.port_bytes = 64;
  c.scratchpad_bytes = int64_t{1} << 20;
  c.hbm_bytes_per_cycle = 128;
  c.mem_latency = 50;
  return c;
}

int64_t TransposeLatency(int lanes) { return 3 * static_cast<int64_t>(lanes) / 2; }

absl::StatusOr<FuTiming> GetFuTiming(FuKind kind, size_t n,
                                     const MachineConfig& config) {
  if (!IsPow2(n) || n < 2 ||
      n > static_cast<size_t>(config.lanes) * config.lanes) {
    return absl::InvalidArgumentError(absl::StrCat(
        "N=", n, " unsupported with ", config.lanes, " lanes"));
  }
  const int64_t chunk = config.ChunkCycles(n);
  const int log_e = Log2(config.lanes);
  FuTiming t;
  t.issue_cycles = chunk;
  switch (kind) {
    case FuKind::kAdder:
      t.latency = config.latency_add;
      break;
    case FuKind::kMultiplier:
      t.latency = config.latency_mul;
      break;
    case FuKind::kNtt: {
      // Two E-point butterfly networks (log2 E multiply-add stages each),
      // the twiddle multiply and a transpose.
      const int64_t butterfly = config.latency_mul + config.latency_add;
      t.latency = config.latency_ntt > 0
                      ? config.latency_ntt
                      : 2 * log_e * butterfly + config.latency_mul +
                            TransposeLatency(config.lanes);
      if (config.ntt_model == FuModel::kLowThroughput) {
        // One butterfly stage per pass over the vector. A pass starts once
        // the previous one has drained; other vectors fill the gaps, so the
        // unit is occupied for one chunk stream per stage.
        const int64_t stages = std::max(1, Log2(n));
        t.issue_cycles = chunk * stages;
        t.latency = (stages - 1) * (chunk + butterfly) + butterfly;
      }
      break;
    }
    case FuKind::kAutomorphism:
      // Two transposes and two fixed permutation networks.
      t.latency = config.latency_automorphism > 0
                      ? config.latency_automorphism
                      : 2 * TransposeLatency(config.lanes) + 2 * log_e;
      if (config.automorphism_model == FuModel::kLowThroughput) {
        // One element per cycle; the last input may land in the first
        // output position.
        t.issue_cycles = static_cast<int64_t>(n);
        t.latency = static_cast<int64_t>(n);
      }
      break;
  }
  return t;
}

}  // namespace hevec
