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

#ifndef HEVEC_FORMATS_H_
#define HEVEC_FORMATS_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "hevec/bgv.h"
#include "hevec/compiler.h"
#include "hevec/dfg.h"
#include "hevec/dsl.h"
#include "hevec/machine.h"
#include "hevec/simulator.h"

namespace hevec {

// Every parser below reports malformed input as InvalidArgument with a
// "line <n>: " prefix. Emitting and re-parsing is lossless.

// ---------------------------------------------------------------------------
// Architecture description: "key = value" lines grouped in [sections]
// (cluster, fus, memory, latency); keys outside a section set the name.
// Omitted keys keep the MachineConfig defaults; the result is validated.

std::string FormatArch(const MachineConfig& config);
absl::StatusOr<MachineConfig> ParseArch(absl::string_view text);

// ---------------------------------------------------------------------------
// Compiled artifacts. The DFG file also embeds the ordered program so a
// schedule directory is self-contained for functional simulation.

struct DfgFile {
  InstructionDfg dfg;
  HomProgram program;  // the program the DFG was translated from

  // Scheme parameters recovered from the stored moduli.
  BgvParams Params(uint64_t seed) const;
};

std::string FormatDfg(const InstructionDfg& dfg, const HomProgram& program);
absl::StatusOr<DfgFile> ParseDfg(absl::string_view text);

std::string FormatDms(const DataMovementSchedule& dms);
absl::StatusOr<DataMovementSchedule> ParseDms(absl::string_view text);

std::string FormatStreams(const CycleSchedule& schedule);
absl::StatusOr<CycleSchedule> ParseStreams(absl::string_view text);

// File names written by the compile command.
inline constexpr char kDfgFile[] = "dfg.txt";
inline constexpr char kDmsFile[] = "dms.txt";
inline constexpr char kStreamsFile[] = "streams.txt";

// ---------------------------------------------------------------------------
// Run report CSV, one row per (program, config).

struct ReportRow {
  std::string program;
  std::string config;
  int64_t cycles = 0;
  TrafficBreakdown traffic;
  double fu_util[kNumFuKinds] = {0, 0, 0, 0};  // ntt, aut, mul, add
  int64_t peak_resident_bytes = 0;

  bool operator==(const ReportRow& o) const;
};

ReportRow MakeReportRow(absl::string_view program, absl::string_view config,
                        const SimStats& stats);

std::string ReportHeader();
std::string FormatReportRow(const ReportRow& row);
std::string FormatReport(const std::vector<ReportRow>& rows);
absl::StatusOr<std::vector<ReportRow>> ParseReport(absl::string_view text);

// ---------------------------------------------------------------------------
// File helpers.

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, absl::string_view contents);

}  // namespace hevec

#endif  // HEVEC_FORMATS_H_
