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

#include "hevec/compiler.h"

namespace hevec {

absl::StatusOr<CompiledProgram> Compile(const HomProgram& program,
                                        const BgvParams& params,
                                        const MachineConfig& config,
                                        const CompileOptions& options) {
  if (auto s = config.Validate(); !s.ok()) return s;
  CompiledProgram out;
  if (options.reorder) {
    absl::StatusOr<HomProgram> ordered =
        ApplyOrder(program, OrderHomOps(program));
    if (!ordered.ok()) return ordered.status();
    out.ordered = *std::move(ordered);
  } else {
    out.ordered = program;
  }
  absl::StatusOr<InstructionDfg> dfg = Translate(out.ordered, params);
  if (!dfg.ok()) return dfg.status();
  out.dfg = *std::move(dfg);
  absl::StatusOr<DataMovementSchedule> dms = ScheduleOffchip(out.dfg, config);
  if (!dms.ok()) return dms.status();
  out.dms = *std::move(dms);
  absl::StatusOr<CycleSchedule> schedule =
      ScheduleCycles(out.dms, out.dfg, config);
  if (!schedule.ok()) return schedule.status();
  out.schedule = *std::move(schedule);
  return out;
}

}  // namespace hevec
