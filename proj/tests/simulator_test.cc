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

#include "hevec/simulator.h"

#include <map>
#include <set>

#include "gtest/gtest.h"
#include "hevec/compiler.h"
#include "test_util.h"

namespace hevec {
namespace {

using testing_util::RandomProgram;

struct Case {
  std::string name;
  HomProgram program;
  BgvParams params;
  MachineConfig config;
};

MachineConfig DeskWith(int64_t scratchpad, bool low = false) {
  MachineConfig c = MachineConfig::Desk();
  c.scratchpad_bytes = scratchpad;
  if (low) {
    c.ntt_model = FuModel::kLowThroughput;
    c.automorphism_model = FuModel::kLowThroughput;
  }
  return c;
}

std::vector<Case> Cases() {
  std::vector<Case> cases;
  BgvParams p64 = BgvParams::Create(64, 4, 30, 257, 1).value();
  HomProgram mv = BuildMatVec(4, 64, 4).value();
  cases.push_back({"matvec-1MiB", mv, p64, DeskWith(1 << 20)});
  cases.push_back({"matvec-16KiB", mv, p64, DeskWith(16384)});
  cases.push_back({"matvec-6KiB", mv, p64, DeskWith(6144)});
  cases.push_back({"matvec-low", mv, p64, DeskWith(16384, true)});
  BgvParams p5 = BgvParams::Create(64, 5, 30, 257, 2).value();
  for (uint64_t seed = 0; seed < 6; ++seed) {
    cases.push_back({"random-" + std::to_string(seed),
                     RandomProgram(64, 5, 3, 18, seed, 3).value(), p5,
                     DeskWith(seed % 2 ? 8192 : 1 << 20, seed % 3 == 0)});
  }
  return cases;
}

class SimulatorCaseTest : public ::testing::TestWithParam<size_t> {};

TEST_P(SimulatorCaseTest, ZeroViolationsAndFunctionalAgreement) {
  const Case c = Cases()[GetParam()];
  SCOPED_TRACE(c.name);
  CompiledProgram cp = Compile(c.program, c.params, c.config).value();
  FunctionalCheck fc =
      RunFunctionalCheck(cp.ordered, c.params, cp.schedule, cp.dms, cp.dfg,
                         c.config, 11)
          .value();
  for (const Violation& v : fc.result.violations) ADD_FAILURE() << v.ToString();
  EXPECT_TRUE(fc.decrypts);
  EXPECT_TRUE(fc.bit_exact);

  const SimStats& s = fc.result.stats;
  EXPECT_EQ(s.total_cycles, cp.schedule.total_cycles);
  // Conservation of traffic.
  EXPECT_EQ(s.traffic.Total(), s.offchip_bytes);
  int64_t series = 0;
  for (int64_t b : s.bandwidth_series) {
    EXPECT_LE(b, c.config.hbm_bytes_per_cycle);
    series += b;
  }
  EXPECT_EQ(series, s.offchip_bytes);
  for (int k = 0; k < kNumFuKinds; ++k) {
    EXPECT_LE(s.fu_busy_cycles[k], s.total_cycles * s.fu_units[k]);
  }
  EXPECT_LE(s.peak_resident_bytes, c.config.scratchpad_bytes);
}

INSTANTIATE_TEST_SUITE_P(AllCases, SimulatorCaseTest,
                         ::testing::Range<size_t>(0, 10));

class FaultInjectionTest : public ::testing::Test {
 protected:
  void SetUp() override {
    params_ = BgvParams::Create(64, 4, 30, 257, 1).value();
    config_ = DeskWith(16384);
    cp_ = Compile(BuildMatVec(2, 64, 4).value(), params_, config_).value();
    ASSERT_TRUE(Replay(cp_.schedule, config_).empty());
  }

  std::vector<Violation> Replay(const CycleSchedule& s,
                                const MachineConfig& config) {
    return ValidateAndRun(s, cp_.dms, cp_.dfg, config).value().violations;
  }

  static bool Has(const std::vector<Violation>& v, ViolationKind kind) {
    for (const Violation& x : v) {
      if (x.kind == kind) return true;
    }
    return false;
  }

  BgvParams params_;
  MachineConfig config_;
  CompiledProgram cp_;
};

TEST_F(FaultInjectionTest, EveryDecrementedWaitOnAnFuIsCaught) {
  // Pull each FU issue one cycle earlier in turn.
  int tried = 0;
  for (size_t si = 0; si < cp_.schedule.streams.size(); ++si) {
    const std::string& comp = cp_.schedule.streams[si].component;
    if (comp == "hbm" || comp.find(".in") != std::string::npos ||
        comp.find(".out") != std::string::npos) {
      continue;
    }
    for (size_t e = 0; e + 1 < cp_.schedule.streams[si].entries.size();
         ++e) {
      if (cp_.schedule.streams[si].entries[e].wait == 0) continue;
      CycleSchedule bad = cp_.schedule;
      --bad.streams[si].entries[e].wait;
      ++bad.streams[si].entries[e + 1].wait;
      std::vector<Violation> v = Replay(bad, config_);
      EXPECT_FALSE(v.empty()) << comp << " entry " << e;
      for (const Violation& x : v) {
        EXPECT_FALSE(x.component.empty());
        EXPECT_FALSE(x.instruction.empty() && x.kind != ViolationKind::kCapacity);
      }
      if (++tried >= 40) return;
    }
  }
  EXPECT_GT(tried, 0);
}

TEST_F(FaultInjectionTest, EarlyLoadOrStoreIsCaught) {
  for (ComponentStream& s : cp_.schedule.streams) {
    if (s.component != "hbm") continue;
    int tried = 0;
    for (size_t e = 1; e + 1 < s.entries.size() && tried < 20; ++e) {
      if (s.entries[e].wait == 0) continue;
      CycleSchedule bad = cp_.schedule;
      ComponentStream& b = *std::find_if(
          bad.streams.begin(), bad.streams.end(),
          [](const ComponentStream& x) { return x.component == "hbm"; });
      // Everything after entry e moves one cycle earlier.
      --b.entries[e].wait;
      std::vector<Violation> v = Replay(bad, config_);
      if (!v.empty()) ++tried;
    }
    EXPECT_GT(tried, 0);
  }
}

TEST_F(FaultInjectionTest, MissingEntryIsMalformed) {
  CycleSchedule bad = cp_.schedule;
  for (ComponentStream& s : bad.streams) {
    if (s.component.find(".add") != std::string::npos) {
      s.entries.pop_back();
      break;
    }
  }
  EXPECT_TRUE(Has(Replay(bad, config_), ViolationKind::kMalformed));
}

TEST_F(FaultInjectionTest, UnknownComponentIsMalformed) {
  CycleSchedule bad = cp_.schedule;
  bad.streams.push_back({"c9.add0", {{"nop", 0}, {"I0", 0}}});
  EXPECT_TRUE(Has(Replay(bad, config_), ViolationKind::kMalformed));
}

TEST_F(FaultInjectionTest, SmallerScratchpadOverflows) {
  MachineConfig tight = config_;
  tight.scratchpad_bytes = 4096;
  EXPECT_TRUE(Has(Replay(cp_.schedule, tight), ViolationKind::kCapacity));
}

TEST_F(FaultInjectionTest, ShorterDeclaredLengthIsCaught) {
  CycleSchedule bad = cp_.schedule;
  bad.total_cycles -= 1;
  EXPECT_FALSE(Replay(bad, config_).empty());
}

TEST_F(FaultInjectionTest, ReplayIsDeterministic) {
  SimResult a = ValidateAndRun(cp_.schedule, cp_.dms, cp_.dfg, config_)
                    .value();
  SimResult b = ValidateAndRun(cp_.schedule, cp_.dms, cp_.dfg, config_)
                    .value();
  EXPECT_EQ(a.stats.total_cycles, b.stats.total_cycles);
  EXPECT_EQ(a.stats.bandwidth_series, b.stats.bandwidth_series);
  EXPECT_EQ(a.stats.fu_busy_cycles, b.stats.fu_busy_cycles);
}

// Transfers recounted from the data-movement schedule by object class.
TEST(TrafficReportTest, ClassesReconcileWithTransfers) {
  BgvParams params = BgvParams::Create(16, 4, 30, 257, 1).value();
  InstructionDfg dfg =
      Translate(RandomProgram(16, 4, 2, 30, 7, 4).value(), params).value();
  for (int64_t cap : {5, 8, 16, 1 << 14}) {
    DataMovementSchedule dms =
        ScheduleOffchipWithCapacity(dfg, cap, 64).value();
    TrafficBreakdown t = TrafficReport(dms, dfg);
    std::map<ObjectClass, int64_t> loaded, stored;
    std::set<int> seen;
    int64_t first_loads_ksh = 0, first_loads_io = 0, first_output_stores = 0;
    for (const DmsEntry& e : dms.entries) {
      if (e.kind == DmsKind::kCompute) continue;
      const DataObject& o = dms.Object(dfg, e.object);
      const bool first = seen.insert(e.object).second;
      if (e.kind == DmsKind::kLoad) {
        loaded[o.cls] += o.bytes;
        if (first && o.cls == ObjectClass::kKsh) first_loads_ksh += o.bytes;
        if (first && o.cls == ObjectClass::kInput) first_loads_io += o.bytes;
      } else {
        stored[o.cls] += o.bytes;
        if (first && o.cls == ObjectClass::kOutput) {
          first_output_stores += o.bytes;
        }
      }
    }
    EXPECT_EQ(t.ksh_compulsory + t.ksh_noncompulsory,
              loaded[ObjectClass::kKsh]);
    EXPECT_EQ(t.ksh_compulsory, first_loads_ksh);
    EXPECT_EQ(t.io_compulsory + t.io_noncompulsory,
              loaded[ObjectClass::kInput] + loaded[ObjectClass::kOutput] +
                  stored[ObjectClass::kOutput]);
    EXPECT_EQ(t.io_compulsory, first_loads_io + first_output_stores);
    EXPECT_EQ(t.intermediate_load, loaded[ObjectClass::kIntermediate]);
    EXPECT_EQ(t.intermediate_store, stored[ObjectClass::kIntermediate]);
    EXPECT_EQ(stored[ObjectClass::kKsh] + stored[ObjectClass::kInput], 0);
    if (cap == 1 << 14) {
      EXPECT_EQ(t.ksh_noncompulsory + t.io_noncompulsory +
                    t.intermediate_load + t.intermediate_store,
                0);
    }
  }
}

TEST(BoundsTest, CyclesNeverBeatBounds) {
  BgvParams params = BgvParams::Create(64, 4, 30, 257, 1).value();
  for (uint64_t seed = 0; seed < 4; ++seed) {
    HomProgram p = RandomProgram(64, 4, 2, 20, seed).value();
    for (int64_t scratch : {int64_t{8192}, int64_t{1} << 20}) {
      MachineConfig config = DeskWith(scratch);
      CompiledProgram cp = Compile(p, params, config).value();
      EXPECT_GE(cp.schedule.total_cycles, ComputeBoundCycles(cp.dfg, config));
      EXPECT_GE(cp.schedule.total_cycles,
                BandwidthBoundCycles(cp.dms, cp.dfg, config));
    }
  }
}

TEST(SweepTest, TwoConfigsIdempotenceAndMonotonicity) {
  BgvParams params = BgvParams::Create(64, 4, 30, 257, 1).value();
  NamedProgram mv{"matvec", BuildMatVec(4, 64, 4).value(), params};
  MachineConfig small = DeskWith(16384);
  small.name = "small";
  MachineConfig big = DeskWith(1 << 20);
  big.clusters = 8;
  big.name = "big";
  MachineConfig twin = small;
  twin.name = "twin";
  SweepResult r = Sweep({small, big, twin}, {mv});
  ASSERT_EQ(r.rows.size(), 3u);
  for (const SweepRow& row : r.rows) EXPECT_TRUE(row.status.ok()) << row.status;
  EXPECT_EQ(r.rows[0].stats.total_cycles, r.rows[2].stats.total_cycles);
  EXPECT_EQ(r.rows[0].stats.traffic.Total(), r.rows[2].stats.traffic.Total());
  EXPECT_LE(r.rows[1].stats.total_cycles, r.rows[0].stats.total_cycles);
  EXPECT_TRUE(r.monotonicity_violations.empty());
  EXPECT_TRUE(Dominates(big, small));
  EXPECT_FALSE(Dominates(small, big));
}

TEST(SweepTest, MoreScratchpadCutsThrashing) {
  // Many independent hinted operations on few inputs thrash a tiny
  // scratchpad.
  BgvParams params = BgvParams::Create(64, 3, 30, 257, 1).value();
  ProgramBuilder b(64);
  const int x = b.Input(3);
  int acc = x;
  for (int r = 1; r <= 6; ++r) acc = b.Add(acc, b.Rotate(x, r));
  b.Output(acc);
  NamedProgram p{"rotations", b.Build().value(), params};
  MachineConfig tiny = DeskWith(4096);
  tiny.name = "tiny";
  MachineConfig twice = DeskWith(8192);
  twice.name = "twice";
  SweepResult r = Sweep({tiny, twice}, {p});
  ASSERT_TRUE(r.rows[0].status.ok()) << r.rows[0].status;
  ASSERT_TRUE(r.rows[1].status.ok()) << r.rows[1].status;
  auto noncompulsory = [](const TrafficBreakdown& t) {
    return t.ksh_noncompulsory + t.io_noncompulsory + t.intermediate_load +
           t.intermediate_store;
  };
  EXPECT_GT(noncompulsory(r.rows[0].stats.traffic), 0);
  EXPECT_LT(noncompulsory(r.rows[1].stats.traffic),
            noncompulsory(r.rows[0].stats.traffic));
}

TEST(SweepTest, FailuresDoNotAbortTheSweep) {
  BgvParams params = BgvParams::Create(64, 4, 30, 257, 1).value();
  NamedProgram mv{"matvec", BuildMatVec(1, 64, 4).value(), params};
  MachineConfig broken = DeskWith(512);  // two vectors
  broken.name = "broken";
  MachineConfig fine = DeskWith(1 << 20);
  fine.name = "fine";
  SweepResult r = Sweep({broken, fine}, {mv});
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_FALSE(r.rows[0].status.ok());
  EXPECT_TRUE(r.rows[1].status.ok());
}

}  // namespace
}  // namespace hevec
