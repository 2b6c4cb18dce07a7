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

#include "hevec/formats.h"

#include "gtest/gtest.h"
#include "hevec/compiler.h"
#include "test_util.h"

namespace hevec {
namespace {

bool SameConfig(const MachineConfig& a, const MachineConfig& b) {
  return FormatArch(a) == FormatArch(b);
}

TEST(ArchFormatTest, RoundTripsDefaultsAndVariants) {
  MachineConfig low = MachineConfig::Desk();
  low.name = "desk-low";
  low.ntt_model = FuModel::kLowThroughput;
  low.automorphism_model = FuModel::kLowThroughput;
  low.latency_ntt = 77;
  low.scratchpad_bytes = (int64_t{1} << 40) + 5;
  for (const MachineConfig& c : {MachineConfig(), MachineConfig::Desk(), low}) {
    const std::string text = FormatArch(c);
    absl::StatusOr<MachineConfig> parsed = ParseArch(text);
    ASSERT_TRUE(parsed.ok()) << parsed.status();
    EXPECT_TRUE(SameConfig(*parsed, c));
    EXPECT_EQ(FormatArch(*parsed), text);  // fixpoint
    EXPECT_EQ(parsed->name, c.name);
    EXPECT_EQ(parsed->scratchpad_bytes, c.scratchpad_bytes);
    EXPECT_EQ(parsed->ntt_model, c.ntt_model);
  }
}

TEST(ArchFormatTest, OmittedKeysKeepDefaults) {
  absl::StatusOr<MachineConfig> c = ParseArch(
      "# comment\nname = tiny\n[cluster]\ncount = 2\n\n[memory]\n"
      "banks = 4\n");
  ASSERT_TRUE(c.ok()) << c.status();
  EXPECT_EQ(c->name, "tiny");
  EXPECT_EQ(c->clusters, 2);
  EXPECT_EQ(c->banks, 4);
  EXPECT_EQ(c->lanes, 128);
  EXPECT_EQ(c->fus_multiplier, 2);
}

TEST(ArchFormatTest, ErrorsCarryLineNumbers) {
  struct Bad {
    const char* text;
    const char* line;
  };
  for (const Bad& b : {
           Bad{"[cluster]\ncount = x\n", "line 2"},
           Bad{"[cluster]\nwidth = 3\n", "line 2"},
           Bad{"\n\n[gpu]\n", "line 3"},
           Bad{"[cluster\n", "line 1"},
           Bad{"[fus]\nntt = 1\nntt = 2\n", "line 3"},
           Bad{"[fus]\nntt_model = medium\n", "line 2"},
           Bad{"lanes = 4\n", "line 1"},
           Bad{"[memory]\nbanks\n", "line 2"},
       }) {
    absl::StatusOr<MachineConfig> c = ParseArch(b.text);
    ASSERT_FALSE(c.ok()) << b.text;
    EXPECT_EQ(c.status().code(), absl::StatusCode::kInvalidArgument);
    EXPECT_NE(c.status().message().find(b.line), absl::string_view::npos)
        << c.status();
  }
}

TEST(ArchFormatTest, ValidatesParsedConfig) {
  absl::StatusOr<MachineConfig> c = ParseArch("[cluster]\nlanes = 64\n");
  ASSERT_FALSE(c.ok());
  EXPECT_NE(c.status().message().find("port_bytes"), absl::string_view::npos);
}

class ArtifactFormatTest : public ::testing::Test {
 protected:
  void SetUp() override {
    BgvParams params = BgvParams::Create(16, 4, 30, 257, 5).value();
    HomProgram p = testing_util::RandomProgram(16, 4, 2, 24, 3, 3).value();
    MachineConfig config = MachineConfig::Desk();
    config.scratchpad_bytes = 6 * 64;  // forces spills
    cp_ = Compile(p, params, config).value();
    ASSERT_FALSE(cp_.dms.spill_objects.empty());
  }
  CompiledProgram cp_;
};

TEST_F(ArtifactFormatTest, DfgRoundTrip) {
  const std::string text = FormatDfg(cp_.dfg, cp_.ordered);
  absl::StatusOr<DfgFile> f = ParseDfg(text);
  ASSERT_TRUE(f.ok()) << f.status();
  EXPECT_EQ(f->dfg.n, cp_.dfg.n);
  EXPECT_EQ(f->dfg.t, cp_.dfg.t);
  EXPECT_EQ(f->dfg.moduli, cp_.dfg.moduli);
  EXPECT_EQ(f->dfg.instructions, cp_.dfg.instructions);
  EXPECT_EQ(f->dfg.objects, cp_.dfg.objects);
  EXPECT_EQ(FormatProgram(f->program), FormatProgram(cp_.ordered));
  EXPECT_EQ(FormatDfg(f->dfg, f->program), text);
  BgvParams p = f->Params(9);
  EXPECT_EQ(p.basis.moduli, cp_.dfg.moduli);
  EXPECT_EQ(p.seed, 9u);
}

TEST_F(ArtifactFormatTest, DmsAndStreamsRoundTrip) {
  absl::StatusOr<DataMovementSchedule> dms = ParseDms(FormatDms(cp_.dms));
  ASSERT_TRUE(dms.ok()) << dms.status();
  EXPECT_EQ(*dms, cp_.dms);
  absl::StatusOr<CycleSchedule> s = ParseStreams(FormatStreams(cp_.schedule));
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_EQ(*s, cp_.schedule);
}

TEST_F(ArtifactFormatTest, MalformedArtifactsReportLines) {
  std::string dfg = FormatDfg(cp_.dfg, cp_.ordered);
  dfg += "inst 99999 frobnicate ops=\n";
  absl::StatusOr<DfgFile> f = ParseDfg(dfg);
  ASSERT_FALSE(f.ok());
  EXPECT_NE(f.status().message().find("line "), absl::string_view::npos);

  EXPECT_FALSE(ParseDms("compute inst=0\n").ok());  // no header
  EXPECT_FALSE(ParseDms("dms capacity=4 vector_bytes=64\nload inst=x\n").ok());
  absl::StatusOr<CycleSchedule> s =
      ParseStreams("schedule total_cycles=5\nstream hbm\nL0 -1\nend\n");
  ASSERT_FALSE(s.ok());
  EXPECT_NE(s.status().message().find("line 3"), absl::string_view::npos);
  EXPECT_FALSE(ParseStreams("schedule total_cycles=5\nstream hbm\nL0 1\n")
                   .ok());
  // A corrupted modulus root is rejected.
  std::string bad_root = FormatDfg(cp_.dfg, cp_.ordered);
  const size_t at = bad_root.find(" psi=") + 5;
  bad_root.replace(at, bad_root.find('\n', at) - at, "2");
  EXPECT_FALSE(ParseDfg(bad_root).ok());
}

TEST(ReportFormatTest, RoundTripWithQuoting) {
  SimStats stats;
  stats.total_cycles = 1234;
  stats.traffic.ksh_compulsory = 100;
  stats.traffic.io_noncompulsory = 7;
  stats.fu_busy_cycles = {10, 20, 30, 40};
  stats.fu_units = {4, 4, 8, 8};
  stats.peak_resident_bytes = 4096;
  std::vector<ReportRow> rows = {MakeReportRow("matvec", "desk", stats),
                                 MakeReportRow("a,\"b\"", "c", stats)};
  const std::string text = FormatReport(rows);
  absl::StatusOr<std::vector<ReportRow>> parsed = ParseReport(text);
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(*parsed, rows);
  EXPECT_EQ(FormatReport(*parsed), text);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "program,config,cycles,ksh_bytes_compulsory,"
            "ksh_bytes_noncompulsory,io_bytes_compulsory,"
            "io_bytes_noncompulsory,intermediate_load_bytes,"
            "intermediate_store_bytes,fu_util_ntt,fu_util_aut,fu_util_mul,"
            "fu_util_add,peak_resident_bytes");
  // Utilizations are kept to six decimals.
  EXPECT_NEAR((*parsed)[0].fu_util[0], 10.0 / (1234 * 4), 5e-7);
}

TEST(ReportFormatTest, RejectsBadRows) {
  const std::string header = ReportHeader() + "\n";
  EXPECT_FALSE(ParseReport("nope\n").ok());
  EXPECT_FALSE(ParseReport(header + "p,c,1,2\n").ok());
  EXPECT_FALSE(ParseReport(header + "p,c,-1,0,0,0,0,0,0,0,0,0,0,0\n").ok());
  EXPECT_FALSE(ParseReport(header + "\"p,c,1,0,0,0,0,0,0,0,0,0,0,0\n").ok());
  EXPECT_TRUE(ParseReport(header + "p,c,1,0,0,0,0,0,0,0,0,0,0,0\n").ok());
}

}  // namespace
}  // namespace hevec
