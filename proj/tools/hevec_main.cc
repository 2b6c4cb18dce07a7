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

// Command-line driver: compile, simulate, bench and sweep.
//
// Exit status: 0 success, 1 validation failure, 2 usage or parse error.

#include <glob.h>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/string_view.h"
#include "hevec/bench.h"
#include "hevec/bgv.h"
#include "hevec/compiler.h"
#include "hevec/dsl.h"
#include "hevec/formats.h"
#include "hevec/machine.h"
#include "hevec/simulator.h"

namespace hevec {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;

constexpr char kUsage[] =
    "usage:\n"
    "  hevec compile  --program <program file> --arch <arch file> "
    "--out <dir> [--seed N]\n"
    "  hevec simulate --program <schedule dir> --arch <arch file> "
    "[--functional] [--seed N] [--out <csv>]\n"
    "  hevec bench    --suite <name> --arch <arch file> [--seed N] "
    "[--out <csv>]\n"
    "  hevec sweep    --arch <glob> --program <program file> [--seed N] "
    "[--out <csv>]\n"
    "suites: matvec, keyswitch-micro, ntt-micro, automorphism-micro, "
    "reuse-ablation\n";

// Bits per modulus for programs compiled from files.
constexpr int kModulusBits = 30;

struct Flags {
  std::map<std::string, std::string> values;
  bool functional = false;

  std::optional<std::string> Get(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    return it->second;
  }
};

struct Failure {
  int code;
  std::string message;
};

absl::StatusOr<Flags> ParseFlags(int argc, char** argv, int first) {
  static const char* const kValued[] = {"--arch", "--program", "--out",
                                        "--seed", "--suite"};
  Flags flags;
  for (int i = first; i < argc; ++i) {
    std::string arg = argv[i];
    std::string value;
    bool has_value = false;
    if (size_t eq = arg.find('='); eq != std::string::npos) {
      value = arg.substr(eq + 1);
      arg = arg.substr(0, eq);
      has_value = true;
    }
    if (arg == "--functional") {
      if (has_value) {
        return absl::InvalidArgumentError("--functional takes no value");
      }
      flags.functional = true;
      continue;
    }
    bool known = false;
    for (const char* k : kValued) known = known || arg == k;
    if (!known) {
      return absl::InvalidArgumentError(absl::StrCat("unknown flag '", arg,
                                                     "'"));
    }
    if (!has_value) {
      if (i + 1 >= argc) {
        return absl::InvalidArgumentError(absl::StrCat(arg, " needs a value"));
      }
      value = argv[++i];
    }
    if (!flags.values.emplace(arg.substr(2), value).second) {
      return absl::InvalidArgumentError(absl::StrCat("repeated flag ", arg));
    }
  }
  return flags;
}

absl::StatusOr<std::string> Require(const Flags& flags, const char* key) {
  std::optional<std::string> v = flags.Get(key);
  if (!v || v->empty()) {
    return absl::InvalidArgumentError(absl::StrCat("missing --", key));
  }
  return *v;
}

absl::StatusOr<uint64_t> Seed(const Flags& flags) {
  std::optional<std::string> v = flags.Get("seed");
  if (!v) return 1;
  uint64_t seed;
  if (!absl::SimpleAtoi(*v, &seed)) {
    return absl::InvalidArgumentError(absl::StrCat("bad --seed '", *v, "'"));
  }
  return seed;
}

// Reads and parses a file, prefixing errors with the path.
template <typename T, typename Parser>
absl::StatusOr<T> Load(const std::string& path, Parser parse) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<T> value = parse(*text);
  if (!value.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": ", value.status().message()));
  }
  return value;
}

absl::StatusOr<MachineConfig> LoadArch(const std::string& path) {
  return Load<MachineConfig>(path, ParseArch);
}

absl::StatusOr<HomProgram> LoadProgram(const std::string& path) {
  return Load<HomProgram>(path, ParseProgram);
}

// Scheme parameters for a program: one modulus per level of its highest
// input, sampled with the given seed.
absl::StatusOr<BgvParams> ParamsFor(const HomProgram& program,
                                    uint64_t seed) {
  size_t levels = 0;
  for (const HomOpNode& node : program.nodes) {
    levels = std::max(levels, node.level);
  }
  return BgvParams::Create(program.n, levels, kModulusBits, program.t, seed);
}

// Writes CSV to --out if given, else to stdout. Notes become '#' lines.
absl::Status EmitReport(const Flags& flags, const std::vector<ReportRow>& rows,
                        const std::vector<std::string>& notes) {
  std::string text = FormatReport(rows);
  for (const std::string& note : notes) absl::StrAppend(&text, "# ", note, "\n");
  if (std::optional<std::string> out = flags.Get("out")) {
    return WriteFile(*out, text);
  }
  std::cout << text;
  return absl::OkStatus();
}

std::string ProgramName(const std::string& path) {
  std::filesystem::path p(path);
  std::string stem = p.stem().string();
  if (stem.empty()) stem = p.parent_path().filename().string();
  return stem.empty() ? "program" : stem;
}

// ---------------------------------------------------------------------------

std::optional<Failure> Compile(const Flags& flags) {
  absl::StatusOr<std::string> program_path = Require(flags, "program");
  absl::StatusOr<std::string> arch_path = Require(flags, "arch");
  absl::StatusOr<std::string> out = Require(flags, "out");
  absl::StatusOr<uint64_t> seed = Seed(flags);
  for (const absl::Status& s : {program_path.status(), arch_path.status(),
                                out.status(), seed.status()}) {
    if (!s.ok()) return Failure{kExitUsage, std::string(s.message())};
  }
  absl::StatusOr<HomProgram> program = LoadProgram(*program_path);
  if (!program.ok()) {
    return Failure{kExitUsage, std::string(program.status().message())};
  }
  absl::StatusOr<MachineConfig> config = LoadArch(*arch_path);
  if (!config.ok()) {
    return Failure{kExitUsage, std::string(config.status().message())};
  }
  absl::StatusOr<BgvParams> params = ParamsFor(*program, *seed);
  if (!params.ok()) {
    return Failure{kExitInvalid, absl::StrCat("parameters: ",
                                              params.status().message())};
  }
  absl::StatusOr<CompiledProgram> cp = hevec::Compile(*program, *params,
                                                      *config);
  if (!cp.ok()) {
    return Failure{kExitInvalid,
                   absl::StrCat("compile: ", cp.status().message())};
  }
  std::error_code ec;
  std::filesystem::create_directories(*out, ec);
  if (ec) {
    return Failure{kExitUsage, absl::StrCat("cannot create ", *out, ": ",
                                            ec.message())};
  }
  const std::filesystem::path dir(*out);
  const std::pair<const char*, std::string> files[] = {
      {kDfgFile, FormatDfg(cp->dfg, cp->ordered)},
      {kDmsFile, FormatDms(cp->dms)},
      {kStreamsFile, FormatStreams(cp->schedule)},
  };
  for (const auto& [name, text] : files) {
    if (absl::Status s = WriteFile((dir / name).string(), text); !s.ok()) {
      return Failure{kExitUsage, std::string(s.message())};
    }
  }
  std::cout << "compiled " << cp->dfg.instructions.size()
            << " instructions, " << cp->dms.entries.size()
            << " data-movement steps, " << cp->schedule.total_cycles
            << " cycles -> " << dir.string() << "\n";
  return std::nullopt;
}

std::optional<Failure> Simulate(const Flags& flags) {
  absl::StatusOr<std::string> dir = Require(flags, "program");
  absl::StatusOr<std::string> arch_path = Require(flags, "arch");
  absl::StatusOr<uint64_t> seed = Seed(flags);
  for (const absl::Status& s :
       {dir.status(), arch_path.status(), seed.status()}) {
    if (!s.ok()) return Failure{kExitUsage, std::string(s.message())};
  }
  absl::StatusOr<MachineConfig> config = LoadArch(*arch_path);
  if (!config.ok()) {
    return Failure{kExitUsage, std::string(config.status().message())};
  }
  const std::filesystem::path base(*dir);
  absl::StatusOr<DfgFile> dfg =
      Load<DfgFile>((base / kDfgFile).string(), ParseDfg);
  absl::StatusOr<DataMovementSchedule> dms =
      Load<DataMovementSchedule>((base / kDmsFile).string(), ParseDms);
  absl::StatusOr<CycleSchedule> schedule =
      Load<CycleSchedule>((base / kStreamsFile).string(), ParseStreams);
  for (const absl::Status& s :
       {dfg.status(), dms.status(), schedule.status()}) {
    if (!s.ok()) return Failure{kExitUsage, std::string(s.message())};
  }

  SimResult result;
  std::optional<FunctionalCheck> check;
  if (flags.functional) {
    absl::StatusOr<FunctionalCheck> fc =
        RunFunctionalCheck(dfg->program, dfg->Params(*seed), *schedule, *dms,
                           dfg->dfg, *config, *seed);
    if (!fc.ok()) {
      return Failure{kExitInvalid, absl::StrCat("functional simulation: ",
                                                fc.status().message())};
    }
    result = fc->result;
    check = *fc;
  } else {
    absl::StatusOr<SimResult> sim =
        ValidateAndRun(*schedule, *dms, dfg->dfg, *config);
    if (!sim.ok()) {
      return Failure{kExitInvalid,
                     absl::StrCat("simulation: ", sim.status().message())};
    }
    result = *std::move(sim);
  }
  for (const Violation& v : result.violations) {
    std::cerr << "violation: " << v.ToString() << "\n";
  }
  std::vector<std::string> notes;
  bool ok = result.ok();
  if (check) {
    ok = ok && check->decrypts && check->bit_exact;
    notes.push_back(absl::StrCat("functional seed=", *seed,
                                 " decrypts=", check->decrypts ? 1 : 0,
                                 " bit_exact=", check->bit_exact ? 1 : 0,
                                 ok ? " PASS" : " FAIL"));
  }
  const ReportRow row =
      MakeReportRow(ProgramName(*dir), config->name, result.stats);
  if (absl::Status s = EmitReport(flags, {row}, notes); !s.ok()) {
    return Failure{kExitUsage, std::string(s.message())};
  }
  if (check) std::cerr << (ok ? "PASS" : "FAIL") << "\n";
  if (!ok) {
    return Failure{kExitInvalid,
                   absl::StrCat(result.violations.size(), " violations")};
  }
  return std::nullopt;
}

std::optional<Failure> Bench(const Flags& flags) {
  absl::StatusOr<std::string> suite = Require(flags, "suite");
  absl::StatusOr<std::string> arch_path = Require(flags, "arch");
  absl::StatusOr<uint64_t> seed = Seed(flags);
  for (const absl::Status& s :
       {suite.status(), arch_path.status(), seed.status()}) {
    if (!s.ok()) return Failure{kExitUsage, std::string(s.message())};
  }
  const std::vector<std::string>& suites = BenchSuites();
  if (std::find(suites.begin(), suites.end(), *suite) == suites.end()) {
    return Failure{kExitUsage, absl::StrCat("unknown suite '", *suite,
                                            "'; expected one of ",
                                            absl::StrJoin(suites, ", "))};
  }
  absl::StatusOr<MachineConfig> config = LoadArch(*arch_path);
  if (!config.ok()) {
    return Failure{kExitUsage, std::string(config.status().message())};
  }
  BenchOptions options;
  options.seed = *seed;
  absl::StatusOr<BenchResult> result = RunBench(*suite, *config, options);
  if (!result.ok()) {
    return Failure{kExitInvalid, absl::StrCat("bench ", *suite, ": ",
                                              result.status().message())};
  }
  if (absl::Status s = EmitReport(flags, result->rows, result->notes);
      !s.ok()) {
    return Failure{kExitUsage, std::string(s.message())};
  }
  if (!result->ok) return Failure{kExitInvalid, "a benchmark check failed"};
  return std::nullopt;
}

std::optional<Failure> SweepCommand(const Flags& flags) {
  absl::StatusOr<std::string> pattern = Require(flags, "arch");
  absl::StatusOr<std::string> program_path = Require(flags, "program");
  absl::StatusOr<uint64_t> seed = Seed(flags);
  for (const absl::Status& s :
       {pattern.status(), program_path.status(), seed.status()}) {
    if (!s.ok()) return Failure{kExitUsage, std::string(s.message())};
  }
  glob_t matches;
  const int rc = glob(pattern->c_str(), 0, nullptr, &matches);
  std::vector<std::string> paths(matches.gl_pathv,
                                 matches.gl_pathv + matches.gl_pathc);
  globfree(&matches);
  if (rc != 0 || paths.empty()) {
    return Failure{kExitUsage,
                   absl::StrCat("no architecture files match '", *pattern,
                                "'")};
  }
  std::vector<MachineConfig> configs;
  for (const std::string& path : paths) {
    absl::StatusOr<MachineConfig> config = LoadArch(path);
    if (!config.ok()) {
      return Failure{kExitUsage, std::string(config.status().message())};
    }
    configs.push_back(*std::move(config));
  }
  absl::StatusOr<HomProgram> program = LoadProgram(*program_path);
  if (!program.ok()) {
    return Failure{kExitUsage, std::string(program.status().message())};
  }
  absl::StatusOr<BgvParams> params = ParamsFor(*program, *seed);
  if (!params.ok()) {
    return Failure{kExitInvalid, absl::StrCat("parameters: ",
                                              params.status().message())};
  }
  SweepResult sweep =
      Sweep(configs, {{ProgramName(*program_path), *program, *params}});

  std::vector<ReportRow> rows;
  std::vector<std::string> notes;
  bool failed = false;
  for (size_t i = 0; i < sweep.rows.size(); ++i) {
    const SweepRow& r = sweep.rows[i];
    if (!r.status.ok()) {
      failed = true;
      notes.push_back(absl::StrCat("error ", r.config, ": ",
                                   r.status.message()));
      continue;
    }
    rows.push_back(MakeReportRow(r.program, r.config, r.stats));
    // Pareto frontier over (resources, cycles).
    bool dominated = false;
    for (size_t j = 0; j < sweep.rows.size(); ++j) {
      const SweepRow& s = sweep.rows[j];
      if (j == i || !s.status.ok()) continue;
      if (!Dominates(configs[i], configs[j])) continue;
      if (s.stats.total_cycles > r.stats.total_cycles) continue;
      const bool twin = Dominates(configs[j], configs[i]) &&
                        s.stats.total_cycles == r.stats.total_cycles;
      dominated = dominated || (!twin || j < i);
    }
    if (!dominated) notes.push_back(absl::StrCat("pareto ", r.config));
  }
  for (const std::string& v : sweep.monotonicity_violations) {
    notes.push_back(absl::StrCat("monotonicity ", v));
  }
  if (absl::Status s = EmitReport(flags, rows, notes); !s.ok()) {
    return Failure{kExitUsage, std::string(s.message())};
  }
  if (failed) return Failure{kExitInvalid, "some sweep points failed"};
  return std::nullopt;
}

int Main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << kUsage;
    return kExitUsage;
  }
  const std::string command = argv[1];
  if (command == "--help" || command == "help") {
    std::cout << kUsage;
    return kExitOk;
  }
  using Handler = std::optional<Failure> (*)(const Flags&);
  const std::map<std::string, Handler> handlers = {
      {"compile", Compile},
      {"simulate", Simulate},
      {"bench", Bench},
      {"sweep", SweepCommand},
  };
  auto it = handlers.find(command);
  if (it == handlers.end()) {
    std::cerr << "unknown command '" << command << "'\n" << kUsage;
    return kExitUsage;
  }
  absl::StatusOr<Flags> flags = ParseFlags(argc, argv, 2);
  if (!flags.ok()) {
    std::cerr << "error: " << flags.status().message() << "\n" << kUsage;
    return kExitUsage;
  }
  if (flags->functional && command != "simulate") {
    std::cerr << "error: --functional applies to simulate only\n";
    return kExitUsage;
  }
  std::optional<Failure> failure = it->second(*flags);
  if (!failure) return kExitOk;
  std::cerr << "error: " << failure->message << "\n";
  return failure->code;
}

}  // namespace
}  // namespace hevec

int main(int argc, char** argv) { return hevec::Main(argc, argv); }
