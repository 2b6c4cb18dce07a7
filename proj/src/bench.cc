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

#include "hevec/bench.h"

#include <algorithm>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "hevec/automorphism.h"
#include "hevec/bgv.h"
#include "hevec/compiler.h"
#include "hevec/dsl.h"
#include "hevec/ntt.h"
#include "hevec/simulator.h"

namespace hevec {
namespace {

// Appends instructions with priorities assigned once the DFG is complete.
class MicroBuilder {
 public:
  MicroBuilder(size_t n, size_t level, const std::vector<PrimeModulus>& moduli,
               Word t) {
    dfg_.n = n;
    dfg_.t = t;
    dfg_.moduli.assign(moduli.begin(), moduli.begin() + level);
  }

  int Object(ObjectClass cls, int poly, int residue) {
    DataObject o;
    o.id = static_cast<int>(dfg_.objects.size());
    o.cls = cls;
    o.bytes = static_cast<int64_t>(dfg_.n) * 4;
    o.node = 0;
    o.poly = poly;
    o.residue = residue;
    dfg_.objects.push_back(o);
    return o.id;
  }

  int Emit(Opcode op, std::vector<int> operands, int modulus,
           int object = -1, uint64_t galois = 1) {
    Instruction in;
    in.id = static_cast<int>(dfg_.instructions.size());
    in.op = op;
    in.operands = std::move(operands);
    in.modulus = modulus;
    in.object = object;
    in.galois = galois;
    in.domain = Domain::kNtt;
    in.homop = 0;
    dfg_.instructions.push_back(std::move(in));
    return dfg_.instructions.back().id;
  }

  InstructionDfg Finish() {
    const int64_t count = static_cast<int64_t>(dfg_.instructions.size());
    for (Instruction& in : dfg_.instructions) in.priority = count - in.id;
    return std::move(dfg_);
  }

 private:
  InstructionDfg dfg_;
};

HomProgram PassThroughProgram(size_t n, Word t, size_t level) {
  HomProgram p;
  p.n = n;
  p.t = t;
  HomOpNode input;
  input.id = 0;
  input.kind = OpKind::kInput;
  input.level = level;
  p.nodes.push_back(input);
  p.inputs = {0};
  p.outputs = {0};
  return p;
}

std::string Ratio(double x) { return absl::StrFormat("%.3f", x); }

class BenchRunner {
 public:
  BenchRunner(const MachineConfig& config, const BenchOptions& options)
      : config_(config), options_(options) {}

  absl::StatusOr<BenchResult> Run(absl::string_view suite) {
    absl::Status s;
    if (suite == "matvec") {
      s = Matvec();
    } else if (suite == "keyswitch-micro") {
      s = KeySwitchMicro();
    } else if (suite == "ntt-micro") {
      s = TransformMicro(/*automorphism=*/false);
    } else if (suite == "automorphism-micro") {
      s = TransformMicro(/*automorphism=*/true);
    } else if (suite == "reuse-ablation") {
      s = ReuseAblation();
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown suite '", suite, "'"));
    }
    if (!s.ok()) return s;
    return std::move(result_);
  }

 private:
  absl::StatusOr<BgvParams> Params(size_t levels) const {
    return BgvParams::Create(options_.n, levels, options_.modulus_bits, 257,
                             options_.seed);
  }

  void Check(bool ok, absl::string_view what) {
    result_.ok = result_.ok && ok;
    result_.notes.push_back(absl::StrCat(what, ok ? " PASS" : " FAIL"));
  }

  // Compiles, replays functionally and records one row.
  absl::StatusOr<CompiledProgram> RunProgram(absl::string_view name,
                                             const HomProgram& program,
                                             const BgvParams& params,
                                             bool reorder) {
    CompileOptions opts;
    opts.reorder = reorder;
    absl::StatusOr<CompiledProgram> cp =
        Compile(program, params, config_, opts);
    if (!cp.ok()) return cp.status();
    absl::StatusOr<FunctionalCheck> fc =
        RunFunctionalCheck(cp->ordered, params, cp->schedule, cp->dms,
                           cp->dfg, config_, options_.seed);
    if (!fc.ok()) return fc.status();
    result_.rows.push_back(
        MakeReportRow(name, config_.name, fc->result.stats));
    Check(fc->result.ok() && fc->decrypts && fc->bit_exact,
          absl::StrCat(name, ": violations=", fc->result.violations.size(),
                       " decrypts=", fc->decrypts ? 1 : 0,
                       " bit_exact=", fc->bit_exact ? 1 : 0));
    return cp;
  }

  absl::Status Matvec() {
    absl::StatusOr<BgvParams> params = Params(options_.level);
    if (!params.ok()) return params.status();
    absl::StatusOr<HomProgram> p =
        BuildMatVec(options_.rows, options_.n, options_.level);
    if (!p.ok()) return p.status();
    return RunProgram("matvec", *p, *params, true).status();
  }

  absl::Status ReuseAblation() {
    absl::StatusOr<BgvParams> params = Params(options_.level);
    if (!params.ok()) return params.status();
    absl::StatusOr<HomProgram> p =
        BuildMatVec(options_.rows, options_.n, options_.level);
    if (!p.ok()) return p.status();
    if (auto s = RunProgram("matvec-ordered", *p, *params, true).status();
        !s.ok()) {
      return s;
    }
    if (auto s = RunProgram("matvec-naive", *p, *params, false).status();
        !s.ok()) {
      return s;
    }
    const TrafficBreakdown& ordered = result_.rows[0].traffic;
    const TrafficBreakdown& naive = result_.rows[1].traffic;
    auto total = [](const TrafficBreakdown& t) {
      return static_cast<double>(t.ksh_compulsory + t.ksh_noncompulsory);
    };
    result_.notes.push_back(absl::StrCat(
        "reuse-ablation: ksh_total/compulsory ordered=",
        Ratio(total(ordered) / ordered.ksh_compulsory),
        " naive=", Ratio(total(naive) / naive.ksh_compulsory),
        " naive/ordered=", Ratio(total(naive) / total(ordered))));
    return absl::OkStatus();
  }

  absl::Status KeySwitchMicro() {
    for (size_t level = 2; level <= options_.level; ++level) {
      absl::StatusOr<BgvParams> params = Params(level + 1);
      if (!params.ok()) return params.status();
      ProgramBuilder b(options_.n);
      const int x = b.Input(level + 1);
      const int y = b.Input(level + 1);
      b.Output(b.Mul(x, y));
      absl::StatusOr<HomProgram> p = b.Build();
      if (!p.ok()) return p.status();
      absl::StatusOr<CompiledProgram> cp =
          RunProgram(absl::StrCat("keyswitch-L", level), *p, *params, true);
      if (!cp.ok()) return cp.status();
      int64_t transforms = 0, muls = 0, adds = 0;
      for (const Instruction& in : cp->dfg.instructions) {
        if (!in.keyswitch) continue;
        transforms += in.op == Opcode::kNtt || in.op == Opcode::kIntt;
        muls += in.op == Opcode::kVecMul;
        adds += in.op == Opcode::kVecAdd;
      }
      const int64_t l2 = static_cast<int64_t>(level * level);
      Check(transforms == l2 && muls == 2 * l2 && adds == 2 * l2,
            absl::StrCat("keyswitch-micro L=", level, ": transforms=",
                         transforms, "/", l2, " mul=", muls, "/", 2 * l2,
                         " add=", adds, "/", 2 * l2));
    }
    return absl::OkStatus();
  }

  absl::Status TransformMicro(bool automorphism) {
    const size_t level = options_.level;
    absl::StatusOr<BgvParams> params = Params(level);
    if (!params.ok()) return params.status();
    const uint64_t k = RotationGaloisElement(1, options_.n);
    InstructionDfg dfg =
        automorphism
            ? BuildAutomorphismMicro(options_.n, level, k,
                                     params->basis.moduli, params->t)
            : BuildTransformMicro(options_.n, level, params->basis.moduli,
                                  params->t);
    absl::StatusOr<DataMovementSchedule> dms = ScheduleOffchip(dfg, config_);
    if (!dms.ok()) return dms.status();
    absl::StatusOr<CycleSchedule> schedule =
        ScheduleCycles(*dms, dfg, config_);
    if (!schedule.ok()) return schedule.status();

    FunctionalInputs fi;
    fi.params = *params;
    fi.program = PassThroughProgram(options_.n, params->t, level);
    SecretKey sk = KeyGen(*params);
    Prng prng(options_.seed);
    absl::StatusOr<Ciphertext> ct =
        Encrypt(*params, RandomPlaintext(options_.n, params->t, prng), sk,
                level, prng);
    if (!ct.ok()) return ct.status();
    fi.inputs = {*ct};
    absl::StatusOr<SimResult> sim =
        ValidateAndRun(*schedule, *dms, dfg, config_, &fi);
    if (!sim.ok()) return sim.status();

    // Reference outputs from the standalone transform implementations.
    bool equal = sim->outputs.has_value() && sim->outputs->size() == 1;
    for (size_t j = 0; equal && j < level; ++j) {
      for (int poly = 0; poly < 2; ++poly) {
        const ResidueVector& in = poly == 0 ? ct->a.residues[j]
                                            : ct->b.residues[j];
        absl::StatusOr<ResidueVector> want;
        if (automorphism) {
          absl::StatusOr<GridShape> shape =
              GridShape::ForLanes(options_.n, config_.lanes);
          want = shape.ok() ? AutomorphismVectorized(in, k, *shape)
                            : AutomorphismEval(in, k);
        } else {
          want = InttReference(in);
          if (want.ok() && poly == 1) want = NttReference(*want);
        }
        if (!want.ok()) return want.status();
        const RnsPoly& got_poly =
            poly == 0 ? (*sim->outputs)[0].a : (*sim->outputs)[0].b;
        equal = equal && std::ranges::equal(got_poly.residues[j].coeffs(),
                                             want->coeffs());
      }
    }
    const char* name = automorphism ? "automorphism-micro" : "ntt-micro";
    result_.rows.push_back(MakeReportRow(name, config_.name, sim->stats));
    Check(sim->ok() && equal,
          absl::StrCat(name, ": violations=", sim->violations.size(),
                       " matches_reference=", equal ? 1 : 0));
    return absl::OkStatus();
  }

  const MachineConfig& config_;
  const BenchOptions& options_;
  BenchResult result_;
};

}  // namespace

const std::vector<std::string>& BenchSuites() {
  static const auto* suites = new std::vector<std::string>{
      "matvec", "keyswitch-micro", "ntt-micro", "automorphism-micro",
      "reuse-ablation"};
  return *suites;
}

absl::StatusOr<BenchResult> RunBench(absl::string_view suite,
                                     const MachineConfig& config,
                                     const BenchOptions& options) {
  return BenchRunner(config, options).Run(suite);
}

InstructionDfg BuildTransformMicro(size_t n, size_t level,
                                   const std::vector<PrimeModulus>& moduli,
                                   Word t) {
  MicroBuilder b(n, level, moduli, t);
  for (int poly = 0; poly < 2; ++poly) {
    for (size_t j = 0; j < level; ++j) {
      const int m = static_cast<int>(j);
      const int in = b.Object(ObjectClass::kInput, poly, m);
      const int out = b.Object(ObjectClass::kOutput, poly, m);
      int v = b.Emit(Opcode::kLoad, {}, m, in);
      v = b.Emit(Opcode::kIntt, {v}, m);
      if (poly == 1) v = b.Emit(Opcode::kNtt, {v}, m);
      b.Emit(Opcode::kStore, {v}, m, out);
    }
  }
  return b.Finish();
}

InstructionDfg BuildAutomorphismMicro(size_t n, size_t level, uint64_t k,
                                      const std::vector<PrimeModulus>& moduli,
                                      Word t) {
  MicroBuilder b(n, level, moduli, t);
  for (int poly = 0; poly < 2; ++poly) {
    for (size_t j = 0; j < level; ++j) {
      const int m = static_cast<int>(j);
      const int in = b.Object(ObjectClass::kInput, poly, m);
      const int out = b.Object(ObjectClass::kOutput, poly, m);
      int v = b.Emit(Opcode::kLoad, {}, m, in);
      v = b.Emit(Opcode::kAutomorphism, {v}, m, -1, k);
      b.Emit(Opcode::kStore, {v}, m, out);
    }
  }
  return b.Finish();
}

}  // namespace hevec
