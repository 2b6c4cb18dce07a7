// Copyright 2026 The hevec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// line fails. Every tolerance is exact unless a runtime budget is stated.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "belady.h"
#include "hevec/automorphism.h"
#include "hevec/bench.h"
#include "hevec/bgv.h"
#include "hevec/compiler.h"
#include "hevec/dsl.h"
#include "hevec/evaluator.h"
#include "hevec/machine.h"
#include "hevec/ntt.h"
#include "hevec/rns.h"
#include "hevec/simulator.h"
#include "test_util.h"

namespace hevec {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Negacyclic product with exact 128-bit accumulation and a single reduction
// per output, independent of the library's modular helpers.
std::vector<Word> SchoolbookOracle(const std::vector<Word>& a,
                                   const std::vector<Word>& b, Word q) {
  const size_t n = a.size();
  std::vector<unsigned __int128> acc(2 * n, 0);
  for (size_t i = 0; i < n; ++i) {
    const uint64_t ai = a[i];
    unsigned __int128* row = acc.data() + i;
    for (size_t j = 0; j < n; ++j) row[j] += ai * static_cast<uint64_t>(b[j]);
  }
  std::vector<Word> c(n);
  for (size_t k = 0; k < n; ++k) {
    const uint64_t pos = static_cast<uint64_t>(acc[k] % q);
    const uint64_t neg = static_cast<uint64_t>(acc[k + n] % q);
    c[k] = static_cast<Word>((pos + q - neg) % q);
  }
  return c;
}

std::vector<Word> RandomWords(size_t n, Word q, std::mt19937_64& rng) {
  std::vector<Word> v(n);
  for (Word& x : v) x = static_cast<Word>(rng() % q);
  return v;
}

Outcome NttOracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  int64_t products = 0, mismatches = 0;
  for (size_t n = 8; n <= 4096; n *= 2) {
    std::set<Word> used;
    for (int m = 0; m < 3; ++m) {
      absl::StatusOr<RnsBasis> basis;
      do {
        const int bits = 20 + static_cast<int>(rng() % 12);
        basis = GenerateModuli(n, 1, bits, rng());
      } while (!basis.ok() || used.count((*basis)[0].q));
      const PrimeModulus& mod = (*basis)[0];
      used.insert(mod.q);
      for (int pair = 0; pair < 200; ++pair) {
        std::vector<Word> a = RandomWords(n, mod.q, rng);
        std::vector<Word> b = RandomWords(n, mod.q, rng);
        const std::vector<Word> expect = SchoolbookOracle(a, b, mod.q);
        ForwardNttInPlace(a, mod);
        ForwardNttInPlace(b, mod);
        for (size_t i = 0; i < n; ++i) a[i] = ModMul(a[i], b[i], mod.q);
        InverseNttInPlace(a, mod);
        mismatches += a != expect;
        ++products;
      }
    }
  }
  const double secs = SecondsSince(start);
  return {mismatches == 0 && secs < 120,
          absl::StrFormat("%d products over N=8..4096 x 3 moduli, %d "
                          "mismatches, %.1f s (limit 120 s)",
                          products, mismatches, secs)};
}

Outcome FourStep() {
  const auto start = Clock::now();
  std::mt19937_64 rng(202);
  int64_t shapes = 0, vectors = 0, mismatches = 0;
  for (size_t n = 2; n <= 16384; n *= 2) {
    const PrimeModulus mod = GenerateModuli(n, 1, 30, n).value()[0];
    const int samples = n <= 1024 ? 16 : n <= 4096 ? 4 : 2;
    for (size_t g = 1; g * g <= n; g *= 2) {
      const GridShape shape{g, n / g};
      ++shapes;
      for (int s = 0; s < samples; ++s) {
        ResidueVector coeff = ResidueVector::Create(
            RandomWords(n, mod.q, rng), mod, Domain::kCoefficient).value();
        ResidueVector eval = ResidueVector::Create(
            RandomWords(n, mod.q, rng), mod, Domain::kNtt).value();
        mismatches += !(NttFourStep(coeff, shape, NttDirection::kForward)
                            .value() == NttReference(coeff).value());
        mismatches += !(NttFourStep(eval, shape, NttDirection::kInverse)
                            .value() == InttReference(eval).value());
        vectors += 2;
      }
    }
  }
  const double secs = SecondsSince(start);
  return {mismatches == 0 && secs < 120,
          absl::StrFormat("%d (G,E) shapes up to N=16384, %d transforms, %d "
                          "mismatches, %.1f s (limit 120 s)",
                          shapes, vectors, mismatches, secs)};
}

Outcome Automorphisms() {
  std::mt19937_64 rng(303);
  int64_t checks = 0, mismatches = 0;
  auto check = [&](const ResidueVector& rv, uint64_t k, GridShape shape) {
    const ResidueVector direct = rv.domain() == Domain::kCoefficient
                                     ? AutomorphismCoeff(rv, k).value()
                                     : AutomorphismEval(rv, k).value();
    mismatches += !(AutomorphismVectorized(rv, k, shape).value() == direct);
    ++checks;
  };
  for (size_t n = 2; n <= 16384; n *= 2) {
    const PrimeModulus mod = GenerateModuli(n, 1, 30, n + 7).value()[0];
    std::vector<uint64_t> ks;
    if (n <= 256) {
      for (uint64_t k = 1; k < 2 * n; k += 2) ks.push_back(k);
    } else {
      ks = {1, 5, 2 * n - 1, RotationGaloisElement(3, n),
            RotationGaloisElement(-1, n)};
      for (int i = 0; i < 11; ++i) ks.push_back((rng() % n) * 2 + 1);
    }
    for (Domain d : {Domain::kCoefficient, Domain::kNtt}) {
      ResidueVector rv =
          ResidueVector::Create(RandomWords(n, mod.q, rng), mod, d).value();
      for (size_t g = 1; g * g <= n; g *= 2) {
        for (uint64_t k : ks) check(rv, k, GridShape{g, n / g});
      }
    }
  }
  const size_t worked = AutomorphismDestination(205, 5, 1024,
                                                Domain::kCoefficient);
  return {mismatches == 0 && worked == 1,
          absl::StrFormat("%d checks (all odd k for N<=256, 16 sampled k up "
                          "to N=16384), %d mismatches; N=1024 k=5 index 205 "
                          "-> %d (expect 1)",
                          checks, mismatches, worked)};
}

int MulDepth(const HomProgram& p) {
  std::vector<int> depth(p.nodes.size(), 0);
  int best = 0;
  for (const HomOpNode& node : p.nodes) {
    int d = 0;
    for (int o : node.operands) d = std::max(d, depth[o]);
    depth[node.id] = d + (node.kind == OpKind::kMul);
    best = std::max(best, depth[node.id]);
  }
  return best;
}

Outcome BgvHomomorphism() {
  const auto start = Clock::now();
  int failures = 0, deepest = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    BgvParams params = BgvParams::Create(1024, 6, 30, 257, seed).value();
    HomProgram program =
        testing_util::RandomProgram(1024, 6, 4, 14, seed + 1000, 3).value();
    deepest = std::max(deepest, MulDepth(program));
    const SecretKey sk = KeyGen(params);
    Prng prng(seed);
    std::vector<Plaintext> plain;
    std::vector<Ciphertext> cts;
    for (int id : program.inputs) {
      plain.push_back(RandomPlaintext(params.n, params.t, prng));
      cts.push_back(Encrypt(params, plain.back(), sk,
                            program.nodes[id].level, prng).value());
    }
    const HintSet hints =
        GenerateProgramHints(params, sk, program, prng).value();
    const std::vector<Ciphertext> out =
        EvaluateEncrypted(params, program, cts, hints).value();
    const std::vector<Plaintext> expect = EvalPlain(program, plain).value();
    bool ok = out.size() == expect.size();
    for (size_t i = 0; ok && i < out.size(); ++i) {
      absl::StatusOr<Plaintext> got = Decrypt(params, out[i], sk);
      ok = got.ok() && got->coeffs == expect[i].coeffs;
    }
    failures += !ok;
  }
  const double secs = SecondsSince(start);
  return {failures == 0 && secs < 300,
          absl::StrFormat("100 programs at N=1024 L=6 t=257 (max depth %d), "
                          "%d failures, %.1f s (limit 300 s)",
                          deepest, failures, secs)};
}

Outcome KeySwitchAccounting() {
  bool ok = true;
  std::string detail;
  for (size_t level : {2, 4, 8, 16}) {
    BgvParams params = BgvParams::Create(16, level + 1, 30, 257, 3).value();
    ProgramBuilder b(16);
    const int x = b.Input(level + 1), y = b.Input(level + 1);
    b.Output(b.Mul(x, y));
    InstructionDfg dfg = Translate(b.Build().value(), params).value();
    int64_t transforms = 0, muls = 0, adds = 0;
    for (const Instruction& in : dfg.instructions) {
      if (!in.keyswitch) continue;
      transforms += in.op == Opcode::kNtt || in.op == Opcode::kIntt;
      muls += in.op == Opcode::kVecMul;
      adds += in.op == Opcode::kVecAdd;
    }
    const int64_t l2 = static_cast<int64_t>(level * level);
    ok = ok && transforms == l2 && muls == 2 * l2 && adds == 2 * l2;
    absl::StrAppend(&detail, "L=", level, ": ", transforms, "/", muls, "/",
                    adds, "; ");
  }
  const int64_t hint = KeySwitchHintBytes(16, 16384);
  ok = ok && hint == int64_t{32} << 20;
  absl::StrAppend(&detail, "hint bytes L=16 N=16384: ", hint,
                  " (expect 33554432)");
  return {ok, detail};
}

Outcome RestrictedModuli() {
  const auto start = Clock::now();
  const int64_t count = CountRestrictedModuli(32);
  const double secs = SecondsSince(start);
  return {count == 6186 && secs < 30,
          absl::StrFormat("count_restricted_moduli(32) = %d (expect 6186), "
                          "%.1f s (limit 30 s)",
                          count, secs)};
}

Outcome MultiplierCount() {
  const NttMultiplierCount c = NttUnitMultiplierCount(128);
  return {c.per_stage_ntt == 384 && c.total == 896,
          absl::StrFormat("ntt_unit_multiplier_count(128) = (%d, %d) "
                          "(expect (384, 896))",
                          c.per_stage_ntt, c.total)};
}

MachineConfig DeskWith(int64_t scratchpad, bool low = false) {
  MachineConfig c = MachineConfig::Desk();
  c.scratchpad_bytes = scratchpad;
  if (low) {
    c.ntt_model = FuModel::kLowThroughput;
    c.automorphism_model = FuModel::kLowThroughput;
  }
  return c;
}

// Two key-switch hints at the program's nominal level.
int64_t TwoHintScratchpad(size_t n, size_t level) {
  return 2 * KeySwitchHintBytes(level, n);
}

Outcome HintReuse() {
  const BgvParams params = BgvParams::Create(64, 4, 30, 257, 1).value();
  const HomProgram mv = BuildMatVec(4, 64, 4).value();
  const MachineConfig config = DeskWith(TwoHintScratchpad(64, 4));
  auto ksh = [&](bool reorder, int64_t* compulsory) {
    CompileOptions opts;
    opts.reorder = reorder;
    CompiledProgram cp = Compile(mv, params, config, opts).value();
    const TrafficBreakdown t = TrafficReport(cp.dms, cp.dfg);
    *compulsory = t.ksh_compulsory;
    return t.ksh_compulsory + t.ksh_noncompulsory;
  };
  int64_t comp_ordered = 0, comp_naive = 0;
  const int64_t ordered = ksh(true, &comp_ordered);
  const int64_t naive = ksh(false, &comp_naive);
  return {ordered == comp_ordered && naive == 4 * comp_naive,
          absl::StrFormat("scratchpad %d B: ordered KSH %d / compulsory %d = "
                          "%.3f (expect 1); naive KSH %d / compulsory %d = "
                          "%.3f (expect exactly 4)",
                          config.scratchpad_bytes, ordered, comp_ordered,
                          static_cast<double>(ordered) / comp_ordered, naive,
                          comp_naive,
                          static_cast<double>(naive) / comp_naive)};
}

Outcome EvictionOptimality() {
  int64_t traces = 0, bad = 0;
  auto check = [&](const std::vector<int>& trace) {
    for (int slots = 1; slots <= 4; ++slots) {
      testing_util::OptimalPaging opt(trace, slots);
      const testing_util::PagingOutcome got =
          testing_util::PageWithSelectVictim(trace, slots);
      bad += !got.every_choice_optimal || got.misses != opt.Cost(0, 0);
      ++traces;
    }
  };
  for (int length = 1; length <= 10; ++length) {
    testing_util::ForEachTrace(length, 3, check);
  }
  for (int length = 1; length <= 7; ++length) {
    testing_util::ForEachTrace(length, 5, check);
  }
  std::mt19937_64 rng(909);
  for (int i = 0; i < 20000; ++i) {
    const int length = 8 + static_cast<int>(rng() % 5);
    const int alphabet = 4 + static_cast<int>(rng() % 5);
    std::vector<int> trace(length);
    for (int& x : trace) x = static_cast<int>(rng() % alphabet);
    check(trace);
  }
  return {bad == 0,
          absl::StrFormat("%d (trace, slots) pairs, length <= 12, slots <= 4: "
                          "%d differ from brute-force optimum",
                          traces, bad)};
}

struct Case {
  std::string name;
  HomProgram program;
  BgvParams params;
  MachineConfig config;
  bool reorder = true;
};

std::vector<Case> SuiteCases() {
  std::vector<Case> cases;
  const BgvParams p64 = BgvParams::Create(64, 4, 30, 257, 1).value();
  const HomProgram mv = BuildMatVec(4, 64, 4).value();
  cases.push_back({"matvec-1MiB", mv, p64, DeskWith(1 << 20)});
  cases.push_back({"matvec-16KiB", mv, p64, DeskWith(16384)});
  cases.push_back({"matvec-16KiB-naive", mv, p64, DeskWith(16384), false});
  cases.push_back({"matvec-6KiB", mv, p64, DeskWith(6144)});
  cases.push_back({"matvec-low", mv, p64, DeskWith(16384, true)});
  const BgvParams p256 = BgvParams::Create(256, 4, 30, 257, 1).value();
  const HomProgram mv256 = BuildMatVec(4, 256, 4).value();
  cases.push_back({"matvec256", mv256, p256, DeskWith(65536)});
  cases.push_back({"matvec256-low", mv256, p256, DeskWith(65536, true)});
  const BgvParams p5 = BgvParams::Create(64, 5, 30, 257, 2).value();
  for (uint64_t seed = 0; seed < 12; ++seed) {
    cases.push_back(
        {absl::StrCat("random-", seed),
         testing_util::RandomProgram(64, 5, 3, 18, seed, 3).value(), p5,
         DeskWith(seed % 2 ? 8192 : 1 << 20, seed % 3 == 0), seed % 4 != 3});
  }
  return cases;
}

Outcome ScheduleValidity(const std::vector<Case>& cases) {
  int64_t schedules = 0, violations = 0, wrong = 0;
  std::string failed;
  for (const Case& c : cases) {
    CompileOptions opts;
    opts.reorder = c.reorder;
    CompiledProgram cp = Compile(c.program, c.params, c.config, opts).value();
    FunctionalCheck fc =
        RunFunctionalCheck(cp.ordered, c.params, cp.schedule, cp.dms, cp.dfg,
                           c.config, 5).value();
    ++schedules;
    violations += fc.result.violations.size();
    if (!fc.result.ok() || !fc.decrypts || !fc.bit_exact) {
      ++wrong;
      absl::StrAppend(&failed, " ", c.name);
    }
  }
  for (const std::string& suite : BenchSuites()) {
    for (bool low : {false, true}) {
      BenchResult r = RunBench(suite, DeskWith(16384, low)).value();
      schedules += r.rows.size();
      if (!r.ok) {
        ++wrong;
        absl::StrAppend(&failed, " bench:", suite);
      }
    }
  }
  return {wrong == 0,
          absl::StrFormat("%d schedules replayed, %d violations, %d failing "
                          "functional checks%s",
                          schedules, violations, wrong,
                          failed.empty() ? "" : absl::StrCat(" (", failed,
                                                             " )"))};
}

Outcome TrafficConservation(const std::vector<Case>& cases) {
  int64_t schedules = 0, bad = 0, roomy_noncompulsory = 0;
  for (const Case& c : cases) {
    const InstructionDfg dfg = Translate(c.program, c.params).value();
    const int64_t vector_bytes = c.config.VectorBytes(c.params.n);
    const int64_t footprint =
        static_cast<int64_t>(dfg.instructions.size() + dfg.objects.size());
    for (int64_t cap : {int64_t{6}, int64_t{12}, int64_t{40}, footprint}) {
      absl::StatusOr<DataMovementSchedule> dms =
          ScheduleOffchipWithCapacity(dfg, cap, vector_bytes);
      if (!dms.ok()) continue;  // below the minimum working set
      ++schedules;
      const TrafficBreakdown t = TrafficReport(*dms, dfg);
      std::map<ObjectClass, int64_t> loaded, stored;
      int64_t first_ksh = 0, first_io = 0;
      std::set<int> seen;
      for (const DmsEntry& e : dms->entries) {
        if (e.kind == DmsKind::kCompute) continue;
        const DataObject& o = dms->Object(dfg, e.object);
        const bool first = seen.insert(e.object).second;
        (e.kind == DmsKind::kLoad ? loaded : stored)[o.cls] += o.bytes;
        if (!first) continue;
        if (o.cls == ObjectClass::kKsh && e.kind == DmsKind::kLoad) {
          first_ksh += o.bytes;
        }
        if ((o.cls == ObjectClass::kInput && e.kind == DmsKind::kLoad) ||
            (o.cls == ObjectClass::kOutput && e.kind == DmsKind::kStore)) {
          first_io += o.bytes;
        }
      }
      const bool ok =
          t.ksh_compulsory == first_ksh &&
          t.ksh_compulsory + t.ksh_noncompulsory ==
              loaded[ObjectClass::kKsh] &&
          t.io_compulsory == first_io &&
          t.io_compulsory + t.io_noncompulsory ==
              loaded[ObjectClass::kInput] + loaded[ObjectClass::kOutput] +
                  stored[ObjectClass::kOutput] &&
          t.intermediate_load == loaded[ObjectClass::kIntermediate] &&
          t.intermediate_store == stored[ObjectClass::kIntermediate] &&
          stored[ObjectClass::kKsh] + stored[ObjectClass::kInput] == 0 &&
          t.Total() == [&] {
            int64_t sum = 0;
            for (const auto& [cls, b] : loaded) sum += b;
            for (const auto& [cls, b] : stored) sum += b;
            return sum;
          }();
      bad += !ok;
      if (cap == footprint) {
        roomy_noncompulsory += t.ksh_noncompulsory + t.io_noncompulsory +
                               t.intermediate_load + t.intermediate_store;
      }
    }
  }
  return {bad == 0 && roomy_noncompulsory == 0,
          absl::StrFormat("%d schedules: %d with unbalanced classes; "
                          "intermediate bytes counted only as non-compulsory; "
                          "non-compulsory bytes when scratchpad >= footprint: "
                          "%d (expect 0)",
                          schedules, bad, roomy_noncompulsory)};
}

Outcome Sensitivity() {
  auto ratio = [](size_t n, int64_t* base, int64_t* low) {
    const BgvParams params = BgvParams::Create(n, 4, 30, 257, 1).value();
    const HomProgram mv = BuildMatVec(4, n, 4).value();
    const int64_t pad = TwoHintScratchpad(n, 4);
    *base = Compile(mv, params, DeskWith(pad)).value().schedule.total_cycles;
    *low =
        Compile(mv, params, DeskWith(pad, true)).value().schedule.total_cycles;
    return static_cast<double>(*low) / *base;
  };
  int64_t base256 = 0, low256 = 0, base64 = 0, low64 = 0;
  const double r256 = ratio(256, &base256, &low256);
  const double r64 = ratio(64, &base64, &low64);
  return {r256 > 1.2,
          absl::StrFormat("matvec N=256 L=4: low-throughput %d / default %d "
                          "cycles = %.3fx (need > 1.2x); at N=64: %d / %d = "
                          "%.3fx",
                          low256, base256, r256, low64, base64, r64)};
}

}  // namespace
}  // namespace hevec

int main() {
  using hevec::Outcome;
  const std::vector<hevec::Case> cases = hevec::SuiteCases();
  const std::vector<std::pair<std::string, std::function<Outcome()>>>
      criteria = {
          {"ntt oracle equivalence", hevec::NttOracle},
          {"four-step equivalence", hevec::FourStep},
          {"automorphism decomposition", hevec::Automorphisms},
          {"bgv homomorphism", hevec::BgvHomomorphism},
          {"key-switch accounting", hevec::KeySwitchAccounting},
          {"restricted-modulus count", hevec::RestrictedModuli},
          {"multiplier-count model", hevec::MultiplierCount},
          {"hint-reuse ordering", hevec::HintReuse},
          {"eviction optimality", hevec::EvictionOptimality},
          {"schedule validity",
           [&] { return hevec::ScheduleValidity(cases); }},
          {"traffic conservation",
           [&] { return hevec::TrafficConservation(cases); }},
          {"sensitivity trend", hevec::Sensitivity},
      };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const Outcome o = criteria[i].second();
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
