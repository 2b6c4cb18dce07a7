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

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace hevec {
namespace {

absl::Status LineError(int line, absl::string_view message) {
  return absl::InvalidArgumentError(
      absl::StrCat("line ", line, ": ", message));
}

// Splits text into (line number, stripped line), skipping blanks and
// '#' comments.
std::vector<std::pair<int, absl::string_view>> Lines(absl::string_view text) {
  std::vector<std::pair<int, absl::string_view>> out;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line[0] == '#') continue;
    out.emplace_back(line_no, line);
  }
  return out;
}

std::vector<absl::string_view> Tokens(absl::string_view line) {
  return absl::StrSplit(line, ' ', absl::SkipEmpty());
}

// "key=value" tokens of one record line.
class Fields {
 public:
  static absl::StatusOr<Fields> Parse(int line,
                                      const std::vector<absl::string_view>& tok,
                                      size_t first) {
    Fields f;
    f.line_ = line;
    for (size_t i = first; i < tok.size(); ++i) {
      std::pair<absl::string_view, absl::string_view> kv =
          absl::StrSplit(tok[i], absl::MaxSplits('=', 1));
      if (kv.first.empty() || tok[i].find('=') == absl::string_view::npos) {
        return LineError(line, absl::StrCat("expected key=value, got '",
                                            tok[i], "'"));
      }
      if (!f.values_.emplace(kv.first, kv.second).second) {
        return LineError(line, absl::StrCat("duplicate key '", kv.first, "'"));
      }
    }
    return f;
  }

  template <typename T>
  absl::Status Get(absl::string_view key, T* out) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
      return LineError(line_, absl::StrCat("missing key '", key, "'"));
    }
    if (!absl::SimpleAtoi(it->second, out)) {
      return LineError(line_, absl::StrCat("bad value for '", key, "'"));
    }
    return absl::OkStatus();
  }

  absl::Status GetString(absl::string_view key, std::string* out) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
      return LineError(line_, absl::StrCat("missing key '", key, "'"));
    }
    *out = std::string(it->second);
    return absl::OkStatus();
  }

  absl::Status GetList(absl::string_view key, std::vector<int>* out) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
      return LineError(line_, absl::StrCat("missing key '", key, "'"));
    }
    out->clear();
    for (absl::string_view part :
         absl::StrSplit(it->second, ',', absl::SkipEmpty())) {
      int v;
      if (!absl::SimpleAtoi(part, &v)) {
        return LineError(line_, absl::StrCat("bad list for '", key, "'"));
      }
      out->push_back(v);
    }
    return absl::OkStatus();
  }

  bool Has(absl::string_view key) const { return values_.count(key) > 0; }

  // Fails if any key is outside `allowed`.
  absl::Status Only(std::initializer_list<absl::string_view> allowed) const {
    for (const auto& [key, value] : values_) {
      bool known = false;
      for (absl::string_view a : allowed) known = known || a == key;
      if (!known) {
        return LineError(line_, absl::StrCat("unknown key '", key, "'"));
      }
    }
    return absl::OkStatus();
  }

 private:
  int line_ = 0;
  std::map<std::string, std::string, std::less<>> values_;
};

#define HEVEC_RETURN_IF_ERROR(expr)          \
  do {                                       \
    absl::Status status_ = (expr);           \
    if (!status_.ok()) return status_;       \
  } while (0)

// ---------------------------------------------------------------------------
// Architecture.

struct ArchKey {
  const char* section;
  const char* key;
  int* int_field;
  int64_t* wide_field;
  FuModel* model_field;
};

std::vector<ArchKey> ArchKeys(MachineConfig& c) {
  return {
      {"cluster", "count", &c.clusters, nullptr, nullptr},
      {"cluster", "lanes", &c.lanes, nullptr, nullptr},
      {"cluster", "rf_vectors", &c.rf_vectors_per_cluster, nullptr, nullptr},
      {"cluster", "rf_read_ports", &c.rf_read_ports, nullptr, nullptr},
      {"cluster", "rf_write_ports", &c.rf_write_ports, nullptr, nullptr},
      {"fus", "ntt", &c.fus_ntt, nullptr, nullptr},
      {"fus", "automorphism", &c.fus_automorphism, nullptr, nullptr},
      {"fus", "multiplier", &c.fus_multiplier, nullptr, nullptr},
      {"fus", "adder", &c.fus_adder, nullptr, nullptr},
      {"fus", "ntt_model", nullptr, nullptr, &c.ntt_model},
      {"fus", "automorphism_model", nullptr, nullptr, &c.automorphism_model},
      {"memory", "scratchpad_bytes", nullptr, &c.scratchpad_bytes, nullptr},
      {"memory", "banks", &c.banks, nullptr, nullptr},
      {"memory", "hbm_bytes_per_cycle", nullptr, &c.hbm_bytes_per_cycle,
       nullptr},
      {"memory", "port_bytes", &c.port_bytes, nullptr, nullptr},
      {"memory", "word_bits", &c.word_bits, nullptr, nullptr},
      {"latency", "add", &c.latency_add, nullptr, nullptr},
      {"latency", "mul", &c.latency_mul, nullptr, nullptr},
      {"latency", "ntt", &c.latency_ntt, nullptr, nullptr},
      {"latency", "automorphism", &c.latency_automorphism, nullptr, nullptr},
      {"latency", "memory", &c.mem_latency, nullptr, nullptr},
  };
}

const char* ModelName(FuModel m) {
  return m == FuModel::kLowThroughput ? "low" : "high";
}

// ---------------------------------------------------------------------------
// DFG records.

std::string FormatObject(absl::string_view keyword, const DataObject& o) {
  std::string out = absl::StrCat(keyword, " ", o.id, " ",
                                 ObjectClassName(o.cls), " bytes=", o.bytes);
  if (o.hint) {
    absl::StrAppend(&out, " hint=", o.hint->ToString(), " matrix=", o.matrix,
                    " row=", o.row, " col=", o.col);
  }
  if (o.node >= 0) absl::StrAppend(&out, " node=", o.node, " poly=", o.poly);
  if (o.constant >= 0) absl::StrAppend(&out, " constant=", o.constant);
  if (o.residue >= 0) absl::StrAppend(&out, " residue=", o.residue);
  if (o.value >= 0) absl::StrAppend(&out, " value=", o.value);
  return out;
}

absl::StatusOr<DataObject> ParseObject(
    int line, const std::vector<absl::string_view>& tok) {
  DataObject o;
  if (tok.size() < 3 || !absl::SimpleAtoi(tok[1], &o.id)) {
    return LineError(line, "expected '<keyword> <id> <class> ...'");
  }
  std::optional<ObjectClass> cls = ParseObjectClass(tok[2]);
  if (!cls) return LineError(line, absl::StrCat("unknown class '", tok[2], "'"));
  o.cls = *cls;
  absl::StatusOr<Fields> f = Fields::Parse(line, tok, 3);
  if (!f.ok()) return f.status();
  HEVEC_RETURN_IF_ERROR(f->Only({"bytes", "hint", "matrix", "row", "col",
                                 "node", "poly", "constant", "residue",
                                 "value"}));
  HEVEC_RETURN_IF_ERROR(f->Get("bytes", &o.bytes));
  if (f->Has("hint")) {
    std::string hint;
    HEVEC_RETURN_IF_ERROR(f->GetString("hint", &hint));
    absl::StatusOr<HintId> id = HintId::Parse(hint);
    if (!id.ok()) return LineError(line, id.status().message());
    o.hint = *id;
    HEVEC_RETURN_IF_ERROR(f->Get("matrix", &o.matrix));
    HEVEC_RETURN_IF_ERROR(f->Get("row", &o.row));
    HEVEC_RETURN_IF_ERROR(f->Get("col", &o.col));
  }
  if (f->Has("node")) {
    HEVEC_RETURN_IF_ERROR(f->Get("node", &o.node));
    HEVEC_RETURN_IF_ERROR(f->Get("poly", &o.poly));
  }
  if (f->Has("constant")) HEVEC_RETURN_IF_ERROR(f->Get("constant", &o.constant));
  if (f->Has("residue")) HEVEC_RETURN_IF_ERROR(f->Get("residue", &o.residue));
  if (f->Has("value")) HEVEC_RETURN_IF_ERROR(f->Get("value", &o.value));
  return o;
}

std::string FormatInstruction(const Instruction& in) {
  std::string out = absl::StrCat("inst ", in.id, " ", OpcodeName(in.op));
  absl::StrAppend(&out, " ops=", absl::StrJoin(in.operands, ","));
  absl::StrAppend(&out, " mod=");
  if (in.modulus == kPlainModulus) {
    out += "t";
  } else {
    absl::StrAppend(&out, in.modulus);
  }
  absl::StrAppend(&out, " scalar=", in.scalar, " galois=", in.galois,
                  " domain=", in.domain == Domain::kNtt ? "ntt" : "coeff",
                  " object=", in.object, " homop=", in.homop,
                  " ks=", in.keyswitch ? 1 : 0, " prio=", in.priority);
  return out;
}

absl::StatusOr<Instruction> ParseInstruction(
    int line, const std::vector<absl::string_view>& tok) {
  Instruction in;
  if (tok.size() < 3 || !absl::SimpleAtoi(tok[1], &in.id)) {
    return LineError(line, "expected 'inst <id> <opcode> ...'");
  }
  std::optional<Opcode> op = ParseOpcode(tok[2]);
  if (!op) return LineError(line, absl::StrCat("unknown opcode '", tok[2], "'"));
  in.op = *op;
  absl::StatusOr<Fields> f = Fields::Parse(line, tok, 3);
  if (!f.ok()) return f.status();
  HEVEC_RETURN_IF_ERROR(f->Only({"ops", "mod", "scalar", "galois", "domain",
                                 "object", "homop", "ks", "prio"}));
  HEVEC_RETURN_IF_ERROR(f->GetList("ops", &in.operands));
  std::string mod;
  HEVEC_RETURN_IF_ERROR(f->GetString("mod", &mod));
  if (mod == "t") {
    in.modulus = kPlainModulus;
  } else if (!absl::SimpleAtoi(mod, &in.modulus) || in.modulus < 0) {
    return LineError(line, "bad value for 'mod'");
  }
  HEVEC_RETURN_IF_ERROR(f->Get("scalar", &in.scalar));
  HEVEC_RETURN_IF_ERROR(f->Get("galois", &in.galois));
  std::string domain;
  HEVEC_RETURN_IF_ERROR(f->GetString("domain", &domain));
  if (domain == "ntt") {
    in.domain = Domain::kNtt;
  } else if (domain == "coeff") {
    in.domain = Domain::kCoefficient;
  } else {
    return LineError(line, "bad value for 'domain'");
  }
  HEVEC_RETURN_IF_ERROR(f->Get("object", &in.object));
  HEVEC_RETURN_IF_ERROR(f->Get("homop", &in.homop));
  int ks = 0;
  HEVEC_RETURN_IF_ERROR(f->Get("ks", &ks));
  if (ks != 0 && ks != 1) return LineError(line, "bad value for 'ks'");
  in.keyswitch = ks == 1;
  HEVEC_RETURN_IF_ERROR(f->Get("prio", &in.priority));
  return in;
}

const char* DmsKindName(DmsKind k) {
  switch (k) {
    case DmsKind::kCompute:
      return "compute";
    case DmsKind::kLoad:
      return "load";
    case DmsKind::kStore:
      return "store";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// CSV.

constexpr const char* kReportColumns[] = {
    "program",
    "config",
    "cycles",
    "ksh_bytes_compulsory",
    "ksh_bytes_noncompulsory",
    "io_bytes_compulsory",
    "io_bytes_noncompulsory",
    "intermediate_load_bytes",
    "intermediate_store_bytes",
    "fu_util_ntt",
    "fu_util_aut",
    "fu_util_mul",
    "fu_util_add",
    "peak_resident_bytes",
};
constexpr size_t kNumReportColumns = std::size(kReportColumns);

std::string CsvField(absl::string_view s) {
  if (s.find_first_of(",\"\n") == absl::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

absl::StatusOr<std::vector<std::string>> SplitCsv(int line,
                                                  absl::string_view s) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quoted) {
      if (c == '"' && i + 1 < s.size() && s[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  if (quoted) return LineError(line, "unterminated quote");
  return out;
}

std::string FormatUtil(double u) { return absl::StrFormat("%.6f", u); }

double RoundUtil(double u) { return std::round(u * 1e6) / 1e6; }

}  // namespace

// ---------------------------------------------------------------------------

std::string FormatArch(const MachineConfig& config) {
  MachineConfig copy = config;
  std::string out = absl::StrCat("name = ", config.name, "\n");
  const char* section = "";
  for (const ArchKey& k : ArchKeys(copy)) {
    if (std::string(section) != k.section) {
      section = k.section;
      absl::StrAppend(&out, "\n[", section, "]\n");
    }
    absl::StrAppend(&out, k.key, " = ");
    if (k.int_field) absl::StrAppend(&out, *k.int_field);
    if (k.wide_field) absl::StrAppend(&out, *k.wide_field);
    if (k.model_field) absl::StrAppend(&out, ModelName(*k.model_field));
    out += "\n";
  }
  return out;
}

absl::StatusOr<MachineConfig> ParseArch(absl::string_view text) {
  MachineConfig config;
  std::vector<ArchKey> keys = ArchKeys(config);
  std::string section;
  std::map<std::string, int> seen;
  for (const auto& [line, content] : Lines(text)) {
    if (content.front() == '[') {
      if (content.back() != ']' || content.size() < 3) {
        return LineError(line, "malformed section header");
      }
      section = std::string(absl::StripAsciiWhitespace(
          content.substr(1, content.size() - 2)));
      bool known = false;
      for (const ArchKey& k : keys) known = known || section == k.section;
      if (!known) {
        return LineError(line, absl::StrCat("unknown section [", section, "]"));
      }
      continue;
    }
    size_t eq = content.find('=');
    if (eq == absl::string_view::npos) {
      return LineError(line, "expected 'key = value'");
    }
    std::string key(absl::StripAsciiWhitespace(content.substr(0, eq)));
    absl::string_view value =
        absl::StripAsciiWhitespace(content.substr(eq + 1));
    std::string full = absl::StrCat(section, ".", key);
    if (!seen.emplace(full, line).second) {
      return LineError(line, absl::StrCat("duplicate key '", full, "'"));
    }
    if (section.empty()) {
      if (key != "name") {
        return LineError(line, absl::StrCat("unknown key '", key, "'"));
      }
      if (value.empty() || value.find_first_of(" \t,") != value.npos) {
        return LineError(line, "name must be a non-empty word");
      }
      config.name = std::string(value);
      continue;
    }
    const ArchKey* match = nullptr;
    for (const ArchKey& k : keys) {
      if (section == k.section && key == k.key) match = &k;
    }
    if (match == nullptr) {
      return LineError(line, absl::StrCat("unknown key '", key,
                                          "' in [", section, "]"));
    }
    bool ok = true;
    if (match->int_field) ok = absl::SimpleAtoi(value, match->int_field);
    if (match->wide_field) ok = absl::SimpleAtoi(value, match->wide_field);
    if (match->model_field) {
      if (value == "high") {
        *match->model_field = FuModel::kHighThroughput;
      } else if (value == "low") {
        *match->model_field = FuModel::kLowThroughput;
      } else {
        ok = false;
      }
    }
    if (!ok) {
      return LineError(line, absl::StrCat("bad value '", value, "' for '",
                                          key, "'"));
    }
  }
  if (absl::Status s = config.Validate(); !s.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid architecture: ", s.message()));
  }
  return config;
}

// ---------------------------------------------------------------------------

BgvParams DfgFile::Params(uint64_t seed) const {
  BgvParams params;
  params.n = dfg.n;
  params.basis.moduli = dfg.moduli;
  params.t = dfg.t;
  params.seed = seed;
  return params;
}

std::string FormatDfg(const InstructionDfg& dfg, const HomProgram& program) {
  std::string out = absl::StrCat("dfg n=", dfg.n, " t=", dfg.t, "\n");
  for (size_t i = 0; i < dfg.moduli.size(); ++i) {
    const PrimeModulus& m = dfg.moduli[i];
    absl::StrAppend(&out, "modulus ", i, " q=", m.q, " n_max=", m.n_max,
                    " psi=", m.psi, "\n");
  }
  out += "begin program\n";
  out += FormatProgram(program);
  out += "end program\n";
  for (const DataObject& o : dfg.objects) {
    absl::StrAppend(&out, FormatObject("object", o), "\n");
  }
  for (const Instruction& in : dfg.instructions) {
    absl::StrAppend(&out, FormatInstruction(in), "\n");
  }
  return out;
}

absl::StatusOr<DfgFile> ParseDfg(absl::string_view text) {
  DfgFile file;
  bool have_header = false;
  bool in_program = false;
  bool have_program = false;
  int program_start = 0;
  std::string program_text;
  for (const auto& [line, content] : Lines(text)) {
    if (in_program) {
      if (content == "end program") {
        in_program = false;
        absl::StatusOr<HomProgram> p = ParseProgram(program_text);
        if (!p.ok()) {
          return LineError(program_start,
                           absl::StrCat("embedded program: ",
                                        p.status().message()));
        }
        file.program = *std::move(p);
        have_program = true;
      } else {
        absl::StrAppend(&program_text, content, "\n");
      }
      continue;
    }
    std::vector<absl::string_view> tok = Tokens(content);
    if (tok[0] == "dfg") {
      absl::StatusOr<Fields> f = Fields::Parse(line, tok, 1);
      if (!f.ok()) return f.status();
      HEVEC_RETURN_IF_ERROR(f->Only({"n", "t"}));
      HEVEC_RETURN_IF_ERROR(f->Get("n", &file.dfg.n));
      HEVEC_RETURN_IF_ERROR(f->Get("t", &file.dfg.t));
      have_header = true;
    } else if (!have_header) {
      return LineError(line, "expected 'dfg n=<n> t=<t>' header");
    } else if (tok[0] == "modulus") {
      size_t index;
      if (tok.size() < 2 || !absl::SimpleAtoi(tok[1], &index) ||
          index != file.dfg.moduli.size()) {
        return LineError(line, "moduli must be numbered in order");
      }
      absl::StatusOr<Fields> f = Fields::Parse(line, tok, 2);
      if (!f.ok()) return f.status();
      HEVEC_RETURN_IF_ERROR(f->Only({"q", "n_max", "psi"}));
      Word q, psi;
      size_t n_max;
      HEVEC_RETURN_IF_ERROR(f->Get("q", &q));
      HEVEC_RETURN_IF_ERROR(f->Get("n_max", &n_max));
      HEVEC_RETURN_IF_ERROR(f->Get("psi", &psi));
      absl::StatusOr<PrimeModulus> m =
          PrimeModulus::CreateWithRoot(q, n_max, psi);
      if (!m.ok()) return LineError(line, m.status().message());
      file.dfg.moduli.push_back(*m);
    } else if (content == "begin program") {
      if (have_program) return LineError(line, "duplicate program section");
      in_program = true;
      program_start = line;
    } else if (tok[0] == "object") {
      absl::StatusOr<DataObject> o = ParseObject(line, tok);
      if (!o.ok()) return o.status();
      if (o->id != static_cast<int>(file.dfg.objects.size())) {
        return LineError(line, "objects must be numbered in order");
      }
      file.dfg.objects.push_back(*o);
    } else if (tok[0] == "inst") {
      absl::StatusOr<Instruction> in = ParseInstruction(line, tok);
      if (!in.ok()) return in.status();
      if (in->id != static_cast<int>(file.dfg.instructions.size())) {
        return LineError(line, "instructions must be numbered in order");
      }
      file.dfg.instructions.push_back(*std::move(in));
    } else {
      return LineError(line, absl::StrCat("unknown record '", tok[0], "'"));
    }
  }
  if (in_program) return LineError(program_start, "unterminated program");
  if (!have_header) return absl::InvalidArgumentError("missing dfg header");
  if (!have_program) return absl::InvalidArgumentError("missing program");
  if (absl::Status s = file.dfg.Validate(); !s.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid dfg: ", s.message()));
  }
  return file;
}

// ---------------------------------------------------------------------------

std::string FormatDms(const DataMovementSchedule& dms) {
  std::string out = absl::StrCat("dms capacity=", dms.capacity,
                                 " vector_bytes=", dms.vector_bytes, "\n");
  for (const DataObject& o : dms.spill_objects) {
    absl::StrAppend(&out, FormatObject("spill", o), "\n");
  }
  for (const DmsEntry& e : dms.entries) {
    absl::StrAppend(&out, DmsKindName(e.kind), " inst=", e.instruction,
                    " value=", e.value, " object=", e.object,
                    " slot=", e.slot,
                    " ops=", absl::StrJoin(e.operand_slots, ","),
                    " spill=", e.spill ? 1 : 0, " resident=", e.resident,
                    "\n");
  }
  return out;
}

absl::StatusOr<DataMovementSchedule> ParseDms(absl::string_view text) {
  DataMovementSchedule dms;
  bool have_header = false;
  for (const auto& [line, content] : Lines(text)) {
    std::vector<absl::string_view> tok = Tokens(content);
    if (tok[0] == "dms") {
      absl::StatusOr<Fields> f = Fields::Parse(line, tok, 1);
      if (!f.ok()) return f.status();
      HEVEC_RETURN_IF_ERROR(f->Only({"capacity", "vector_bytes"}));
      HEVEC_RETURN_IF_ERROR(f->Get("capacity", &dms.capacity));
      HEVEC_RETURN_IF_ERROR(f->Get("vector_bytes", &dms.vector_bytes));
      have_header = true;
      continue;
    }
    if (!have_header) {
      return LineError(line, "expected 'dms capacity=<c> ...' header");
    }
    if (tok[0] == "spill") {
      absl::StatusOr<DataObject> o = ParseObject(line, tok);
      if (!o.ok()) return o.status();
      dms.spill_objects.push_back(*o);
      continue;
    }
    DmsEntry e;
    if (tok[0] == "compute") {
      e.kind = DmsKind::kCompute;
    } else if (tok[0] == "load") {
      e.kind = DmsKind::kLoad;
    } else if (tok[0] == "store") {
      e.kind = DmsKind::kStore;
    } else {
      return LineError(line, absl::StrCat("unknown record '", tok[0], "'"));
    }
    absl::StatusOr<Fields> f = Fields::Parse(line, tok, 1);
    if (!f.ok()) return f.status();
    HEVEC_RETURN_IF_ERROR(f->Only(
        {"inst", "value", "object", "slot", "ops", "spill", "resident"}));
    HEVEC_RETURN_IF_ERROR(f->Get("inst", &e.instruction));
    HEVEC_RETURN_IF_ERROR(f->Get("value", &e.value));
    HEVEC_RETURN_IF_ERROR(f->Get("object", &e.object));
    HEVEC_RETURN_IF_ERROR(f->Get("slot", &e.slot));
    HEVEC_RETURN_IF_ERROR(f->GetList("ops", &e.operand_slots));
    int spill = 0;
    HEVEC_RETURN_IF_ERROR(f->Get("spill", &spill));
    if (spill != 0 && spill != 1) return LineError(line, "bad value for 'spill'");
    e.spill = spill == 1;
    HEVEC_RETURN_IF_ERROR(f->Get("resident", &e.resident));
    dms.entries.push_back(std::move(e));
  }
  if (!have_header) return absl::InvalidArgumentError("missing dms header");
  return dms;
}

// ---------------------------------------------------------------------------

std::string FormatStreams(const CycleSchedule& schedule) {
  std::string out =
      absl::StrCat("schedule total_cycles=", schedule.total_cycles, "\n");
  for (const ComponentStream& s : schedule.streams) {
    absl::StrAppend(&out, "stream ", s.component, "\n");
    for (const StreamEntry& e : s.entries) {
      absl::StrAppend(&out, e.op, " ", e.wait, "\n");
    }
    out += "end\n";
  }
  return out;
}

absl::StatusOr<CycleSchedule> ParseStreams(absl::string_view text) {
  CycleSchedule schedule;
  bool have_header = false;
  ComponentStream* current = nullptr;
  int open_line = 0;
  for (const auto& [line, content] : Lines(text)) {
    std::vector<absl::string_view> tok = Tokens(content);
    if (!have_header) {
      if (tok[0] != "schedule") {
        return LineError(line, "expected 'schedule total_cycles=<n>' header");
      }
      absl::StatusOr<Fields> f = Fields::Parse(line, tok, 1);
      if (!f.ok()) return f.status();
      HEVEC_RETURN_IF_ERROR(f->Only({"total_cycles"}));
      HEVEC_RETURN_IF_ERROR(f->Get("total_cycles", &schedule.total_cycles));
      have_header = true;
    } else if (current == nullptr) {
      if (tok[0] != "stream" || tok.size() != 2) {
        return LineError(line, "expected 'stream <component>'");
      }
      schedule.streams.push_back({std::string(tok[1]), {}});
      current = &schedule.streams.back();
      open_line = line;
    } else if (tok.size() == 1 && tok[0] == "end") {
      current = nullptr;
    } else {
      StreamEntry e;
      if (tok.size() != 2 || !absl::SimpleAtoi(tok[1], &e.wait) ||
          e.wait < 0) {
        return LineError(line, "expected '<op> <wait>' with wait >= 0");
      }
      e.op = std::string(tok[0]);
      current->entries.push_back(std::move(e));
    }
  }
  if (current != nullptr) return LineError(open_line, "unterminated stream");
  if (!have_header) return absl::InvalidArgumentError("missing schedule header");
  return schedule;
}

// ---------------------------------------------------------------------------

bool ReportRow::operator==(const ReportRow& o) const {
  for (int k = 0; k < kNumFuKinds; ++k) {
    if (fu_util[k] != o.fu_util[k]) return false;
  }
  const TrafficBreakdown& a = traffic;
  const TrafficBreakdown& b = o.traffic;
  return program == o.program && config == o.config && cycles == o.cycles &&
         a.ksh_compulsory == b.ksh_compulsory &&
         a.ksh_noncompulsory == b.ksh_noncompulsory &&
         a.io_compulsory == b.io_compulsory &&
         a.io_noncompulsory == b.io_noncompulsory &&
         a.intermediate_load == b.intermediate_load &&
         a.intermediate_store == b.intermediate_store &&
         peak_resident_bytes == o.peak_resident_bytes;
}

ReportRow MakeReportRow(absl::string_view program, absl::string_view config,
                        const SimStats& stats) {
  ReportRow row;
  row.program = std::string(program);
  row.config = std::string(config);
  row.cycles = stats.total_cycles;
  row.traffic = stats.traffic;
  for (int k = 0; k < kNumFuKinds; ++k) {
    row.fu_util[k] = RoundUtil(stats.FuUtilization(static_cast<FuKind>(k)));
  }
  row.peak_resident_bytes = stats.peak_resident_bytes;
  return row;
}

std::string ReportHeader() {
  return absl::StrJoin(std::begin(kReportColumns), std::end(kReportColumns),
                       ",");
}

std::string FormatReportRow(const ReportRow& row) {
  const TrafficBreakdown& t = row.traffic;
  return absl::StrCat(
      CsvField(row.program), ",", CsvField(row.config), ",", row.cycles, ",",
      t.ksh_compulsory, ",", t.ksh_noncompulsory, ",", t.io_compulsory, ",",
      t.io_noncompulsory, ",", t.intermediate_load, ",", t.intermediate_store,
      ",", FormatUtil(row.fu_util[0]), ",", FormatUtil(row.fu_util[1]), ",",
      FormatUtil(row.fu_util[2]), ",", FormatUtil(row.fu_util[3]), ",",
      row.peak_resident_bytes);
}

std::string FormatReport(const std::vector<ReportRow>& rows) {
  std::string out = ReportHeader() + "\n";
  for (const ReportRow& row : rows) absl::StrAppend(&out, FormatReportRow(row), "\n");
  return out;
}

absl::StatusOr<std::vector<ReportRow>> ParseReport(absl::string_view text) {
  std::vector<ReportRow> rows;
  bool have_header = false;
  for (const auto& [line, content] : Lines(text)) {
    if (!have_header) {
      if (content != ReportHeader()) return LineError(line, "bad CSV header");
      have_header = true;
      continue;
    }
    absl::StatusOr<std::vector<std::string>> cells = SplitCsv(line, content);
    if (!cells.ok()) return cells.status();
    if (cells->size() != kNumReportColumns) {
      return LineError(line, absl::StrCat("expected ", kNumReportColumns,
                                          " fields, got ", cells->size()));
    }
    const std::vector<std::string>& c = *cells;
    ReportRow row;
    row.program = c[0];
    row.config = c[1];
    int64_t* ints[] = {&row.cycles,
                       &row.traffic.ksh_compulsory,
                       &row.traffic.ksh_noncompulsory,
                       &row.traffic.io_compulsory,
                       &row.traffic.io_noncompulsory,
                       &row.traffic.intermediate_load,
                       &row.traffic.intermediate_store};
    for (size_t i = 0; i < std::size(ints); ++i) {
      if (!absl::SimpleAtoi(c[2 + i], ints[i]) || *ints[i] < 0) {
        return LineError(line, absl::StrCat("bad value for ",
                                            kReportColumns[2 + i]));
      }
    }
    for (int k = 0; k < kNumFuKinds; ++k) {
      if (!absl::SimpleAtod(c[9 + k], &row.fu_util[k]) || row.fu_util[k] < 0) {
        return LineError(line, absl::StrCat("bad value for ",
                                            kReportColumns[9 + k]));
      }
    }
    if (!absl::SimpleAtoi(c[13], &row.peak_resident_bytes) ||
        row.peak_resident_bytes < 0) {
      return LineError(line, "bad value for peak_resident_bytes");
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) return absl::InvalidArgumentError("missing CSV header");
  return rows;
}

// ---------------------------------------------------------------------------

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::Status WriteFile(const std::string& path, absl::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) return absl::UnavailableError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

}  // namespace hevec
