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

#include "hevec/dsl.h"

#include <algorithm>
#include <bit>
#include <set>
#include <tuple>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "hevec/automorphism.h"

namespace hevec {
namespace {

constexpr std::pair<OpKind, absl::string_view> kKindNames[] = {
    {OpKind::kInput, "input"},         {OpKind::kAdd, "add"},
    {OpKind::kMul, "mul"},             {OpKind::kRotate, "rotate"},
    {OpKind::kMulPlain, "mulplain"},   {OpKind::kAddPlain, "addplain"},
    {OpKind::kModSwitch, "modswitch"},
};

size_t Arity(OpKind kind) {
  switch (kind) {
    case OpKind::kInput:
      return 0;
    case OpKind::kAdd:
    case OpKind::kMul:
      return 2;
    default:
      return 1;
  }
}

absl::Status LineError(int line, absl::string_view message) {
  return absl::InvalidArgumentError(
      absl::StrCat("line ", line, ": ", message));
}

}  // namespace

absl::string_view OpKindName(OpKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

absl::StatusOr<OpKind> ParseOpKind(absl::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown op '", name, "'"));
}

std::string HintId::ToString() const {
  return absl::StrCat(target.ToString(), "@", level);
}

absl::StatusOr<HintId> HintId::Parse(absl::string_view text) {
  std::vector<absl::string_view> parts = absl::StrSplit(text, '@');
  HintId id;
  if (parts.size() != 2 || !absl::SimpleAtoi(parts[1], &id.level)) {
    return absl::InvalidArgumentError(absl::StrCat("bad hint id '", text, "'"));
  }
  if (parts[0] == "relin") {
    id.target = HintTarget::Relinearize();
    return id;
  }
  uint64_t k;
  if (absl::ConsumePrefix(&parts[0], "aut") && absl::SimpleAtoi(parts[0], &k)) {
    id.target = HintTarget::Automorphism(k);
    return id;
  }
  return absl::InvalidArgumentError(absl::StrCat("bad hint id '", text, "'"));
}

bool HintId::operator<(const HintId& o) const {
  auto key = [](const HintId& h) {
    return std::make_tuple(h.level, static_cast<int>(h.target.kind),
                           h.target.kind == HintTarget::Kind::kAutomorphism
                               ? h.target.k
                               : 0);
  };
  return key(*this) < key(o);
}

uint64_t RotationIndex(int64_t r, size_t n) {
  return RotationGaloisElement(r, n);
}

absl::Status HomProgram::Validate() const {
  if (n < 2 || (n & (n - 1)) != 0) {
    return absl::InvalidArgumentError("N must be a power of two");
  }
  std::set<int> input_set(inputs.begin(), inputs.end());
  for (size_t i = 0; i < nodes.size(); ++i) {
    const HomOpNode& node = nodes[i];
    const std::string where = absl::StrCat("node ", i, ": ");
    if (node.id != static_cast<int>(i)) {
      return absl::InvalidArgumentError(where + "ids must be consecutive");
    }
    if (node.operands.size() != Arity(node.kind)) {
      return absl::InvalidArgumentError(where + "wrong operand count");
    }
    for (int op : node.operands) {
      if (op < 0 || op >= node.id) {
        return absl::InvalidArgumentError(where + "operand does not precede");
      }
    }
    if (node.level < 1) {
      return absl::InvalidArgumentError(where + "level below 1");
    }
    const bool is_input = node.kind == OpKind::kInput;
    if (is_input != input_set.count(node.id) > 0) {
      return absl::InvalidArgumentError(where + "input list mismatch");
    }
    for (int op : node.operands) {
      const size_t expected = node.kind == OpKind::kModSwitch
                                  ? node.level + 1
                                  : node.level;
      if (nodes[op].level != expected) {
        return absl::InvalidArgumentError(where + "operand level mismatch");
      }
    }
    std::optional<HintId> want;
    if (node.kind == OpKind::kMul) {
      want = HintId{HintTarget::Relinearize(), node.level};
    } else if (node.kind == OpKind::kRotate) {
      if (auto s = ValidateGaloisIndex(node.galois, n); !s.ok()) {
        return absl::InvalidArgumentError(where + std::string(s.message()));
      }
      want = HintId{HintTarget::Automorphism(node.galois), node.level};
    }
    if (want.has_value() != node.hint.has_value() ||
        (want && !(*want == *node.hint))) {
      return absl::InvalidArgumentError(where + "hint identity mismatch");
    }
    if (node.kind == OpKind::kMulPlain || node.kind == OpKind::kAddPlain) {
      if (node.constant < 0 ||
          node.constant >= static_cast<int>(constants.size())) {
        return absl::InvalidArgumentError(where + "unknown constant");
      }
    }
  }
  for (const Plaintext& c : constants) {
    if (c.coeffs.size() != n) {
      return absl::InvalidArgumentError("constant length differs from N");
    }
    for (Word w : c.coeffs) {
      if (w >= t) return absl::InvalidArgumentError("constant not below t");
    }
  }
  for (int out : outputs) {
    if (out < 0 || out >= static_cast<int>(nodes.size())) {
      return absl::InvalidArgumentError("output refers to unknown node");
    }
  }
  return absl::OkStatus();
}

std::vector<HintId> HomProgram::DistinctHints() const {
  std::vector<HintId> out;
  for (const HomOpNode& node : nodes) {
    if (node.hint &&
        std::find(out.begin(), out.end(), *node.hint) == out.end()) {
      out.push_back(*node.hint);
    }
  }
  return out;
}

ProgramBuilder::ProgramBuilder(size_t n, Word t) {
  program_.n = n;
  program_.t = t;
  if (n < 2 || (n & (n - 1)) != 0) {
    status_ = absl::InvalidArgumentError("N must be a power of two");
  }
}

int ProgramBuilder::Fail(absl::Status status) {
  if (status_.ok()) status_ = std::move(status);
  return -1;
}

bool ProgramBuilder::Check(int x) {
  if (!status_.ok()) return false;
  if (x < 0 || x >= static_cast<int>(program_.nodes.size())) {
    Fail(absl::InvalidArgumentError(absl::StrCat("unknown node ", x)));
    return false;
  }
  return true;
}

int ProgramBuilder::Append(HomOpNode node) {
  node.id = static_cast<int>(program_.nodes.size());
  program_.nodes.push_back(std::move(node));
  return program_.nodes.back().id;
}

size_t ProgramBuilder::LevelOf(int x) const {
  return program_.nodes[x].level;
}

int ProgramBuilder::SwitchTo(int x, size_t level) {
  while (program_.nodes[x].level > level) {
    auto it = switched_.find(x);
    if (it != switched_.end()) {
      x = it->second;
      continue;
    }
    HomOpNode node;
    node.kind = OpKind::kModSwitch;
    node.operands = {x};
    node.level = program_.nodes[x].level - 1;
    int y = Append(std::move(node));
    switched_[x] = y;
    x = y;
  }
  return x;
}

int ProgramBuilder::Input(size_t level) {
  if (!status_.ok()) return -1;
  if (level < 1) return Fail(absl::InvalidArgumentError("input level 0"));
  HomOpNode node;
  node.kind = OpKind::kInput;
  node.level = level;
  int id = Append(std::move(node));
  program_.inputs.push_back(id);
  return id;
}

int ProgramBuilder::Add(int x, int y) {
  if (!Check(x) || !Check(y)) return -1;
  const size_t level = std::min(LevelOf(x), LevelOf(y));
  x = SwitchTo(x, level);
  y = SwitchTo(y, level);
  HomOpNode node;
  node.kind = OpKind::kAdd;
  node.operands = {x, y};
  node.level = level;
  return Append(std::move(node));
}

int ProgramBuilder::Mul(int x, int y) {
  if (!Check(x) || !Check(y)) return -1;
  const size_t level = std::min(LevelOf(x), LevelOf(y));
  if (level < 2) {
    return Fail(absl::FailedPreconditionError(absl::StrCat(
        "multiplication at level ", level, " exhausts the noise budget")));
  }
  x = SwitchTo(x, level - 1);
  y = SwitchTo(y, level - 1);
  HomOpNode node;
  node.kind = OpKind::kMul;
  node.operands = {x, y};
  node.level = level - 1;
  node.hint = HintId{HintTarget::Relinearize(), level - 1};
  return Append(std::move(node));
}

int ProgramBuilder::Rotate(int x, int64_t amount) {
  if (!Check(x)) return -1;
  HomOpNode node;
  node.kind = OpKind::kRotate;
  node.operands = {x};
  node.level = LevelOf(x);
  node.amount = amount;
  node.galois = RotationIndex(amount, program_.n);
  node.hint = HintId{HintTarget::Automorphism(node.galois), node.level};
  return Append(std::move(node));
}

int ProgramBuilder::MulPlain(int x, const Plaintext& p) {
  if (!Check(x)) return -1;
  if (p.coeffs.size() != program_.n) {
    return Fail(absl::InvalidArgumentError("constant length differs from N"));
  }
  program_.constants.push_back(p);
  HomOpNode node;
  node.kind = OpKind::kMulPlain;
  node.operands = {x};
  node.level = LevelOf(x);
  node.constant = static_cast<int>(program_.constants.size()) - 1;
  return Append(std::move(node));
}

int ProgramBuilder::AddPlain(int x, const Plaintext& p) {
  int id = MulPlain(x, p);
  if (id >= 0) program_.nodes[id].kind = OpKind::kAddPlain;
  return id;
}

void ProgramBuilder::Output(int x) {
  if (Check(x)) program_.outputs.push_back(x);
}

absl::StatusOr<HomProgram> ProgramBuilder::Build() const {
  if (!status_.ok()) return status_;
  if (auto s = program_.Validate(); !s.ok()) return s;
  return program_;
}

absl::StatusOr<HomProgram> BuildMatVec(size_t rows, size_t n, size_t level,
                                       Word t) {
  ProgramBuilder p(n, t);
  std::vector<int> m_rows;
  for (size_t i = 0; i < rows; ++i) m_rows.push_back(p.Input(level));
  const int v = p.Input(level);
  const int log_n = std::countr_zero(n);
  for (size_t i = 0; i < rows; ++i) {
    int x = p.Mul(m_rows[i], v);
    for (int s = 0; s < log_n; ++s) {
      x = p.Add(x, p.Rotate(x, int64_t{1} << s));
    }
    p.Output(x);
  }
  return p.Build();
}

absl::StatusOr<std::vector<Plaintext>> EvalPlain(
    const HomProgram& program, const std::vector<Plaintext>& inputs) {
  if (inputs.size() != program.inputs.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "program has ", program.inputs.size(), " inputs, got ",
        inputs.size()));
  }
  const Word t = program.t;
  std::vector<Plaintext> values(program.nodes.size());
  for (size_t i = 0; i < program.inputs.size(); ++i) {
    if (inputs[i].coeffs.size() != program.n) {
      return absl::InvalidArgumentError("input length differs from N");
    }
    values[program.inputs[i]] = inputs[i];
  }
  for (const HomOpNode& node : program.nodes) {
    const auto& ops = node.operands;
    switch (node.kind) {
      case OpKind::kInput:
        break;
      case OpKind::kAdd:
        values[node.id] = PlaintextAdd(values[ops[0]], values[ops[1]], t);
        break;
      case OpKind::kMul:
        values[node.id] = PlaintextMul(values[ops[0]], values[ops[1]], t);
        break;
      case OpKind::kRotate:
        values[node.id] = PlaintextAutomorphism(values[ops[0]], node.galois, t);
        break;
      case OpKind::kMulPlain:
        values[node.id] =
            PlaintextMul(values[ops[0]], program.constants[node.constant], t);
        break;
      case OpKind::kAddPlain:
        values[node.id] =
            PlaintextAdd(values[ops[0]], program.constants[node.constant], t);
        break;
      case OpKind::kModSwitch:
        values[node.id] = values[ops[0]];
        break;
    }
  }
  std::vector<Plaintext> out;
  for (int id : program.outputs) out.push_back(values[id]);
  return out;
}

std::string FormatProgram(const HomProgram& program) {
  std::string out =
      absl::StrCat("program n=", program.n, " t=", program.t, "\n");
  for (size_t c = 0; c < program.constants.size(); ++c) {
    absl::StrAppend(&out, "const ", c, " ",
                    absl::StrJoin(program.constants[c].coeffs, " "), "\n");
  }
  for (const HomOpNode& node : program.nodes) {
    absl::StrAppend(&out, "node ", node.id, " ", OpKindName(node.kind));
    for (int op : node.operands) absl::StrAppend(&out, " ", op);
    absl::StrAppend(&out, " level=", node.level);
    if (node.kind == OpKind::kRotate) {
      absl::StrAppend(&out, " amount=", node.amount, " k=", node.galois);
    }
    if (node.constant >= 0) absl::StrAppend(&out, " const=", node.constant);
    if (node.hint) absl::StrAppend(&out, " hint=", node.hint->ToString());
    out += "\n";
  }
  for (int id : program.outputs) absl::StrAppend(&out, "output ", id, "\n");
  return out;
}

absl::StatusOr<HomProgram> ParseProgram(absl::string_view text) {
  HomProgram program;
  bool have_header = false;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<absl::string_view> tok =
        absl::StrSplit(line, ' ', absl::SkipEmpty());
    if (tok[0] == "program") {
      for (size_t i = 1; i < tok.size(); ++i) {
        std::pair<absl::string_view, absl::string_view> kv =
            absl::StrSplit(tok[i], absl::MaxSplits('=', 1));
        bool ok = false;
        if (kv.first == "n") ok = absl::SimpleAtoi(kv.second, &program.n);
        if (kv.first == "t") ok = absl::SimpleAtoi(kv.second, &program.t);
        if (!ok) return LineError(line_no, "bad program header");
      }
      have_header = true;
    } else if (tok[0] == "const") {
      size_t index;
      if (tok.size() < 2 || !absl::SimpleAtoi(tok[1], &index) ||
          index != program.constants.size()) {
        return LineError(line_no, "constants must be numbered in order");
      }
      Plaintext p;
      for (size_t i = 2; i < tok.size(); ++i) {
        Word w;
        if (!absl::SimpleAtoi(tok[i], &w)) {
          return LineError(line_no, "bad constant coefficient");
        }
        p.coeffs.push_back(w);
      }
      program.constants.push_back(std::move(p));
    } else if (tok[0] == "node") {
      HomOpNode node;
      if (tok.size() < 3 || !absl::SimpleAtoi(tok[1], &node.id)) {
        return LineError(line_no, "expected 'node <id> <kind> ...'");
      }
      absl::StatusOr<OpKind> kind = ParseOpKind(tok[2]);
      if (!kind.ok()) return LineError(line_no, kind.status().message());
      node.kind = *kind;
      for (size_t i = 3; i < tok.size(); ++i) {
        if (tok[i].find('=') == absl::string_view::npos) {
          int op;
          if (!absl::SimpleAtoi(tok[i], &op)) {
            return LineError(line_no, "bad operand");
          }
          node.operands.push_back(op);
          continue;
        }
        std::pair<absl::string_view, absl::string_view> kv =
            absl::StrSplit(tok[i], absl::MaxSplits('=', 1));
        bool ok = false;
        if (kv.first == "level") {
          ok = absl::SimpleAtoi(kv.second, &node.level);
        } else if (kv.first == "amount") {
          ok = absl::SimpleAtoi(kv.second, &node.amount);
        } else if (kv.first == "k") {
          ok = absl::SimpleAtoi(kv.second, &node.galois);
        } else if (kv.first == "const") {
          ok = absl::SimpleAtoi(kv.second, &node.constant);
        } else if (kv.first == "hint") {
          absl::StatusOr<HintId> h = HintId::Parse(kv.second);
          ok = h.ok();
          if (ok) node.hint = *h;
        }
        if (!ok) {
          return LineError(line_no, absl::StrCat("bad field '", tok[i], "'"));
        }
      }
      if (node.kind == OpKind::kInput) program.inputs.push_back(node.id);
      program.nodes.push_back(std::move(node));
    } else if (tok[0] == "output") {
      int id;
      if (tok.size() != 2 || !absl::SimpleAtoi(tok[1], &id)) {
        return LineError(line_no, "expected 'output <id>'");
      }
      program.outputs.push_back(id);
    } else {
      return LineError(line_no, absl::StrCat("unknown record '", tok[0], "'"));
    }
  }
  if (!have_header) return LineError(line_no, "missing program header");
  if (auto s = program.Validate(); !s.ok()) return s;
  return program;
}

}  // namespace hevec
