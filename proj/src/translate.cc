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

// Expansion of homomorphic operations into residue-vector instructions.

#include <map>
#include <tuple>
#include <utility>

#include "absl/strings/str_cat.h"
#include "hevec/compiler.h"

namespace hevec {
namespace {

class Translator {
 public:
  Translator(const HomProgram& program, const BgvParams& params)
      : program_(program), params_(params) {
    dfg_.n = program.n;
    dfg_.t = program.t;
    dfg_.moduli = params.basis.moduli;
    a_.resize(program.nodes.size());
    b_.resize(program.nodes.size());
  }

  absl::StatusOr<InstructionDfg> Run() {
    for (const HomOpNode& node : program_.nodes) {
      homop_ = node.id;
      if (auto s = Expand(node); !s.ok()) {
        return absl::Status(s.code(), absl::StrCat("node ", node.id, ": ",
                                                   s.message()));
      }
    }
    std::map<int, bool> stored;
    for (int id : program_.outputs) {
      if (stored[id]) continue;
      stored[id] = true;
      homop_ = id;
      const size_t level = program_.nodes[id].level;
      for (int poly = 0; poly < 2; ++poly) {
        for (size_t j = 0; j < level; ++j) {
          DataObject obj = NewObject(ObjectClass::kOutput);
          obj.node = id;
          obj.poly = poly;
          obj.residue = static_cast<int>(j);
          const int oid = AddObject(obj);
          Instruction st;
          st.op = Opcode::kStore;
          st.operands = {Value(id, poly, j)};
          st.object = oid;
          Emit(st);
        }
      }
    }
    return Finish();
  }

 private:
  int64_t VectorBytes() const { return static_cast<int64_t>(program_.n) * 4; }

  DataObject NewObject(ObjectClass cls) const {
    DataObject o;
    o.cls = cls;
    o.bytes = VectorBytes();
    return o;
  }

  int AddObject(DataObject obj) {
    obj.id = static_cast<int>(dfg_.objects.size());
    dfg_.objects.push_back(std::move(obj));
    return dfg_.objects.back().id;
  }

  int Emit(Instruction in) {
    in.id = static_cast<int>(dfg_.instructions.size());
    in.homop = homop_;
    in.keyswitch = in_keyswitch_;
    dfg_.instructions.push_back(std::move(in));
    return dfg_.instructions.back().id;
  }

  int LoadObject(const DataObject& obj) {
    const int oid = AddObject(obj);
    Instruction ld;
    ld.op = Opcode::kLoad;
    ld.object = oid;
    const bool ks = in_keyswitch_;
    in_keyswitch_ = false;
    const int id = Emit(ld);
    in_keyswitch_ = ks;
    return id;
  }

  // Residue j of polynomial `poly` of a node, loading program inputs on
  // first use.
  int Value(int node, int poly, size_t j) {
    std::vector<int>& v = poly == 0 ? a_[node] : b_[node];
    if (program_.nodes[node].kind == OpKind::kInput && v.empty()) {
      v.assign(program_.nodes[node].level, -1);
    }
    if (v[j] == -1) {
      DataObject obj = NewObject(ObjectClass::kInput);
      obj.node = node;
      obj.poly = poly;
      obj.residue = static_cast<int>(j);
      v[j] = LoadObject(obj);
    }
    return v[j];
  }

  int Constant(int c, size_t j) {
    auto key = std::make_pair(c, j);
    auto it = constants_.find(key);
    if (it != constants_.end()) return it->second;
    DataObject obj = NewObject(ObjectClass::kInput);
    obj.constant = c;
    obj.residue = static_cast<int>(j);
    const int id = LoadObject(obj);
    constants_.emplace(key, id);
    return id;
  }

  int HintEntry(const HintId& hint, int matrix, size_t i, size_t j) {
    auto key = std::make_tuple(hint.ToString(), matrix, i, j);
    auto it = ksh_.find(key);
    if (it != ksh_.end()) return it->second;
    DataObject obj = NewObject(ObjectClass::kKsh);
    obj.hint = hint;
    obj.matrix = matrix;
    obj.row = static_cast<int>(i);
    obj.col = static_cast<int>(j);
    const int id = LoadObject(obj);
    ksh_.emplace(key, id);
    return id;
  }

  int Binary(Opcode op, int x, int y, int modulus) {
    Instruction in;
    in.op = op;
    in.operands = {x, y};
    in.modulus = modulus;
    return Emit(in);
  }

  int Add(int x, int y, size_t j) {
    return Binary(Opcode::kVecAdd, x, y, static_cast<int>(j));
  }
  int Mul(int x, int y, size_t j) {
    return Binary(Opcode::kVecMul, x, y, static_cast<int>(j));
  }

  int Unary(Opcode op, int x, int modulus) {
    Instruction in;
    in.op = op;
    in.operands = {x};
    in.modulus = modulus;
    return Emit(in);
  }

  int MulScalar(int x, Word scalar, int modulus) {
    Instruction in;
    in.op = Opcode::kVecMulScalar;
    in.operands = {x};
    in.modulus = modulus;
    in.scalar = scalar;
    return Emit(in);
  }

  int Automorphism(int x, uint64_t k, size_t j) {
    Instruction in;
    in.op = Opcode::kAutomorphism;
    in.operands = {x};
    in.modulus = static_cast<int>(j);
    in.galois = k;
    in.domain = Domain::kNtt;
    return Emit(in);
  }

  // Key switch of x (NTT domain, one value per residue); returns (u1, u0).
  std::pair<std::vector<int>, std::vector<int>> KeySwitch(
      const std::vector<int>& x, const HintId& hint) {
    const size_t level = x.size();
    in_keyswitch_ = true;
    std::vector<int> y(level);
    for (size_t i = 0; i < level; ++i) {
      y[i] = Unary(Opcode::kIntt, x[i], static_cast<int>(i));
    }
    std::vector<int> u0(level, -1), u1(level, -1);
    auto accumulate = [&](int& acc, int term, size_t j) {
      acc = acc == -1 ? Unary(Opcode::kVecAdd, term, static_cast<int>(j))
                      : Add(acc, term, j);
    };
    for (size_t i = 0; i < level; ++i) {
      for (size_t j = 0; j < level; ++j) {
        const int xqj =
            i == j ? x[i] : Unary(Opcode::kNtt, y[i], static_cast<int>(j));
        accumulate(u0[j], Mul(xqj, HintEntry(hint, 0, i, j), j), j);
        accumulate(u1[j], Mul(xqj, HintEntry(hint, 1, i, j), j), j);
      }
    }
    in_keyswitch_ = false;
    return {u1, u0};
  }

  std::vector<int> Poly(int node, int poly, size_t level) {
    std::vector<int> out(level);
    for (size_t j = 0; j < level; ++j) out[j] = Value(node, poly, j);
    return out;
  }

  absl::Status Expand(const HomOpNode& node) {
    const size_t level = node.level;
    const auto& ops = node.operands;
    std::vector<int>& a = a_[node.id];
    std::vector<int>& b = b_[node.id];
    switch (node.kind) {
      case OpKind::kInput:
        return absl::OkStatus();  // loaded on first use
      case OpKind::kAdd:
        for (size_t j = 0; j < level; ++j) {
          a.push_back(Add(Value(ops[0], 0, j), Value(ops[1], 0, j), j));
          b.push_back(Add(Value(ops[0], 1, j), Value(ops[1], 1, j), j));
        }
        return absl::OkStatus();
      case OpKind::kMul: {
        if (!node.hint) return absl::InvalidArgumentError("mul without hint");
        std::vector<int> l2(level), l1(level), l0(level);
        for (size_t j = 0; j < level; ++j) {
          const int a0 = Value(ops[0], 0, j), b0 = Value(ops[0], 1, j);
          const int a1 = Value(ops[1], 0, j), b1 = Value(ops[1], 1, j);
          l2[j] = Mul(a0, a1, j);
          l1[j] = Add(Mul(a0, b1, j), Mul(a1, b0, j), j);
          l0[j] = Mul(b0, b1, j);
        }
        auto [u1, u0] = KeySwitch(l2, *node.hint);
        for (size_t j = 0; j < level; ++j) {
          a.push_back(Add(l1[j], u1[j], j));
          b.push_back(Add(l0[j], u0[j], j));
        }
        return absl::OkStatus();
      }
      case OpKind::kRotate: {
        if (!node.hint) {
          return absl::InvalidArgumentError("rotate without hint");
        }
        std::vector<int> pa(level), pb(level);
        for (size_t j = 0; j < level; ++j) {
          pa[j] = Automorphism(Value(ops[0], 0, j), node.galois, j);
          pb[j] = Automorphism(Value(ops[0], 1, j), node.galois, j);
        }
        auto [u1, u0] = KeySwitch(pa, *node.hint);
        a = u1;
        for (size_t j = 0; j < level; ++j) b.push_back(Add(pb[j], u0[j], j));
        return absl::OkStatus();
      }
      case OpKind::kMulPlain:
        for (size_t j = 0; j < level; ++j) {
          const int p = Constant(node.constant, j);
          a.push_back(Mul(Value(ops[0], 0, j), p, j));
          b.push_back(Mul(Value(ops[0], 1, j), p, j));
        }
        return absl::OkStatus();
      case OpKind::kAddPlain:
        for (size_t j = 0; j < level; ++j) {
          a.push_back(Value(ops[0], 0, j));
          b.push_back(Add(Value(ops[0], 1, j), Constant(node.constant, j), j));
        }
        return absl::OkStatus();
      case OpKind::kModSwitch: {
        const size_t from = level + 1;
        const ModSwitchConstants c = GetModSwitchConstants(params_, from);
        const int last_index = static_cast<int>(from - 1);
        for (int poly = 0; poly < 2; ++poly) {
          std::vector<int>& out = poly == 0 ? a : b;
          const int last =
              Unary(Opcode::kIntt, Value(ops[0], poly, from - 1), last_index);
          const int k = MulScalar(last, c.neg_ql_inv_mod_t, kPlainModulus);
          for (size_t j = 0; j < level; ++j) {
            const int mj = static_cast<int>(j);
            const int delta = Unary(
                Opcode::kNtt, Add(MulScalar(k, c.ql_mod_qj[j], mj), last, j),
                mj);
            out.push_back(Add(MulScalar(Value(ops[0], poly, j), c.scale[j], mj),
                              MulScalar(delta, c.neg_scale[j], mj), j));
          }
        }
        return absl::OkStatus();
      }
    }
    return absl::InternalError("unknown op kind");
  }

  // Drops instructions that reach no store, renumbers, assigns priorities.
  InstructionDfg Finish() {
    std::vector<Instruction>& ins = dfg_.instructions;
    std::vector<bool> live(ins.size(), false);
    for (size_t i = ins.size(); i-- > 0;) {
      if (ins[i].op == Opcode::kStore) live[i] = true;
      if (!live[i]) continue;
      for (int v : ins[i].operands) live[v] = true;
    }
    std::vector<int> remap(ins.size(), -1);
    std::vector<Instruction> kept;
    std::vector<bool> object_used(dfg_.objects.size(), false);
    for (size_t i = 0; i < ins.size(); ++i) {
      if (!live[i]) continue;
      Instruction in = ins[i];
      remap[i] = static_cast<int>(kept.size());
      in.id = remap[i];
      for (int& v : in.operands) v = remap[v];
      if (in.object >= 0) object_used[in.object] = true;
      kept.push_back(std::move(in));
    }
    std::vector<int> object_remap(dfg_.objects.size(), -1);
    std::vector<DataObject> objects;
    for (size_t o = 0; o < dfg_.objects.size(); ++o) {
      if (!object_used[o]) continue;
      object_remap[o] = static_cast<int>(objects.size());
      objects.push_back(dfg_.objects[o]);
      objects.back().id = object_remap[o];
    }
    const int64_t count = static_cast<int64_t>(kept.size());
    for (Instruction& in : kept) {
      if (in.object >= 0) in.object = object_remap[in.object];
      in.priority = count - in.id;
    }
    dfg_.instructions = std::move(kept);
    dfg_.objects = std::move(objects);
    return std::move(dfg_);
  }

  const HomProgram& program_;
  const BgvParams& params_;
  InstructionDfg dfg_;
  std::vector<std::vector<int>> a_, b_;
  std::map<std::pair<int, size_t>, int> constants_;
  std::map<std::tuple<std::string, int, size_t, size_t>, int> ksh_;
  int homop_ = -1;
  bool in_keyswitch_ = false;
};

}  // namespace

absl::StatusOr<InstructionDfg> Translate(const HomProgram& program,
                                         const BgvParams& params) {
  if (auto s = program.Validate(); !s.ok()) return s;
  if (program.n != params.n || program.t != params.t) {
    return absl::InvalidArgumentError("program and parameters disagree");
  }
  for (const HomOpNode& node : program.nodes) {
    const size_t need =
        node.kind == OpKind::kModSwitch ? node.level + 1 : node.level;
    if (need > params.max_level()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "node ", node.id, " needs ", need, " moduli, parameters have ",
          params.max_level()));
    }
  }
  Translator t(program, params);
  return t.Run();
}

}  // namespace hevec
