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

#include "hevec/dfg.h"

#include <array>
#include <utility>

#include "absl/strings/str_cat.h"

namespace hevec {
namespace {

constexpr std::array<std::pair<Opcode, absl::string_view>, 8> kOpcodeNames = {{
    {Opcode::kVecAdd, "vecadd"},
    {Opcode::kVecMul, "vecmul"},
    {Opcode::kVecMulScalar, "vecmulscalar"},
    {Opcode::kNtt, "ntt"},
    {Opcode::kIntt, "intt"},
    {Opcode::kAutomorphism, "aut"},
    {Opcode::kLoad, "load"},
    {Opcode::kStore, "store"},
}};

constexpr std::array<std::pair<ObjectClass, absl::string_view>, 4>
    kClassNames = {{
        {ObjectClass::kKsh, "ksh"},
        {ObjectClass::kInput, "input"},
        {ObjectClass::kOutput, "output"},
        {ObjectClass::kIntermediate, "intermediate"},
    }};

size_t Arity(Opcode op) {
  switch (op) {
    case Opcode::kVecMul:
      return 2;
    case Opcode::kLoad:
      return 0;
    default:
      return 1;
  }
}

}  // namespace

absl::string_view OpcodeName(Opcode op) {
  for (const auto& [o, name] : kOpcodeNames) {
    if (o == op) return name;
  }
  return "?";
}

std::optional<Opcode> ParseOpcode(absl::string_view name) {
  for (const auto& [o, n] : kOpcodeNames) {
    if (n == name) return o;
  }
  return std::nullopt;
}

bool IsCompute(Opcode op) {
  return op != Opcode::kLoad && op != Opcode::kStore;
}

absl::string_view ObjectClassName(ObjectClass c) {
  for (const auto& [k, name] : kClassNames) {
    if (k == c) return name;
  }
  return "?";
}

std::optional<ObjectClass> ParseObjectClass(absl::string_view name) {
  for (const auto& [k, n] : kClassNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

bool DataObject::operator==(const DataObject& o) const {
  return id == o.id && cls == o.cls && bytes == o.bytes && hint == o.hint &&
         matrix == o.matrix && row == o.row && col == o.col &&
         node == o.node && poly == o.poly && residue == o.residue &&
         constant == o.constant && value == o.value;
}

bool Instruction::operator==(const Instruction& o) const {
  return id == o.id && op == o.op && operands == o.operands &&
         modulus == o.modulus && scalar == o.scalar && galois == o.galois &&
         domain == o.domain && object == o.object && homop == o.homop &&
         keyswitch == o.keyswitch && priority == o.priority;
}

absl::Status InstructionDfg::Validate() const {
  const int count = static_cast<int>(instructions.size());
  for (int i = 0; i < count; ++i) {
    const Instruction& in = instructions[i];
    auto fail = [&](auto... parts) {
      return absl::InvalidArgumentError(
          absl::StrCat("instruction ", i, ": ", parts...));
    };
    if (in.id != i) return fail("id ", in.id, " out of sequence");
    const size_t arity = Arity(in.op);
    const bool arity_ok = in.op == Opcode::kVecAdd
                              ? in.operands.size() == 1 ||
                                    in.operands.size() == 2
                              : in.operands.size() == arity;
    if (!arity_ok) return fail("wrong operand count");
    for (int v : in.operands) {
      if (v < 0 || v >= i) return fail("operand ", v, " not defined before use");
      if (instructions[v].op == Opcode::kStore) {
        return fail("operand ", v, " is a store");
      }
      if (instructions[v].priority <= in.priority) {
        return fail("priority not topological on edge from ", v);
      }
    }
    if (in.op == Opcode::kLoad || in.op == Opcode::kStore) {
      if (in.object < 0 || in.object >= static_cast<int>(objects.size())) {
        return fail("bad object ", in.object);
      }
    }
    if (IsCompute(in.op)) {
      if (in.modulus < kPlainModulus ||
          in.modulus >= static_cast<int>(moduli.size())) {
        return fail("bad modulus index ", in.modulus);
      }
      if ((in.op == Opcode::kNtt || in.op == Opcode::kIntt) &&
          in.modulus == kPlainModulus) {
        return fail("transform needs an NTT-friendly modulus");
      }
    }
  }
  for (size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].id != static_cast<int>(i)) {
      return absl::InvalidArgumentError(
          absl::StrCat("object ", i, " has id ", objects[i].id));
    }
  }
  return absl::OkStatus();
}

std::vector<std::vector<int>> InstructionDfg::Users() const {
  std::vector<std::vector<int>> users(instructions.size());
  for (const Instruction& in : instructions) {
    for (int v : in.operands) {
      if (users[v].empty() || users[v].back() != in.id) {
        users[v].push_back(in.id);
      }
    }
  }
  return users;
}

int64_t InstructionDfg::ObjectBytes(ObjectClass c) const {
  int64_t total = 0;
  for (const DataObject& o : objects) {
    if (o.cls == c) total += o.bytes;
  }
  return total;
}

}  // namespace hevec
