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

#ifndef HEVEC_DFG_H_
#define HEVEC_DFG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/string_view.h"
#include "hevec/dsl.h"
#include "hevec/residue_vector.h"
#include "hevec/rns.h"

namespace hevec {

enum class Opcode {
  kVecAdd,
  kVecMul,
  kVecMulScalar,
  kNtt,
  kIntt,
  kAutomorphism,
  kLoad,
  kStore,
};

absl::string_view OpcodeName(Opcode op);
std::optional<Opcode> ParseOpcode(absl::string_view name);

bool IsCompute(Opcode op);

enum class ObjectClass { kKsh, kInput, kOutput, kIntermediate };

absl::string_view ObjectClassName(ObjectClass c);
std::optional<ObjectClass> ParseObjectClass(absl::string_view name);

// One residue vector held off-chip. The metadata fields that apply depend on
// the class: hint rows carry (hint, matrix, row, col); ciphertext inputs and
// outputs carry (node, poly, residue); plaintext constants carry (constant,
// residue); spilled intermediates carry the spilled value.
struct DataObject {
  int id = 0;
  ObjectClass cls = ObjectClass::kInput;
  int64_t bytes = 0;
  std::optional<HintId> hint;
  int matrix = -1;  // 0 for ksh0, 1 for ksh1
  int row = -1;
  int col = -1;
  int node = -1;
  int poly = -1;  // 0 for a, 1 for b
  int residue = -1;
  int constant = -1;
  int value = -1;

  bool operator==(const DataObject& o) const;
};

inline constexpr int kPlainModulus = -1;

// One residue-vector instruction. Every instruction except Store defines a
// value named by its id. A VecAdd with a single operand adds it to zero.
struct Instruction {
  int id = 0;
  Opcode op = Opcode::kVecAdd;
  std::vector<int> operands;
  int modulus = 0;  // basis index, or kPlainModulus for t
  Word scalar = 0;
  uint64_t galois = 1;
  Domain domain = Domain::kNtt;
  int object = -1;  // Load and Store
  int homop = -1;   // originating node of the program
  bool keyswitch = false;
  int64_t priority = 0;  // higher runs earlier

  bool operator==(const Instruction& o) const;
};

struct InstructionDfg {
  size_t n = 0;
  Word t = 257;
  std::vector<PrimeModulus> moduli;
  std::vector<Instruction> instructions;  // topologically ordered by id
  std::vector<DataObject> objects;

  Word ModulusValue(int modulus) const {
    return modulus == kPlainModulus ? t : moduli[modulus].q;
  }

  // Acyclic, operands defined before use, priorities strictly decreasing
  // along every edge, every Load and Store names an object.
  absl::Status Validate() const;

  // users[v] lists the instructions that read value v.
  std::vector<std::vector<int>> Users() const;

  // Sum of bytes over objects of a class.
  int64_t ObjectBytes(ObjectClass c) const;
};

}  // namespace hevec

#endif  // HEVEC_DFG_H_
