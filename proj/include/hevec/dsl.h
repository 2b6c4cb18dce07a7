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

#ifndef HEVEC_DSL_H_
#define HEVEC_DSL_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "hevec/bgv.h"

namespace hevec {

enum class OpKind { kInput, kAdd, kMul, kRotate, kMulPlain, kAddPlain,
                    kModSwitch };

absl::string_view OpKindName(OpKind kind);
absl::StatusOr<OpKind> ParseOpKind(absl::string_view name);

// Identity of a key-switch hint: its target at a given level.
struct HintId {
  HintTarget target;
  size_t level = 0;

  std::string ToString() const;  // "relin@3", "aut5@3"
  static absl::StatusOr<HintId> Parse(absl::string_view text);

  bool operator==(const HintId& o) const {
    return target == o.target && level == o.level;
  }
  bool operator<(const HintId& o) const;
};

struct HomOpNode {
  int id = 0;
  OpKind kind = OpKind::kInput;
  std::vector<int> operands;
  size_t level = 0;        // level the operation executes at
  int64_t amount = 0;      // rotation amount
  uint64_t galois = 1;     // automorphism index for rotations
  int constant = -1;       // plaintext constant for MulPlain / AddPlain
  std::optional<HintId> hint;
};

// A straight-line homomorphic program. Node i has id i and its operands
// have smaller ids.
struct HomProgram {
  size_t n = 0;
  Word t = 257;
  std::vector<HomOpNode> nodes;
  std::vector<int> inputs;
  std::vector<int> outputs;
  std::vector<Plaintext> constants;

  absl::Status Validate() const;

  // Distinct hints in first-use order.
  std::vector<HintId> DistinctHints() const;
};

// Galois element for a rotation by r: 5^r mod 2N.
uint64_t RotationIndex(int64_t r, size_t n);

// Builds a program with automatic level alignment. Mul switches both
// operands down one level before multiplying; Add aligns operands by
// switching the higher one down. Errors are sticky and reported by Build().
class ProgramBuilder {
 public:
  explicit ProgramBuilder(size_t n, Word t = 257);

  int Input(size_t level);
  int Add(int x, int y);
  int Mul(int x, int y);
  int Rotate(int x, int64_t amount);
  int MulPlain(int x, const Plaintext& p);
  int AddPlain(int x, const Plaintext& p);
  void Output(int x);

  size_t LevelOf(int x) const;

  absl::StatusOr<HomProgram> Build() const;

 private:
  int Append(HomOpNode node);
  int SwitchTo(int x, size_t level);
  bool Check(int x);
  int Fail(absl::Status status);

  HomProgram program_;
  std::map<int, int> switched_;  // node -> its mod-switched successor
  absl::Status status_;
};

// The Listing-style matrix-vector product: `rows` products of a row input
// with a shared vector input, each followed by log2(n) rotate-and-add steps.
absl::StatusOr<HomProgram> BuildMatVec(size_t rows, size_t n, size_t level,
                                       Word t = 257);

// Evaluates over R_t: Add is coefficient-wise, Mul is the negacyclic
// product, Rotate is sigma_k, ModSwitch is the identity.
absl::StatusOr<std::vector<Plaintext>> EvalPlain(
    const HomProgram& program, const std::vector<Plaintext>& inputs);

// Line-oriented text format, one node per line.
std::string FormatProgram(const HomProgram& program);
absl::StatusOr<HomProgram> ParseProgram(absl::string_view text);

}  // namespace hevec

#endif  // HEVEC_DSL_H_
