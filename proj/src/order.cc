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

// Phase 1: hint-reuse ordering of homomorphic operations, and the key-switch
// variant cost model.

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "absl/strings/str_cat.h"
#include "hevec/compiler.h"

namespace hevec {
namespace {

std::vector<int> ProgramOrder(const HomProgram& program) {
  std::vector<int> order(program.nodes.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  return order;
}

std::vector<int> ClusteredOrder(const HomProgram& program) {
  const size_t count = program.nodes.size();
  std::vector<std::vector<int>> users(count);
  std::vector<int> pending(count, 0);
  for (const HomOpNode& node : program.nodes) {
    std::set<int> distinct(node.operands.begin(), node.operands.end());
    pending[node.id] = static_cast<int>(distinct.size());
    for (int op : distinct) users[op].push_back(node.id);
  }
  // Ready operations keyed by (ready step, id).
  std::set<std::pair<int64_t, int>> ready;
  for (const HomOpNode& node : program.nodes) {
    if (pending[node.id] == 0) ready.insert({0, node.id});
  }
  std::vector<int> order;
  std::optional<HintId> current;
  int64_t step = 0;
  auto issue = [&](std::set<std::pair<int64_t, int>>::iterator it) {
    const int id = it->second;
    ready.erase(it);
    order.push_back(id);
    ++step;
    for (int u : users[id]) {
      if (--pending[u] == 0) ready.insert({step, u});
    }
  };
  auto find_first = [&](auto pred) {
    for (auto it = ready.begin(); it != ready.end(); ++it) {
      if (pred(program.nodes[it->second])) return it;
    }
    return ready.end();
  };
  while (!ready.empty()) {
    // Operations without a hint never disturb the hint working set.
    auto hintless = find_first([](const HomOpNode& n) { return !n.hint; });
    if (hintless != ready.end()) {
      issue(hintless);
      continue;
    }
    // Extend the current cluster, else open one for the hint of the
    // earliest-ready operation.
    auto next = ready.end();
    if (current) {
      next = find_first(
          [&](const HomOpNode& n) { return n.hint && *n.hint == *current; });
    }
    if (next == ready.end()) {
      next = ready.begin();
      current = program.nodes[next->second].hint;
    }
    issue(next);
  }
  return order;
}

}  // namespace

int CountHintTransitions(const HomProgram& program,
                         const std::vector<int>& order) {
  int transitions = 0;
  std::optional<HintId> last;
  for (int id : order) {
    const HomOpNode& node = program.nodes[id];
    if (!node.hint) continue;
    if (last && !(*last == *node.hint)) ++transitions;
    last = node.hint;
  }
  return transitions;
}

std::vector<int> OrderHomOps(const HomProgram& program) {
  std::vector<int> naive = ProgramOrder(program);
  std::vector<int> clustered = ClusteredOrder(program);
  if (CountHintTransitions(program, naive) <
      CountHintTransitions(program, clustered)) {
    return naive;
  }
  return clustered;
}

absl::StatusOr<HomProgram> ApplyOrder(const HomProgram& program,
                                      const std::vector<int>& order) {
  const size_t count = program.nodes.size();
  if (order.size() != count) {
    return absl::InvalidArgumentError("order is not a permutation");
  }
  std::vector<int> position(count, -1);
  for (size_t i = 0; i < count; ++i) {
    const int id = order[i];
    if (id < 0 || id >= static_cast<int>(count) || position[id] != -1) {
      return absl::InvalidArgumentError("order is not a permutation");
    }
    position[id] = static_cast<int>(i);
  }
  HomProgram out = program;
  for (size_t i = 0; i < count; ++i) {
    HomOpNode node = program.nodes[order[i]];
    node.id = static_cast<int>(i);
    for (int& op : node.operands) {
      if (position[op] >= static_cast<int>(i)) {
        return absl::InvalidArgumentError(
            absl::StrCat("order places node ", order[i], " before operand ",
                         op));
      }
      op = position[op];
    }
    out.nodes[i] = std::move(node);
  }
  for (int& id : out.inputs) id = position[id];
  for (int& id : out.outputs) id = position[id];
  if (auto s = out.Validate(); !s.ok()) return s;
  return out;
}

absl::StatusOr<KeySwitchCost> KeySwitchVariantCost(int variant_id,
                                                   size_t level, size_t n,
                                                   int word_bits) {
  if (variant_id != static_cast<int>(KeySwitchVariant::kDigitPerResidue)) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown key-switch variant ", variant_id));
  }
  const int64_t l = static_cast<int64_t>(level);
  KeySwitchCost c;
  c.transforms = l * l;
  c.multiplies = 2 * l * l;
  c.adds = 2 * l * l;
  c.word_ops = (c.multiplies + c.adds) * static_cast<int64_t>(n);
  c.hint_bytes = KeySwitchHintBytes(level, n, word_bits);
  return c;
}

KeySwitchVariant ChooseKeySwitchVariant(size_t level, double reuse_estimate,
                                        double fu_load_estimate) {
  // Estimated cost: compute scaled by FU pressure plus hint traffic amortized
  // over its expected reuse. With a single variant the minimum is trivial,
  // but the comparison is kept so further variants only need a cost entry.
  constexpr KeySwitchVariant kVariants[] = {KeySwitchVariant::kDigitPerResidue};
  const size_t n = 1;  // costs scale uniformly in N
  KeySwitchVariant best = kVariants[0];
  double best_cost = std::numeric_limits<double>::infinity();
  for (KeySwitchVariant v : kVariants) {
    absl::StatusOr<KeySwitchCost> c =
        KeySwitchVariantCost(static_cast<int>(v), level, n);
    if (!c.ok()) continue;
    const double compute =
        static_cast<double>(c->transforms + c->word_ops) *
        std::max(1.0, fu_load_estimate);
    const double traffic =
        static_cast<double>(c->hint_bytes) / std::max(1.0, reuse_estimate);
    if (compute + traffic < best_cost) {
      best_cost = compute + traffic;
      best = v;
    }
  }
  return best;
}

}  // namespace hevec
