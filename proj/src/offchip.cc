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

// Phase 2: greedy data-movement scheduling over a flat scratchpad of
// residue-vector slots.

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "hevec/compiler.h"

namespace hevec {
namespace {

constexpr int64_t kNoUse = std::numeric_limits<int64_t>::min();

class OffchipScheduler {
 public:
  OffchipScheduler(const InstructionDfg& dfg, int64_t capacity,
                   int64_t vector_bytes)
      : dfg_(dfg),
        capacity_(capacity),
        users_(dfg.Users()),
        slot_of_(dfg.instructions.size(), -1),
        backing_(dfg.instructions.size(), -1),
        pending_uses_(dfg.instructions.size()),
        missing_(dfg.instructions.size(), 0),
        issued_(dfg.instructions.size(), false),
        occupant_(capacity, -1),
        window_(std::max<int64_t>(4, capacity / 8)) {
    dms_.capacity = capacity;
    dms_.vector_bytes = vector_bytes;
  }

  absl::StatusOr<DataMovementSchedule> Run() {
    int remaining = 0;
    for (const Instruction& in : dfg_.instructions) {
      for (int u : users_[in.id]) pending_uses_[in.id].insert(Priority(u));
      if (in.op == Opcode::kLoad) {
        backing_[in.id] = in.object;
        issued_[in.id] = true;  // available off-chip from the start
        UpdateLoadable(in.id);
        continue;
      }
      ++remaining;
      unissued_.insert(in.priority);
      if (in.op == Opcode::kStore) continue;
      std::set<int> distinct(in.operands.begin(), in.operands.end());
      missing_[in.id] = static_cast<int>(distinct.size());
    }
    for (int s = 0; s < static_cast<int>(capacity_); ++s) free_.push_back(s);
    issued_count_ = 0;
    while (issued_count_ < remaining) {
      bool progress = false;
      if (IssueLoad()) progress = true;
      if (IssueCompute()) progress = true;
      if (!progress) {
        return absl::ResourceExhaustedError(absl::StrCat(
            "no progress with ", capacity_, " scratchpad vectors after ",
            issued_count_, " of ", remaining, " instructions"));
      }
    }
    return std::move(dms_);
  }

 private:
  int64_t Priority(int id) const { return dfg_.instructions[id].priority; }

  int64_t NextUse(int v) const {
    return pending_uses_[v].empty() ? kNoUse : *pending_uses_[v].rbegin();
  }

  bool Dead(int v) const { return pending_uses_[v].empty(); }

  int64_t Resident() const {
    return capacity_ - static_cast<int64_t>(free_.size());
  }

  void Record(DmsEntry e) {
    e.resident = Resident();
    dms_.entries.push_back(std::move(e));
  }

  // Keeps the loadable set in sync: values off-chip with pending users.
  void UpdateLoadable(int v) {
    loadable_.erase({loadable_key_[v], -v});
    loadable_key_.erase(v);
    if (slot_of_[v] == -1 && backing_[v] != -1 && !Dead(v)) {
      const int64_t key = NextUse(v);
      loadable_.insert({key, -v});
      loadable_key_[v] = key;
    }
  }

  void MakeResident(int v, int slot) {
    slot_of_[v] = slot;
    occupant_[slot] = v;
    UpdateLoadable(v);
    for (int u : users_[v]) {
      if (issued_[u] || dfg_.instructions[u].op == Opcode::kStore) continue;
      if (--missing_[u] == 0) ready_.insert({Priority(u), -u});
    }
  }

  void Release(int v) {
    const int slot = slot_of_[v];
    occupant_[slot] = -1;
    slot_of_[v] = -1;
    free_.push_back(slot);
    UpdateLoadable(v);
    for (int u : users_[v]) {
      if (issued_[u] || dfg_.instructions[u].op == Opcode::kStore) continue;
      if (missing_[u]++ == 0) ready_.erase({Priority(u), -u});
    }
  }

  // Evicts the occupant of `slot`, spilling it first if it is live and has
  // no off-chip copy.
  void Evict(int slot) {
    const int v = occupant_[slot];
    if (!Dead(v) && backing_[v] == -1) {
      DataObject obj;
      obj.id = static_cast<int>(dfg_.objects.size() + dms_.spill_objects.size());
      obj.cls = ObjectClass::kIntermediate;
      obj.bytes = dms_.vector_bytes;
      obj.value = v;
      dms_.spill_objects.push_back(obj);
      backing_[v] = obj.id;
      DmsEntry st;
      st.kind = DmsKind::kStore;
      st.value = v;
      st.object = obj.id;
      st.slot = slot;
      st.spill = true;
      Record(st);
    }
    Release(v);
  }

  // A free slot, or one reclaimed from a value needed strictly later than
  // `below`; -1 if none.
  int ClaimSlot(int64_t below) {
    if (free_.empty()) {
      std::vector<VictimCandidate> candidates;
      for (int s = 0; s < static_cast<int>(capacity_); ++s) {
        const int v = occupant_[s];
        if (v == -1) continue;
        candidates.push_back({s, NextUse(v), Dead(v)});
      }
      const int pick = SelectVictim(candidates, below);
      if (pick < 0) return -1;
      Evict(candidates[pick].slot);
    }
    // Reusing the longest-free slot keeps false write-after-read
    // dependences between unrelated values far apart.
    const int slot = free_.front();
    free_.pop_front();
    return slot;
  }

  // Output stores are issued as soon as their value is on chip.
  void IssueStores(int v) {
    for (int u : users_[v]) {
      const Instruction& st = dfg_.instructions[u];
      if (st.op != Opcode::kStore || issued_[u]) continue;
      issued_[u] = true;
      ++issued_count_;
      unissued_.erase(Priority(u));
      pending_uses_[v].erase(pending_uses_[v].find(Priority(u)));
      DmsEntry e;
      e.kind = DmsKind::kStore;
      e.instruction = u;
      e.value = v;
      e.object = st.object;
      e.slot = slot_of_[v];
      Record(e);
      if (backing_[v] == -1) backing_[v] = st.object;
    }
    if (Dead(v)) Release(v);
  }

  bool IssueLoad() {
    if (loadable_.empty() || unissued_.empty()) return false;
    const auto [p, neg] = *loadable_.rbegin();
    const int v = -neg;
    // Prefetch only for the next `window_` instructions; values fetched
    // further ahead would be displaced by results before their use.
    if (p <= *unissued_.rbegin() - window_) return false;
    const int slot = ClaimSlot(p);
    if (slot < 0) return false;
    DmsEntry e;
    e.kind = DmsKind::kLoad;
    e.instruction = dfg_.instructions[v].op == Opcode::kLoad ? v : -1;
    e.value = v;
    e.object = backing_[v];
    e.slot = slot;
    MakeResident(v, slot);
    Record(e);
    IssueStores(v);
    return true;
  }

  bool IssueCompute() {
    if (ready_.empty()) return false;
    const int id = -ready_.rbegin()->second;
    ready_.erase(std::prev(ready_.end()));
    const Instruction& in = dfg_.instructions[id];
    issued_[id] = true;
    ++issued_count_;
    unissued_.erase(Priority(id));
    DmsEntry e;
    e.kind = DmsKind::kCompute;
    e.instruction = id;
    e.value = id;
    for (int v : in.operands) e.operand_slots.push_back(slot_of_[v]);
    std::set<int> distinct(in.operands.begin(), in.operands.end());
    for (int v : distinct) {
      pending_uses_[v].erase(pending_uses_[v].find(Priority(id)));
    }
    for (int v : distinct) {
      if (Dead(v)) {
        Release(v);
      } else {
        UpdateLoadable(v);
      }
    }
    if (users_[id].empty()) {
      Record(e);  // result unused: not allocated
      return true;
    }
    const int slot = ClaimSlot(std::numeric_limits<int64_t>::max());
    e.slot = slot;
    MakeResident(id, slot);
    // The spill store of a displaced value, if any, precedes this entry.
    Record(e);
    IssueStores(id);
    return true;
  }

  const InstructionDfg& dfg_;
  const int64_t capacity_;
  std::vector<std::vector<int>> users_;
  std::vector<int> slot_of_;
  std::vector<int> backing_;
  std::vector<std::multiset<int64_t>> pending_uses_;
  std::vector<int> missing_;
  std::vector<bool> issued_;
  std::vector<int> occupant_;
  std::deque<int> free_;
  std::set<std::pair<int64_t, int>> ready_;     // (priority, -id)
  std::set<std::pair<int64_t, int>> loadable_;  // (next use, -value)
  std::map<int, int64_t> loadable_key_;
  std::set<int64_t> unissued_;  // priorities of unissued computes and stores
  int64_t window_;
  int issued_count_ = 0;
  DataMovementSchedule dms_;
};

}  // namespace

int SelectVictim(const std::vector<VictimCandidate>& candidates,
                 int64_t below) {
  int best = -1;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const VictimCandidate& c = candidates[i];
    if (best == -1) {
      best = static_cast<int>(i);
      continue;
    }
    const VictimCandidate& b = candidates[best];
    if (c.dead != b.dead) {
      if (c.dead) best = static_cast<int>(i);
      continue;
    }
    if (!c.dead && c.next_use != b.next_use) {
      if (c.next_use < b.next_use) best = static_cast<int>(i);
      continue;
    }
    if (c.slot < b.slot) best = static_cast<int>(i);
  }
  if (best == -1) return -1;
  const VictimCandidate& b = candidates[best];
  if (!b.dead && b.next_use >= below) return -1;
  return best;
}

int64_t DataMovementSchedule::PeakResident() const {
  int64_t peak = 0;
  for (const DmsEntry& e : entries) peak = std::max(peak, e.resident);
  return peak;
}

const DataObject& DataMovementSchedule::Object(const InstructionDfg& dfg,
                                               int id) const {
  const size_t base = dfg.objects.size();
  return static_cast<size_t>(id) < base ? dfg.objects[id]
                                        : spill_objects[id - base];
}

bool DmsEntry::operator==(const DmsEntry& o) const {
  return kind == o.kind && instruction == o.instruction && value == o.value &&
         object == o.object && slot == o.slot &&
         operand_slots == o.operand_slots && spill == o.spill &&
         resident == o.resident;
}

bool DataMovementSchedule::operator==(const DataMovementSchedule& o) const {
  return capacity == o.capacity && vector_bytes == o.vector_bytes &&
         spill_objects == o.spill_objects && entries == o.entries;
}

absl::StatusOr<DataMovementSchedule> ScheduleOffchipWithCapacity(
    const InstructionDfg& dfg, int64_t capacity, int64_t vector_bytes) {
  if (auto s = dfg.Validate(); !s.ok()) return s;
  for (const DataObject& o : dfg.objects) {
    if (o.bytes > capacity * vector_bytes) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "object ", o.id, " of ", o.bytes, " bytes exceeds the scratchpad"));
    }
  }
  if (capacity < 3 && !dfg.instructions.empty()) {
    return absl::ResourceExhaustedError(
        "scratchpad must hold two operands and a result");
  }
  OffchipScheduler scheduler(dfg, capacity, vector_bytes);
  return scheduler.Run();
}

absl::StatusOr<DataMovementSchedule> ScheduleOffchip(
    const InstructionDfg& dfg, const MachineConfig& config) {
  if (auto s = config.Validate(); !s.ok()) return s;
  return ScheduleOffchipWithCapacity(dfg, config.ScratchpadVectors(dfg.n),
                                     config.VectorBytes(dfg.n));
}

}  // namespace hevec
