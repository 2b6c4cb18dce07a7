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

// Phase 3: cycle-level list scheduling of a data-movement schedule onto the
// clustered machine.

#include <algorithm>
#include <map>
#include <tuple>
#include <utility>

#include "absl/strings/str_cat.h"
#include "hevec/compiler.h"

namespace hevec {
namespace {

// Per-cycle usage of one resource with a fixed capacity.
class Timeline {
 public:
  explicit Timeline(int64_t capacity = 1) : capacity_(capacity) {}

  bool Fits(int64_t start, int64_t len, int64_t amount) const {
    for (int64_t c = start; c < start + len; ++c) {
      if (At(c) + amount > capacity_) return false;
    }
    return true;
  }

  void Add(int64_t start, int64_t len, int64_t amount) {
    if (static_cast<int64_t>(use_.size()) < start + len) {
      use_.resize(start + len, 0);
    }
    for (int64_t c = start; c < start + len; ++c) use_[c] += amount;
  }

  int64_t At(int64_t c) const {
    return c < static_cast<int64_t>(use_.size()) ? use_[c] : 0;
  }
  int64_t capacity() const { return capacity_; }

 private:
  int64_t capacity_;
  std::vector<int64_t> use_;
};

struct Cluster {
  std::vector<Timeline> in_ports;
  Timeline out_port;
  std::vector<std::vector<Timeline>> fus;  // [kind][unit]
  Timeline rf_read, rf_write, rf_space;
};

struct Event {
  std::string component;
  int64_t time;
  int64_t order;
  std::string op;
};

struct Reservation {
  Timeline* timeline;
  int64_t start;
  int64_t len;
  int64_t amount;
};

// A tentative placement of one compute instruction on one cluster.
struct Placement {
  int cluster = -1;
  int64_t fu_start = 0;
  int unit = 0;
  std::vector<int64_t> reads;  // per distinct operand slot
  int64_t writeback = -1;
  std::vector<Reservation> reqs;
};

class CycleScheduler {
 public:
  CycleScheduler(const DataMovementSchedule& dms, const InstructionDfg& dfg,
                 const MachineConfig& config)
      : dms_(dms),
        dfg_(dfg),
        config_(config),
        chunk_(config.ChunkCycles(dfg.n)),
        hbm_(config.hbm_bytes_per_cycle),
        bank_read_(config.banks),
        bank_write_(config.banks) {
    for (int c = 0; c < config.clusters; ++c) {
      Cluster cl;
      cl.in_ports.assign(kInboundPorts, Timeline(1));
      for (int k = 0; k < kNumFuKinds; ++k) {
        cl.fus.emplace_back(config.FuCount(static_cast<FuKind>(k), dfg.n),
                            Timeline(1));
      }
      cl.rf_read = Timeline(config.rf_read_ports);
      cl.rf_write = Timeline(config.rf_write_ports);
      cl.rf_space = Timeline(config.rf_vectors_per_cluster);
      clusters_.push_back(std::move(cl));
    }
  }

  absl::StatusOr<CycleSchedule> Run() {
    for (int k = 0; k < kNumFuKinds; ++k) {
      absl::StatusOr<FuTiming> t =
          GetFuTiming(static_cast<FuKind>(k), dfg_.n, config_);
      if (!t.ok()) return t.status();
      timing_.push_back(*t);
    }
    for (size_t step = 0; step < dms_.entries.size(); ++step) {
      const DmsEntry& e = dms_.entries[step];
      absl::Status s;
      switch (e.kind) {
        case DmsKind::kLoad:
          s = PlaceLoad(step, e);
          break;
        case DmsKind::kStore:
          s = PlaceStore(step, e);
          break;
        case DmsKind::kCompute:
          s = PlaceCompute(step, e);
          break;
      }
      if (!s.ok()) {
        return absl::Status(s.code(),
                            absl::StrCat("step ", step, ": ", s.message()));
      }
    }
    return BuildStreams();
  }

 private:
  int64_t SlotAvail(int slot) const {
    auto it = slot_avail_.find(slot);
    return it == slot_avail_.end() ? 0 : it->second;
  }
  int64_t SlotFree(int slot) const {
    auto it = slot_free_.find(slot);
    return it == slot_free_.end() ? 0 : it->second;
  }
  void Touch(int slot, int64_t end) {
    slot_free_[slot] = std::max(SlotFree(slot), end);
    total_ = std::max(total_, end);
  }

  void AddEvent(std::string component, int64_t time, int64_t order,
                std::string op) {
    events_.push_back({std::move(component), time, order, std::move(op)});
  }

  absl::Status PlaceLoad(size_t step, const DmsEntry& e) {
    const int64_t bytes = dms_.Object(dfg_, e.object).bytes;
    const int64_t d = config_.OffchipCycles(bytes);
    const int64_t rate = config_.OffchipRate(bytes);
    const int64_t ml = config_.mem_latency;
    Timeline& bank = bank_write_[config_.Bank(e.slot)];
    int64_t l = std::max<int64_t>(
        {0, ObjectReady(e.object), SlotFree(e.slot) - ml});
    while (!hbm_.Fits(l, d, rate) || !bank.Fits(l + ml, d, 1)) ++l;
    hbm_.Add(l, d, rate);
    bank.Add(l + ml, d, 1);
    slot_avail_[e.slot] = l + ml + d;
    Touch(e.slot, l + ml + d);
    AddEvent("hbm", l, static_cast<int64_t>(step), absl::StrCat("L", step));
    return absl::OkStatus();
  }

  int64_t ObjectReady(int object) const {
    auto it = object_ready_.find(object);
    return it == object_ready_.end() ? 0 : it->second;
  }

  absl::Status PlaceStore(size_t step, const DmsEntry& e) {
    const int64_t bytes = dms_.Object(dfg_, e.object).bytes;
    const int64_t d = config_.OffchipCycles(bytes);
    const int64_t rate = config_.OffchipRate(bytes);
    Timeline& bank = bank_read_[config_.Bank(e.slot)];
    int64_t s = SlotAvail(e.slot);
    while (!hbm_.Fits(s, d, rate) || !bank.Fits(s, d, 1)) ++s;
    hbm_.Add(s, d, rate);
    bank.Add(s, d, 1);
    Touch(e.slot, s + d);
    object_ready_[e.object] = s + d + config_.mem_latency;
    AddEvent("hbm", s, static_cast<int64_t>(step), absl::StrCat("S", step));
    return absl::OkStatus();
  }

  // Checks a set of tentative reservations against committed usage and
  // against each other.
  static bool FitsAll(const std::vector<Reservation>& reqs) {
    for (size_t i = 0; i < reqs.size(); ++i) {
      const Reservation& r = reqs[i];
      for (int64_t c = r.start; c < r.start + r.len; ++c) {
        int64_t use = r.timeline->At(c) + r.amount;
        for (size_t j = 0; j < i; ++j) {
          const Reservation& o = reqs[j];
          if (o.timeline == r.timeline && c >= o.start &&
              c < o.start + o.len) {
            use += o.amount;
          }
        }
        if (use > r.timeline->capacity()) return false;
      }
    }
    return true;
  }

  // Tries to place the instruction with its FU starting at f on cluster c.
  bool TryPlace(const Instruction& in, const std::vector<int>& slots,
                int out_slot, int c, int64_t f, Placement* p) {
    Cluster& cl = clusters_[c];
    const int kind = static_cast<int>(FuKindFor(in.op));
    const FuTiming& t = timing_[kind];
    const int64_t T = chunk_;
    // Operand transfers stream into the FU; operands sharing a bank go
    // back to back, the earlier one buffered in the register file.
    p->reads.assign(slots.size(), f);
    if (slots.size() == 2 &&
        config_.Bank(slots[0]) == config_.Bank(slots[1])) {
      p->reads[0] = f - T;
    }
    std::vector<Reservation>& reqs = p->reqs;
    reqs.clear();
    for (size_t k = 0; k < slots.size(); ++k) {
      const int64_t x = p->reads[k];
      if (x < 0 || x < SlotAvail(slots[k])) return false;
      reqs.push_back({&bank_read_[config_.Bank(slots[k])], x, T, 1});
      reqs.push_back({&cl.in_ports[k], x, T, 1});
      reqs.push_back({&cl.rf_write, x, T, 1});
      reqs.push_back({&cl.rf_space, x, f + T - x, 1});
    }
    reqs.push_back({&cl.rf_read, f, T, static_cast<int64_t>(slots.size())});
    int unit = -1;
    for (size_t u = 0; u < cl.fus[kind].size(); ++u) {
      if (cl.fus[kind][u].Fits(f, t.issue_cycles, 1)) {
        unit = static_cast<int>(u);
        break;
      }
    }
    if (unit < 0) return false;
    reqs.push_back({&cl.fus[kind][unit], f, t.issue_cycles, 1});
    if (!FitsAll(reqs)) return false;
    p->cluster = c;
    p->fu_start = f;
    p->unit = unit;
    p->writeback = -1;
    if (out_slot < 0) return true;
    const int64_t produced = f + t.latency;
    reqs.push_back({&cl.rf_write, produced, T, 1});
    if (!FitsAll(reqs)) return false;
    const size_t base = reqs.size();
    Timeline& bank = bank_write_[config_.Bank(out_slot)];
    // The result waits in the register file until it can be written back.
    // The result may reuse an operand's slot once that operand is read.
    int64_t w_min = std::max(produced, SlotFree(out_slot));
    for (size_t k = 0; k < slots.size(); ++k) {
      if (slots[k] == out_slot) w_min = std::max(w_min, p->reads[k] + T);
    }
    for (int64_t w = w_min;; ++w) {
      reqs.resize(base);
      reqs.push_back({&cl.rf_space, produced, w + T - produced, 1});
      // A longer wait only widens this window, so failure here is final.
      if (!FitsAll(reqs)) return false;
      reqs.push_back({&cl.out_port, w, T, 1});
      reqs.push_back({&bank, w, T, 1});
      reqs.push_back({&cl.rf_read, w, T, 1});
      if (FitsAll(reqs)) {
        p->writeback = w;
        return true;
      }
    }
  }

  void Commit(const Instruction& in, const std::vector<int>& slots,
              int out_slot, const Placement& p, size_t step) {
    for (const Reservation& r : p.reqs) r.timeline->Add(r.start, r.len, r.amount);
    const int kind = static_cast<int>(FuKindFor(in.op));
    const FuTiming& t = timing_[kind];
    const int64_t T = chunk_;
    const int64_t f = p.fu_start;
    const std::string cname = absl::StrCat("c", p.cluster);
    const int64_t order = static_cast<int64_t>(step);
    for (size_t k = 0; k < slots.size(); ++k) {
      Touch(slots[k], p.reads[k] + T);
      AddEvent(absl::StrCat(cname, ".in", k), p.reads[k], order,
               absl::StrCat("I", in.id, ".rd", k));
    }
    AddEvent(absl::StrCat(cname, ".", FuKindName(static_cast<FuKind>(kind)),
                          p.unit),
             f, order, absl::StrCat("I", in.id));
    total_ = std::max(total_, f + std::max(t.issue_cycles, t.latency + T));
    if (out_slot < 0) return;
    const int64_t w = p.writeback;
    slot_avail_[out_slot] = w + T;
    Touch(out_slot, w + T);
    AddEvent(absl::StrCat(cname, ".out"), w, order,
             absl::StrCat("I", in.id, ".wb"));
  }

  absl::Status PlaceCompute(size_t step, const DmsEntry& e) {
    const Instruction& in = dfg_.instructions[e.instruction];
    std::vector<int> slots;
    for (int s : e.operand_slots) {
      if (std::find(slots.begin(), slots.end(), s) == slots.end()) {
        slots.push_back(s);
      }
    }
    if (slots.size() > static_cast<size_t>(kInboundPorts)) {
      return absl::InvalidArgumentError("too many operands");
    }
    int64_t lower = 0;
    for (int s : slots) lower = std::max(lower, SlotAvail(s));
    Placement best;
    const int clusters = config_.clusters;
    for (int i = 0; i < clusters; ++i) {
      const int c = (next_cluster_ + i) % clusters;
      Placement p;
      for (int64_t f = lower;
           best.cluster < 0 || f < best.fu_start; ++f) {
        if (TryPlace(in, slots, e.slot, c, f, &p)) {
          best = p;
          break;
        }
      }
    }
    Commit(in, slots, e.slot, best, step);
    next_cluster_ = (best.cluster + 1) % clusters;
    return absl::OkStatus();
  }

  CycleSchedule BuildStreams() {
    std::stable_sort(events_.begin(), events_.end(),
                     [](const Event& a, const Event& b) {
                       return std::tie(a.component, a.time, a.order) <
                              std::tie(b.component, b.time, b.order);
                     });
    CycleSchedule out;
    out.total_cycles = total_;
    for (size_t i = 0; i < events_.size();) {
      ComponentStream stream;
      stream.component = events_[i].component;
      size_t j = i;
      while (j < events_.size() && events_[j].component == stream.component) {
        ++j;
      }
      stream.entries.push_back({"nop", events_[i].time});
      for (size_t k = i; k < j; ++k) {
        const int64_t next = k + 1 < j ? events_[k + 1].time : events_[k].time;
        stream.entries.push_back({events_[k].op, next - events_[k].time});
      }
      out.streams.push_back(std::move(stream));
      i = j;
    }
    return out;
  }

  const DataMovementSchedule& dms_;
  const InstructionDfg& dfg_;
  const MachineConfig& config_;
  const int64_t chunk_;
  std::vector<FuTiming> timing_;
  Timeline hbm_;
  std::vector<Timeline> bank_read_, bank_write_;
  std::vector<Cluster> clusters_;
  std::map<int, int64_t> slot_avail_, slot_free_, object_ready_;
  std::vector<Event> events_;
  int next_cluster_ = 0;
  int64_t total_ = 0;
};

}  // namespace

FuKind FuKindFor(Opcode op) {
  switch (op) {
    case Opcode::kNtt:
    case Opcode::kIntt:
      return FuKind::kNtt;
    case Opcode::kAutomorphism:
      return FuKind::kAutomorphism;
    case Opcode::kVecMul:
    case Opcode::kVecMulScalar:
      return FuKind::kMultiplier;
    default:
      return FuKind::kAdder;
  }
}

absl::StatusOr<CycleSchedule> ScheduleCycles(const DataMovementSchedule& dms,
                                             const InstructionDfg& dfg,
                                             const MachineConfig& config) {
  if (auto s = config.Validate(); !s.ok()) return s;
  if (dms.capacity > config.ScratchpadVectors(dfg.n)) {
    return absl::InvalidArgumentError(
        "data-movement schedule uses more slots than the scratchpad has");
  }
  CycleScheduler scheduler(dms, dfg, config);
  return scheduler.Run();
}

}  // namespace hevec
