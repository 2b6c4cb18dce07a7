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

#include "hevec/simulator.h"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "hevec/vector_ops.h"

namespace hevec {
namespace {

constexpr size_t kMaxViolations = 256;

// Usage intervals of one resource, checked after all are collected.
struct Usage {
  int64_t start;
  int64_t len;
  int64_t amount;
  std::string label;
};

struct Resource {
  std::string component;
  int64_t capacity = 1;
  ViolationKind kind = ViolationKind::kOversubscribed;
  std::vector<Usage> uses;
};

struct ComputeEvents {
  int cluster = -1;
  int unit = -1;
  FuKind kind = FuKind::kAdder;
  std::string fu_component;
  std::optional<int64_t> start;
  std::map<int, std::pair<int64_t, int>> reads;  // operand -> (time, port)
  std::optional<int64_t> writeback;
  int wb_cluster = -1;
};

std::vector<int> DistinctSlots(const DmsEntry& e) {
  std::vector<int> slots;
  for (int s : e.operand_slots) {
    if (std::find(slots.begin(), slots.end(), s) == slots.end()) {
      slots.push_back(s);
    }
  }
  return slots;
}

std::optional<FuKind> ParseFuKind(absl::string_view name) {
  for (int k = 0; k < kNumFuKinds; ++k) {
    if (name == FuKindName(static_cast<FuKind>(k))) {
      return static_cast<FuKind>(k);
    }
  }
  return std::nullopt;
}

// Splits "<prefix><number>" and returns the number.
std::optional<int64_t> NumberAfter(absl::string_view text,
                                   absl::string_view prefix) {
  if (!absl::ConsumePrefix(&text, prefix)) return std::nullopt;
  int64_t v;
  if (text.empty() || !absl::SimpleAtoi(text, &v) || v < 0) {
    return std::nullopt;
  }
  return v;
}

class Replayer {
 public:
  Replayer(const CycleSchedule& schedule, const DataMovementSchedule& dms,
           const InstructionDfg& dfg, const MachineConfig& config)
      : schedule_(schedule), dms_(dms), dfg_(dfg), config_(config) {}

  absl::StatusOr<SimResult> Run(const FunctionalInputs* functional) {
    if (auto s = config_.Validate(); !s.ok()) return s;
    chunk_ = config_.ChunkCycles(dfg_.n);
    for (int k = 0; k < kNumFuKinds; ++k) {
      absl::StatusOr<FuTiming> t =
          GetFuTiming(static_cast<FuKind>(k), dfg_.n, config_);
      if (!t.ok()) return t.status();
      timing_[k] = *t;
    }
    ReadStreams();
    CheckCompleteness();
    if (result_.violations.empty()) {
      WalkSchedule();
      CheckResources();
      ComputeStats();
      if (functional != nullptr) {
        absl::Status s = RunFunctional(*functional);
        if (!s.ok()) return s;
      }
    }
    return std::move(result_);
  }

 private:
  void Report(ViolationKind kind, int64_t cycle, std::string component,
              std::string instruction, std::string message) {
    if (result_.violations.size() >= kMaxViolations) return;
    result_.violations.push_back({kind, cycle, std::move(component),
                                  std::move(instruction), std::move(message)});
  }

  // --- Stream decoding ----------------------------------------------------

  void ReadStreams() {
    std::set<std::string> seen;
    for (const ComponentStream& stream : schedule_.streams) {
      const std::string& comp = stream.component;
      if (!seen.insert(comp).second) {
        Report(ViolationKind::kMalformed, 0, comp, "", "duplicate stream");
        continue;
      }
      int64_t t = 0;
      for (size_t i = 0; i < stream.entries.size(); ++i) {
        const StreamEntry& e = stream.entries[i];
        if (e.wait < 0) {
          Report(ViolationKind::kMalformed, t, comp, e.op, "negative wait");
        }
        if (i == 0 && e.op != "nop") {
          Report(ViolationKind::kMalformed, t, comp, e.op,
                 "stream must begin with nop");
        }
        if (e.op != "nop") Decode(comp, e.op, t);
        t += e.wait;
      }
    }
  }

  void Decode(const std::string& comp, const std::string& op, int64_t t) {
    auto bad = [&](absl::string_view why) {
      Report(ViolationKind::kMalformed, t, comp, op, std::string(why));
    };
    if (comp == "hbm") {
      std::optional<int64_t> step = NumberAfter(op, "L");
      DmsKind want = DmsKind::kLoad;
      if (!step) {
        step = NumberAfter(op, "S");
        want = DmsKind::kStore;
      }
      if (!step || *step >= static_cast<int64_t>(dms_.entries.size()) ||
          dms_.entries[*step].kind != want) {
        return bad("not a load or store of the data-movement schedule");
      }
      if (!transfer_time_.emplace(*step, t).second) return bad("repeated");
      return;
    }
    std::vector<absl::string_view> cparts = absl::StrSplit(comp, '.');
    std::optional<int64_t> cluster =
        cparts.size() == 2 ? NumberAfter(cparts[0], "c") : std::nullopt;
    if (!cluster || *cluster >= config_.clusters) {
      return bad("unknown component");
    }
    std::vector<absl::string_view> oparts = absl::StrSplit(op, '.');
    std::optional<int64_t> id = NumberAfter(oparts[0], "I");
    if (!id || *id >= static_cast<int64_t>(dfg_.instructions.size()) ||
        !IsCompute(dfg_.instructions[*id].op) || oparts.size() > 2) {
      return bad("not a compute instruction");
    }
    ComputeEvents& ev = compute_[static_cast<int>(*id)];
    const absl::string_view unit = cparts[1];
    if (oparts.size() == 1) {
      // FU component "<kind><unit>".
      size_t digits = unit.size();
      while (digits > 0 && absl::ascii_isdigit(unit[digits - 1])) --digits;
      std::optional<FuKind> kind = ParseFuKind(unit.substr(0, digits));
      int64_t u;
      if (!kind || digits == unit.size() ||
          !absl::SimpleAtoi(unit.substr(digits), &u) ||
          u >= config_.FuCount(*kind, dfg_.n)) {
        return bad("unknown functional unit");
      }
      if (*kind != FuKindFor(dfg_.instructions[*id].op)) {
        return bad("instruction issued on the wrong kind of unit");
      }
      if (ev.start) return bad("repeated");
      ev.start = t;
      ev.cluster = static_cast<int>(*cluster);
      ev.unit = static_cast<int>(u);
      ev.kind = *kind;
      ev.fu_component = comp;
      return;
    }
    if (std::optional<int64_t> j = NumberAfter(oparts[1], "rd")) {
      std::optional<int64_t> port = NumberAfter(unit, "in");
      if (!port || *port >= kInboundPorts) return bad("unknown port");
      if (!ev.reads.emplace(static_cast<int>(*j),
                            std::make_pair(t, static_cast<int>(*port)))
               .second) {
        return bad("repeated");
      }
      read_cluster_[{static_cast<int>(*id), static_cast<int>(*j)}] =
          static_cast<int>(*cluster);
      return;
    }
    if (oparts[1] == "wb" && unit == "out") {
      if (ev.writeback) return bad("repeated");
      ev.writeback = t;
      ev.wb_cluster = static_cast<int>(*cluster);
      return;
    }
    bad("unknown operation");
  }

  void CheckCompleteness() {
    for (size_t step = 0; step < dms_.entries.size(); ++step) {
      const DmsEntry& e = dms_.entries[step];
      const std::string where = absl::StrCat("step ", step);
      if (e.kind != DmsKind::kCompute) {
        if (!transfer_time_.count(static_cast<int64_t>(step))) {
          Report(ViolationKind::kMalformed, 0, "hbm", where,
                 "transfer never issued");
        }
        continue;
      }
      const std::string name = absl::StrCat("I", e.instruction);
      auto it = compute_.find(e.instruction);
      if (it == compute_.end() || !it->second.start) {
        Report(ViolationKind::kMalformed, 0, "", name, "never issued");
        continue;
      }
      ComputeEvents& ev = it->second;
      const size_t n_reads = DistinctSlots(e).size();
      for (size_t j = 0; j < n_reads; ++j) {
        auto r = read_cluster_.find({e.instruction, static_cast<int>(j)});
        if (r == read_cluster_.end()) {
          Report(ViolationKind::kMalformed, *ev.start, ev.fu_component, name,
                 absl::StrCat("operand ", j, " never transferred"));
        } else if (r->second != ev.cluster) {
          Report(ViolationKind::kMalformed, *ev.start, ev.fu_component, name,
                 "operand sent to another cluster");
        }
      }
      if (ev.reads.size() != n_reads) {
        Report(ViolationKind::kMalformed, *ev.start, ev.fu_component, name,
               "wrong number of operand transfers");
      }
      if ((e.slot >= 0) != ev.writeback.has_value()) {
        Report(ViolationKind::kMalformed, *ev.start, ev.fu_component, name,
               "writeback does not match the result slot");
      } else if (ev.writeback && ev.wb_cluster != ev.cluster) {
        Report(ViolationKind::kMalformed, *ev.writeback, "", name,
               "writeback from another cluster");
      }
    }
    for (const auto& [id, ev] : compute_) {
      if (!ev.start) {
        Report(ViolationKind::kMalformed, 0, "", absl::StrCat("I", id),
               "transfers without an issue");
      }
    }
  }

  // --- Timing checks ------------------------------------------------------

  Resource& Res(const std::string& name, int64_t capacity,
                ViolationKind kind = ViolationKind::kOversubscribed) {
    auto [it, inserted] = resources_.try_emplace(name);
    if (inserted) {
      it->second.component = name;
      it->second.capacity = capacity;
      it->second.kind = kind;
    }
    return it->second;
  }

  void Use(const std::string& name, int64_t capacity, int64_t start,
           int64_t len, int64_t amount, const std::string& label,
           ViolationKind kind = ViolationKind::kOversubscribed) {
    if (len <= 0) return;
    Res(name, capacity, kind).uses.push_back({start, len, amount, label});
    end_ = std::max(end_, start + len);
  }

  struct SlotState {
    bool written = false;
    int64_t write_end = 0;
    int64_t busy_until = 0;  // end of the last write or read of the occupant
  };

  void CheckSlot(int slot, const std::string& comp, const std::string& name,
                 int64_t t) {
    if (slot < 0 || slot >= config_.ScratchpadVectors(dfg_.n)) {
      Report(ViolationKind::kCapacity, t, comp, name,
             absl::StrCat("slot ", slot, " outside the scratchpad"));
    }
  }

  void Write(int slot, int64_t start, int64_t end, const std::string& comp,
             const std::string& name) {
    SlotState& s = slots_[slot];
    if (start < s.busy_until) {
      Report(ViolationKind::kClobber, start, comp, name,
             absl::StrCat("slot ", slot, " overwritten at ", start,
                          " before its previous contents were done at ",
                          s.busy_until));
    }
    s.written = true;
    s.write_end = end;
    s.busy_until = end;
  }

  void Read(int slot, int64_t start, int64_t end, const std::string& comp,
            const std::string& name) {
    SlotState& s = slots_[slot];
    if (!s.written || start < s.write_end) {
      Report(ViolationKind::kRaw, start, comp, name,
             s.written ? absl::StrCat("slot ", slot, " read at ", start,
                                      ", ready at ", s.write_end)
                       : absl::StrCat("slot ", slot, " read before any write"));
    }
    s.busy_until = std::max(s.busy_until, end);
  }

  std::string Bank(const char* dir, int slot) const {
    return absl::StrCat("bank", config_.Bank(slot), ".", dir);
  }

  void WalkSchedule() {
    const int64_t T = chunk_;
    const int64_t ml = config_.mem_latency;
    if (dms_.capacity > config_.ScratchpadVectors(dfg_.n)) {
      Report(ViolationKind::kCapacity, 0, "scratchpad", "",
             "schedule assumes more slots than the scratchpad has");
    }
    if (dms_.PeakResident() > config_.ScratchpadVectors(dfg_.n)) {
      Report(ViolationKind::kCapacity, 0, "scratchpad", "",
             "resident set exceeds the scratchpad");
    }
    std::map<int, int64_t> object_ready;
    for (size_t step = 0; step < dms_.entries.size(); ++step) {
      const DmsEntry& e = dms_.entries[step];
      if (e.kind != DmsKind::kCompute) {
        const int64_t t = transfer_time_.at(static_cast<int64_t>(step));
        const int64_t bytes = dms_.Object(dfg_, e.object).bytes;
        const int64_t d = config_.OffchipCycles(bytes);
        const std::string name =
            absl::StrCat(e.kind == DmsKind::kLoad ? "L" : "S", step);
        CheckSlot(e.slot, "hbm", name, t);
        Use("hbm", config_.hbm_bytes_per_cycle, t, d,
            config_.OffchipRate(bytes), name);
        offchip_bytes_ += bytes;
        for (int64_t c = t; c < t + d; ++c) {
          if (static_cast<int64_t>(series_.size()) <= c) series_.resize(c + 1);
        }
        AddSeries(t, d, bytes);
        if (e.kind == DmsKind::kLoad) {
          auto it = object_ready.find(e.object);
          if (it != object_ready.end() && t < it->second) {
            Report(ViolationKind::kRaw, t, "hbm", name,
                   absl::StrCat("object ", e.object, " fetched at ", t,
                                " before its store lands at ", it->second));
          }
          Use(Bank("wr", e.slot), 1, t + ml, d, 1, name);
          Write(e.slot, t + ml, t + ml + d, "hbm", name);
          end_ = std::max(end_, t + ml + d);
        } else {
          Use(Bank("rd", e.slot), 1, t, d, 1, name);
          Read(e.slot, t, t + d, "hbm", name);
          object_ready[e.object] = t + d + ml;
        }
        continue;
      }
      const Instruction& in = dfg_.instructions[e.instruction];
      const ComputeEvents& ev = compute_.at(e.instruction);
      const std::string name = absl::StrCat("I", in.id);
      const std::string cl = absl::StrCat("c", ev.cluster);
      const FuTiming& timing = timing_[static_cast<int>(ev.kind)];
      const int64_t f = *ev.start;
      const std::vector<int> slots = DistinctSlots(e);
      for (size_t j = 0; j < slots.size(); ++j) {
        const auto [x, port] = ev.reads.at(static_cast<int>(j));
        const std::string comp = absl::StrCat(cl, ".in", port);
        CheckSlot(slots[j], comp, name, x);
        Read(slots[j], x, x + T, comp, name);
        if (f < x) {
          Report(ViolationKind::kRaw, f, ev.fu_component, name,
                 absl::StrCat("unit starts at ", f, " before operand ", j,
                              " arrives at ", x));
        }
        Use(Bank("rd", slots[j]), 1, x, T, 1, name);
        Use(comp, 1, x, T, 1, name);
        Use(cl + ".rf.wr", config_.rf_write_ports, x, T, 1, name);
        Use(cl + ".rf.space", config_.rf_vectors_per_cluster, x,
            std::max<int64_t>(f + T - x, 0), 1, name, ViolationKind::kCapacity);
      }
      Use(ev.fu_component, 1, f, timing.issue_cycles, 1, name,
          ViolationKind::kFuOverlap);
      Use(cl + ".rf.rd", config_.rf_read_ports, f, T,
          static_cast<int64_t>(slots.size()), name);
      end_ = std::max(end_, f + std::max(timing.issue_cycles,
                                         timing.latency + T));
      busy_[static_cast<int>(ev.kind)] += timing.issue_cycles;
      if (e.slot < 0) continue;
      const int64_t w = *ev.writeback;
      const int64_t produced = f + timing.latency;
      const std::string out = cl + ".out";
      if (w < produced) {
        Report(ViolationKind::kLatency, w, out, name,
               absl::StrCat("writeback at ", w, " before the result at ",
                            produced));
      }
      CheckSlot(e.slot, out, name, w);
      Use(cl + ".rf.wr", config_.rf_write_ports, produced, T, 1, name);
      Use(cl + ".rf.space", config_.rf_vectors_per_cluster, produced,
          std::max<int64_t>(w + T - produced, 0), 1, name,
          ViolationKind::kCapacity);
      Use(cl + ".rf.rd", config_.rf_read_ports, w, T, 1, name);
      Use(out, 1, w, T, 1, name);
      Use(Bank("wr", e.slot), 1, w, T, 1, name);
      Write(e.slot, w, w + T, out, name);
    }
  }

  void AddSeries(int64_t start, int64_t len, int64_t bytes) {
    const int64_t rate = config_.OffchipRate(bytes);
    int64_t left = bytes;
    for (int64_t c = start; c < start + len; ++c) {
      const int64_t now = std::min(rate, left);
      series_[c] += now;
      left -= now;
    }
  }

  void CheckResources() {
    for (auto& [name, res] : resources_) {
      int64_t horizon = 0;
      for (const Usage& u : res.uses) {
        horizon = std::max(horizon, u.start + u.len);
      }
      std::vector<int64_t> diff(horizon + 1, 0);
      for (const Usage& u : res.uses) {
        diff[u.start] += u.amount;
        diff[u.start + u.len] -= u.amount;
      }
      int64_t level = 0;
      int64_t first = -1, cycles_over = 0;
      for (int64_t c = 0; c < horizon; ++c) {
        level += diff[c];
        if (level > res.capacity) {
          if (first < 0) first = c;
          ++cycles_over;
        }
      }
      if (first < 0) continue;
      std::string who;
      for (const Usage& u : res.uses) {
        if (first >= u.start && first < u.start + u.len) who = u.label;
      }
      Report(res.kind, first, name, who,
             absl::StrCat("over capacity ", res.capacity, " in ", cycles_over,
                          " cycles"));
    }
  }

  void ComputeStats() {
    SimStats& s = result_.stats;
    s.total_cycles = end_;
    if (end_ != schedule_.total_cycles) {
      Report(ViolationKind::kMalformed, end_, "", "",
             absl::StrCat("declared length ", schedule_.total_cycles,
                          " differs from replayed length ", end_));
    }
    for (int k = 0; k < kNumFuKinds; ++k) {
      s.fu_busy_cycles[k] = busy_[k];
      s.fu_units[k] = static_cast<int64_t>(config_.clusters) *
                      config_.FuCount(static_cast<FuKind>(k), dfg_.n);
    }
    s.traffic = TrafficReport(dms_, dfg_);
    s.offchip_bytes = offchip_bytes_;
    s.bandwidth_series = series_;
    s.peak_resident_bytes = dms_.PeakResident() * dms_.vector_bytes;
  }

  // --- Functional co-simulation --------------------------------------------

  absl::Status InitMemory(const FunctionalInputs& in) {
    const HomProgram& p = in.program;
    std::map<int, size_t> input_index;
    for (size_t i = 0; i < p.inputs.size(); ++i) input_index[p.inputs[i]] = i;
    if (in.inputs.size() != p.inputs.size()) {
      return absl::InvalidArgumentError("wrong number of input ciphertexts");
    }
    for (const DataObject& o : dfg_.objects) {
      if (o.cls == ObjectClass::kKsh) {
        auto it = in.hints.find(*o.hint);
        if (it == in.hints.end()) {
          return absl::NotFoundError(
              absl::StrCat("missing hint ", o.hint->ToString()));
        }
        const auto& m = o.matrix == 0 ? it->second.ksh0 : it->second.ksh1;
        memory_[o.id] = std::vector<Word>(m[o.row][o.col].coeffs().begin(),
                                          m[o.row][o.col].coeffs().end());
      } else if (o.cls == ObjectClass::kInput && o.constant >= 0) {
        if (o.constant >= static_cast<int>(p.constants.size())) {
          return absl::InvalidArgumentError("missing plaintext constant");
        }
        memory_[o.id] = VecNtt(p.constants[o.constant].coeffs,
                               dfg_.moduli[o.residue]);
      } else if (o.cls == ObjectClass::kInput) {
        auto idx = input_index.find(o.node);
        if (idx == input_index.end()) {
          return absl::InvalidArgumentError(
              absl::StrCat("object ", o.id, " names a non-input node"));
        }
        const Ciphertext& ct = in.inputs[idx->second];
        const RnsPoly& poly = o.poly == 0 ? ct.a : ct.b;
        if (static_cast<size_t>(o.residue) >= poly.level()) {
          return absl::InvalidArgumentError("input ciphertext level too low");
        }
        const auto& c = poly.residues[o.residue].coeffs();
        memory_[o.id] = std::vector<Word>(c.begin(), c.end());
      }
    }
    return absl::OkStatus();
  }

  std::vector<Word> Execute(const Instruction& in,
                            const std::vector<std::vector<Word>>& ops) const {
    const Word q = dfg_.ModulusValue(in.modulus);
    switch (in.op) {
      case Opcode::kVecAdd:
        return ops.size() == 2
                   ? VecAdd(ops[0], ops[1], q)
                   : VecAdd(ops[0], std::vector<Word>(ops[0].size(), 0), q);
      case Opcode::kVecMul:
        return VecMul(ops[0], ops[1], q);
      case Opcode::kVecMulScalar:
        return VecMulScalar(ops[0], in.scalar, q);
      case Opcode::kNtt:
        return VecNtt(ops[0], dfg_.moduli[in.modulus]);
      case Opcode::kIntt:
        return VecIntt(ops[0], dfg_.moduli[in.modulus]);
      case Opcode::kAutomorphism:
        return VecAutomorphism(ops[0], in.galois, q, in.domain);
      default:
        return {};
    }
  }

  absl::Status RunFunctional(const FunctionalInputs& in) {
    if (auto s = InitMemory(in); !s.ok()) return s;
    const int64_t T = chunk_;
    const int64_t ml = config_.mem_latency;
    // (time, phase, step, operand): writes (phase 0) land before reads
    // (phase 1) in the same cycle.
    using Key = std::tuple<int64_t, int, size_t, int>;
    std::vector<Key> events;
    for (size_t step = 0; step < dms_.entries.size(); ++step) {
      const DmsEntry& e = dms_.entries[step];
      if (e.kind != DmsKind::kCompute) {
        const int64_t t = transfer_time_.at(static_cast<int64_t>(step));
        const int64_t d =
            config_.OffchipCycles(dms_.Object(dfg_, e.object).bytes);
        events.emplace_back(t, 1, step, 0);
        events.emplace_back(
            e.kind == DmsKind::kLoad ? t + ml + d : t + d, 0, step, 0);
        continue;
      }
      const ComputeEvents& ev = compute_.at(e.instruction);
      for (const auto& [j, r] : ev.reads) events.emplace_back(r.first, 1, step, j);
      if (ev.writeback) events.emplace_back(*ev.writeback + T, 0, step, 0);
    }
    std::sort(events.begin(), events.end());
    const size_t n = dfg_.n;
    std::map<int, std::vector<Word>> spad;
    std::map<size_t, std::map<int, std::vector<Word>>> captured;
    auto slot_value = [&](int slot) {
      auto it = spad.find(slot);
      return it == spad.end() ? std::vector<Word>(n, 0) : it->second;
    };
    for (const auto& [time, phase, step, j] : events) {
      const DmsEntry& e = dms_.entries[step];
      if (e.kind == DmsKind::kLoad) {
        if (phase == 1) {
          auto it = memory_.find(e.object);
          captured[step][0] =
              it == memory_.end() ? std::vector<Word>(n, 0) : it->second;
        } else {
          spad[e.slot] = std::move(captured[step][0]);
          captured.erase(step);
        }
      } else if (e.kind == DmsKind::kStore) {
        if (phase == 1) {
          captured[step][0] = slot_value(e.slot);
        } else {
          memory_[e.object] = std::move(captured[step][0]);
          captured.erase(step);
        }
      } else if (phase == 1) {
        captured[step][j] = slot_value(DistinctSlots(e)[j]);
      } else {
        const Instruction& ins = dfg_.instructions[e.instruction];
        const std::vector<int> slots = DistinctSlots(e);
        std::vector<std::vector<Word>> ops;
        for (int s : e.operand_slots) {
          const int j2 = static_cast<int>(
              std::find(slots.begin(), slots.end(), s) - slots.begin());
          ops.push_back(captured[step][j2]);
        }
        spad[e.slot] = Execute(ins, ops);
        captured.erase(step);
      }
    }
    return CollectOutputs(in);
  }

  absl::Status CollectOutputs(const FunctionalInputs& in) {
    std::map<std::tuple<int, int, int>, int> output_object;
    for (const DataObject& o : dfg_.objects) {
      if (o.cls == ObjectClass::kOutput) {
        output_object[{o.node, o.poly, o.residue}] = o.id;
      }
    }
    std::vector<Ciphertext> outs;
    for (int id : in.program.outputs) {
      const size_t level = in.program.nodes[id].level;
      Ciphertext ct;
      ct.level = level;
      ct.origin = CiphertextOrigin::kDerived;
      for (int poly = 0; poly < 2; ++poly) {
        RnsPoly& rp = poly == 0 ? ct.a : ct.b;
        for (size_t j = 0; j < level; ++j) {
          auto it = output_object.find({id, poly, static_cast<int>(j)});
          if (it == output_object.end()) {
            return absl::InvalidArgumentError(
                absl::StrCat("no output object for node ", id));
          }
          std::vector<Word> v = memory_.count(it->second)
                                    ? memory_[it->second]
                                    : std::vector<Word>(dfg_.n, 0);
          absl::StatusOr<ResidueVector> rv =
              ResidueVector::Create(std::move(v), in.params.basis[j],
                                    Domain::kNtt);
          if (!rv.ok()) return rv.status();
          rp.residues.push_back(*std::move(rv));
        }
      }
      outs.push_back(std::move(ct));
    }
    result_.outputs = std::move(outs);
    return absl::OkStatus();
  }

  const CycleSchedule& schedule_;
  const DataMovementSchedule& dms_;
  const InstructionDfg& dfg_;
  const MachineConfig& config_;
  int64_t chunk_ = 1;
  std::array<FuTiming, kNumFuKinds> timing_{};
  std::map<int64_t, int64_t> transfer_time_;  // DMS step -> HBM issue
  std::map<int, ComputeEvents> compute_;
  std::map<std::pair<int, int>, int> read_cluster_;
  std::map<std::string, Resource> resources_;
  std::map<int, SlotState> slots_;
  std::map<int, std::vector<Word>> memory_;
  std::array<int64_t, kNumFuKinds> busy_{};
  std::vector<int64_t> series_;
  int64_t offchip_bytes_ = 0;
  int64_t end_ = 0;
  SimResult result_;
};

}  // namespace

const char* ViolationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kMalformed:
      return "malformed";
    case ViolationKind::kRaw:
      return "raw";
    case ViolationKind::kClobber:
      return "clobber";
    case ViolationKind::kFuOverlap:
      return "fu-overlap";
    case ViolationKind::kOversubscribed:
      return "oversubscribed";
    case ViolationKind::kCapacity:
      return "capacity";
    case ViolationKind::kLatency:
      return "latency";
  }
  return "?";
}

std::string Violation::ToString() const {
  return absl::StrCat(ViolationKindName(kind), " cycle=", cycle,
                      " component=", component.empty() ? "-" : component,
                      " instruction=", instruction.empty() ? "-" : instruction,
                      ": ", message);
}

double SimStats::FuUtilization(FuKind kind) const {
  const int k = static_cast<int>(kind);
  if (total_cycles == 0 || fu_units[k] == 0) return 0.0;
  return static_cast<double>(fu_busy_cycles[k]) /
         (static_cast<double>(total_cycles) * static_cast<double>(fu_units[k]));
}

TrafficBreakdown TrafficReport(const DataMovementSchedule& dms,
                               const InstructionDfg& dfg) {
  TrafficBreakdown t;
  std::set<int> loaded, stored;
  for (const DmsEntry& e : dms.entries) {
    if (e.kind == DmsKind::kCompute) continue;
    const DataObject& o = dms.Object(dfg, e.object);
    if (e.kind == DmsKind::kLoad) {
      const bool first = loaded.insert(o.id).second;
      switch (o.cls) {
        case ObjectClass::kKsh:
          (first ? t.ksh_compulsory : t.ksh_noncompulsory) += o.bytes;
          break;
        case ObjectClass::kInput:
          (first ? t.io_compulsory : t.io_noncompulsory) += o.bytes;
          break;
        case ObjectClass::kOutput:
          t.io_noncompulsory += o.bytes;  // refetch of a stored result
          break;
        case ObjectClass::kIntermediate:
          t.intermediate_load += o.bytes;
          break;
      }
    } else {
      const bool first = stored.insert(o.id).second;
      if (o.cls == ObjectClass::kIntermediate) {
        t.intermediate_store += o.bytes;
      } else {
        (first && o.cls == ObjectClass::kOutput ? t.io_compulsory
                                                : t.io_noncompulsory) +=
            o.bytes;
      }
    }
  }
  return t;
}

absl::StatusOr<SimResult> ValidateAndRun(const CycleSchedule& schedule,
                                         const DataMovementSchedule& dms,
                                         const InstructionDfg& dfg,
                                         const MachineConfig& config,
                                         const FunctionalInputs* functional) {
  Replayer replayer(schedule, dms, dfg, config);
  return replayer.Run(functional);
}

int64_t ComputeBoundCycles(const InstructionDfg& dfg,
                           const MachineConfig& config) {
  std::array<int64_t, kNumFuKinds> work{};
  for (const Instruction& in : dfg.instructions) {
    if (!IsCompute(in.op)) continue;
    const FuKind kind = FuKindFor(in.op);
    absl::StatusOr<FuTiming> t = GetFuTiming(kind, dfg.n, config);
    if (t.ok()) work[static_cast<int>(kind)] += t->issue_cycles;
  }
  int64_t bound = 0;
  for (int k = 0; k < kNumFuKinds; ++k) {
    const int64_t units = static_cast<int64_t>(config.clusters) *
                          config.FuCount(static_cast<FuKind>(k), dfg.n);
    bound = std::max(bound, (work[k] + units - 1) / units);
  }
  return bound;
}

int64_t BandwidthBoundCycles(const DataMovementSchedule& dms,
                             const InstructionDfg& dfg,
                             const MachineConfig& config) {
  const int64_t bytes = TrafficReport(dms, dfg).Total();
  return (bytes + config.hbm_bytes_per_cycle - 1) / config.hbm_bytes_per_cycle;
}

bool Dominates(const MachineConfig& a, const MachineConfig& b) {
  return a.clusters >= b.clusters && a.lanes == b.lanes &&
         a.fus_ntt >= b.fus_ntt && a.fus_automorphism >= b.fus_automorphism &&
         a.fus_multiplier >= b.fus_multiplier && a.fus_adder >= b.fus_adder &&
         a.scratchpad_bytes >= b.scratchpad_bytes && a.banks >= b.banks &&
         a.rf_vectors_per_cluster >= b.rf_vectors_per_cluster &&
         a.rf_read_ports >= b.rf_read_ports &&
         a.rf_write_ports >= b.rf_write_ports &&
         a.hbm_bytes_per_cycle >= b.hbm_bytes_per_cycle &&
         a.port_bytes == b.port_bytes && a.word_bits == b.word_bits &&
         a.latency_add == b.latency_add && a.latency_mul == b.latency_mul &&
         a.latency_ntt == b.latency_ntt &&
         a.latency_automorphism == b.latency_automorphism &&
         a.mem_latency <= b.mem_latency && a.ntt_model == b.ntt_model &&
         a.automorphism_model == b.automorphism_model;
}

SweepResult Sweep(const std::vector<MachineConfig>& configs,
                  const std::vector<NamedProgram>& programs) {
  SweepResult out;
  for (const NamedProgram& p : programs) {
    const size_t first_row = out.rows.size();
    for (const MachineConfig& config : configs) {
      SweepRow row;
      row.program = p.name;
      row.config = config.name;
      absl::StatusOr<CompiledProgram> compiled =
          Compile(p.program, p.params, config);
      if (!compiled.ok()) {
        row.status = compiled.status();
        out.rows.push_back(std::move(row));
        continue;
      }
      absl::StatusOr<SimResult> sim =
          ValidateAndRun(compiled->schedule, compiled->dms, compiled->dfg,
                         config);
      if (!sim.ok()) {
        row.status = sim.status();
      } else if (!sim->ok()) {
        row.status = absl::InternalError(absl::StrCat(
            sim->violations.size(), " violations, first: ",
            sim->violations.front().ToString()));
        row.stats = sim->stats;
      } else {
        row.stats = sim->stats;
      }
      out.rows.push_back(std::move(row));
    }
    for (size_t i = 0; i < configs.size(); ++i) {
      for (size_t j = 0; j < configs.size(); ++j) {
        if (i == j || !Dominates(configs[i], configs[j])) continue;
        const SweepRow& a = out.rows[first_row + i];
        const SweepRow& b = out.rows[first_row + j];
        if (!a.status.ok() || !b.status.ok()) continue;
        if (a.stats.total_cycles > b.stats.total_cycles) {
          out.monotonicity_violations.push_back(absl::StrCat(
              p.name, ": ", a.config, " has at least the resources of ",
              b.config, " but takes ", a.stats.total_cycles, " > ",
              b.stats.total_cycles, " cycles"));
        }
      }
    }
  }
  return out;
}

absl::StatusOr<FunctionalCheck> RunFunctionalCheck(
    const HomProgram& ordered, const BgvParams& params,
    const CycleSchedule& schedule, const DataMovementSchedule& dms,
    const InstructionDfg& dfg, const MachineConfig& config, uint64_t seed) {
  SecretKey sk = KeyGen(params);
  Prng prng(seed);
  FunctionalInputs fi;
  fi.params = params;
  fi.program = ordered;
  std::vector<Plaintext> plain;
  for (int id : ordered.inputs) {
    plain.push_back(RandomPlaintext(params.n, params.t, prng));
    absl::StatusOr<Ciphertext> ct =
        Encrypt(params, plain.back(), sk, ordered.nodes[id].level, prng);
    if (!ct.ok()) return ct.status();
    fi.inputs.push_back(*std::move(ct));
  }
  absl::StatusOr<HintSet> hints =
      GenerateProgramHints(params, sk, ordered, prng);
  if (!hints.ok()) return hints.status();
  fi.hints = *std::move(hints);

  absl::StatusOr<SimResult> sim =
      ValidateAndRun(schedule, dms, dfg, config, &fi);
  if (!sim.ok()) return sim.status();
  FunctionalCheck check;
  check.result = *std::move(sim);
  if (!check.result.outputs) return check;

  absl::StatusOr<std::vector<Plaintext>> expected = EvalPlain(ordered, plain);
  if (!expected.ok()) return expected.status();
  absl::StatusOr<std::vector<Ciphertext>> reference =
      EvaluateEncrypted(params, ordered, fi.inputs, fi.hints);
  if (!reference.ok()) return reference.status();
  const std::vector<Ciphertext>& got = *check.result.outputs;
  if (got.size() != expected->size()) return check;
  check.decrypts = true;
  check.bit_exact = true;
  for (size_t i = 0; i < got.size(); ++i) {
    absl::StatusOr<Plaintext> d = Decrypt(params, got[i], sk);
    check.decrypts = check.decrypts && d.ok() && *d == (*expected)[i];
    check.bit_exact = check.bit_exact && got[i].a == (*reference)[i].a &&
                      got[i].b == (*reference)[i].b;
  }
  return check;
}

}  // namespace hevec
