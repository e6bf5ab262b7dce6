// Copyright 2026 The kgcode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kgcode/bitstring.hpp"
#include "kgcode/piclass.hpp"
#include "kgcode/schedule.hpp"

namespace kgc {

enum class EventKind { Init, Expansionary, Adaptive, Terminated };

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view name);

// Label x_sigma placed on string `where`.
struct Placement {
  BitString where;
  BitString sigma;
  bool operator==(const Placement&) const = default;
};

struct StageEvent {
  EventKind kind = EventKind::Init;
  std::uint64_t stage = 0;
  std::vector<Placement> placements;
  std::vector<BitString> deactivations;  // explicit ones only
  std::optional<BitString> d_append;     // the delta of an adaptive stage
  bool operator==(const StageEvent&) const = default;
};

struct DEntry {
  BitString bits;
  std::uint64_t stage = 0;
  bool operator==(const DEntry&) const = default;
};

struct PlacementRecord {
  std::uint64_t stage = 0;
  BitString where;
  BitString sigma;
  bool operator==(const PlacementRecord&) const = default;
};

// Snapshot of the labelling process at one stage: the partially labelled
// tree, its active strings, the filtered enumeration D and the event trace.
//
// The mutators below are the only way to change a state. The engine uses
// them to run the construction; trace replay and the fault-injection tests
// use them directly, so they enforce nothing beyond keeping the internal
// indexes in sync with the label map.
class LabelledTreeState {
 public:
  explicit LabelledTreeState(LevelSchedule schedule);

  const LevelSchedule& schedule() const noexcept { return schedule_; }
  // Cached l_i.
  std::uint64_t level(std::uint64_t i) const;
  // i with l_i == length.
  std::optional<std::uint64_t> level_index(std::uint64_t length) const;

  std::optional<BitString> label_of(const BitString& where) const;
  bool is_labelled(const BitString& where) const { return labels_.contains(where); }
  const std::map<BitString, BitString>& labels() const noexcept { return labels_; }

  bool is_active(const BitString& where) const { return active_.contains(where); }
  const std::set<BitString>& active() const noexcept { return active_; }
  std::optional<BitString> active_clone_of(const BitString& sigma) const;

  const std::vector<DEntry>& d() const noexcept { return d_; }
  bool in_d(const BitString& where) const { return d_set_.contains(where); }

  const std::vector<PlacementRecord>& history() const noexcept { return history_; }
  const std::vector<StageEvent>& trace() const noexcept { return trace_; }

  std::uint64_t stage() const noexcept { return stage_; }
  // Length of the longest sigma with x_sigma placed.
  std::uint64_t dvls() const noexcept { return dvls_; }
  bool terminated() const noexcept { return terminated_; }

  // Labelled strings one schedule level above `node` that extend it; for
  // lambda these are the labelled strings of length l_0.
  const std::set<BitString>& labelled_children(const BitString& node) const;
  bool is_leaf(const BitString& where) const;
  // Labelled leaves not in D, kept in lexicographic order.
  const std::set<BitString>& open_leaves() const noexcept { return open_leaves_; }

  // Places x_sigma on `where` at the current stage, makes it the active
  // clone of sigma and deactivates the previous holder, if any.
  void place(const BitString& where, const BitString& sigma);
  void deactivate(const BitString& where);
  // Raw flag flip; also points the active-clone index at `where`.
  void activate(const BitString& where);
  void append_d(const BitString& where);
  void set_stage(std::uint64_t stage) { stage_ = stage; }
  void record(StageEvent event);
  void mark_terminated() { terminated_ = true; }

  // Fault injection only: edit the label map without touching history.
  void erase_label(const BitString& where);
  void overwrite_label(const BitString& where, const BitString& sigma);
  // Fault injection only: edit the history without touching the label map.
  std::vector<PlacementRecord>& mutable_history() { return history_; }
  std::vector<DEntry>& mutable_d() { return d_; }

 private:
  std::optional<BitString> parent_key(const BitString& where) const;
  void index_insert(const BitString& where);
  void index_erase(const BitString& where);
  void refresh_open(const BitString& where);

  LevelSchedule schedule_;
  mutable std::vector<std::uint64_t> level_cache_;
  std::map<BitString, BitString> labels_;
  std::set<BitString> active_;
  std::unordered_map<BitString, BitString> active_clone_;
  std::map<BitString, std::set<BitString>> children_;
  std::vector<DEntry> d_;
  std::unordered_set<BitString> d_set_;
  std::set<BitString> open_leaves_;
  std::vector<PlacementRecord> history_;
  std::vector<StageEvent> trace_;
  std::uint64_t stage_ = 0;
  std::uint64_t dvls_ = 0;
  bool terminated_ = false;
};

// Stage 0: x_lambda on the all-zeros string of length l_0, active.
// Throws HypothesisViolation unless the schedule's certified sum is strictly
// below 1 - mu([[Q]]).
LabelledTreeState init(const LevelSchedule& schedule, const EnumeratedClass& cls);
// Stage 0 without checking the hypothesis.
LabelledTreeState init_unchecked(const LevelSchedule& schedule);

// Least labelled leaf outside D extending some string in `roots`.
std::optional<BitString> least_open_leaf_below(const LabelledTreeState& st,
                                               const std::vector<BitString>& roots);

// The lexicographically least leaf outside D with a prefix in Q_s, where s
// is the state's current stage.
std::optional<BitString> filtered_step(const LabelledTreeState& st,
                                       const EnumeratedClass& cls);

// Every extension of rho at the next schedule level is labelled. lambda is
// treated as sitting on level l_{-1}. Throws std::invalid_argument when rho
// is neither lambda nor labelled.
bool is_saturated(const LabelledTreeState& st, const BitString& rho);

// Body of an expansionary stage at st.stage(): each active leaf with x_sigma
// gets x_{sigma*0} on its leftmost and x_{sigma*1} on its rightmost
// extension at level l_{dvls+1}.
StageEvent expansionary_stage(LabelledTreeState& st);

// Body of an adaptive stage at st.stage() for delta, which the caller has
// already appended to D. Returns a Terminated event (and marks the state)
// when every proper clone on delta's chain is saturated.
StageEvent adaptive_stage(LabelledTreeState& st, const BitString& delta);

// The placements that clone delta above beta. Throws std::logic_error when
// beta is saturated or the label chain of beta does not prefix delta's.
std::vector<Placement> clone_above(const LabelledTreeState& st,
                                   const BitString& delta, const BitString& beta);

// One stage: filtered enumeration, then the adaptive or expansionary body.
// Throws std::logic_error when called on a terminated state.
StageEvent step(LabelledTreeState& st, const EnumeratedClass& cls);

enum class RunStatus { Satisfied, CapExhausted, Terminated };

struct RunOutcome {
  RunStatus status = RunStatus::Satisfied;
  std::uint64_t stage = 0;
};

// Steps until `done(st)` holds, the stage counter reaches `stage_cap`, or the
// construction terminates. `observe` (optional) sees every new stage.
RunOutcome run_until(LabelledTreeState& st, const EnumeratedClass& cls,
                     const std::function<bool(const LabelledTreeState&)>& done,
                     std::uint64_t stage_cap,
                     const std::function<void(const LabelledTreeState&)>& observe = {});

}  // namespace kgc
