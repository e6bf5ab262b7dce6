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

#include "kgcode/labelling.hpp"

#include <algorithm>
#include <stdexcept>

#include "kgcode/errors.hpp"

namespace kgc {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Init: return "Init";
    case EventKind::Expansionary: return "Expansionary";
    case EventKind::Adaptive: return "Adaptive";
    case EventKind::Terminated: return "Terminated";
  }
  return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (auto k : {EventKind::Init, EventKind::Expansionary, EventKind::Adaptive,
                 EventKind::Terminated}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// LabelledTreeState

LabelledTreeState::LabelledTreeState(LevelSchedule schedule)
    : schedule_(std::move(schedule)) {}

std::uint64_t LabelledTreeState::level(std::uint64_t i) const {
  while (level_cache_.size() <= i) {
    level_cache_.push_back(schedule_.level(level_cache_.size()));
  }
  return level_cache_[i];
}

std::optional<std::uint64_t> LabelledTreeState::level_index(
    std::uint64_t length) const {
  // Levels are strictly increasing, so l_i >= i and index <= length.
  while (level_cache_.size() <= length &&
         (level_cache_.empty() || level_cache_.back() < length)) {
    try {
      level(level_cache_.size());
    } catch (const std::out_of_range&) {
      break;
    }
  }
  auto it = std::lower_bound(level_cache_.begin(), level_cache_.end(), length);
  if (it == level_cache_.end() || *it != length) return std::nullopt;
  return static_cast<std::uint64_t>(it - level_cache_.begin());
}

std::optional<BitString> LabelledTreeState::label_of(const BitString& where) const {
  auto it = labels_.find(where);
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

std::optional<BitString> LabelledTreeState::active_clone_of(
    const BitString& sigma) const {
  auto it = active_clone_.find(sigma);
  if (it == active_clone_.end()) return std::nullopt;
  return it->second;
}

const std::set<BitString>& LabelledTreeState::labelled_children(
    const BitString& node) const {
  static const std::set<BitString> kNone;
  auto it = children_.find(node);
  return it == children_.end() ? kNone : it->second;
}

bool LabelledTreeState::is_leaf(const BitString& where) const {
  return is_labelled(where) && labelled_children(where).empty();
}

std::optional<BitString> LabelledTreeState::parent_key(const BitString& where) const {
  auto idx = level_index(where.size());
  if (!idx) return std::nullopt;
  if (*idx == 0) return BitString();
  return where.prefix(level(*idx - 1));
}

void LabelledTreeState::refresh_open(const BitString& where) {
  if (labels_.contains(where) && !children_.contains(where) && !d_set_.contains(where)) {
    open_leaves_.insert(where);
  } else {
    open_leaves_.erase(where);
  }
}

void LabelledTreeState::index_insert(const BitString& where) {
  auto p = parent_key(where);
  if (p) children_[*p].insert(where);
  refresh_open(where);
  if (p) refresh_open(*p);
}

void LabelledTreeState::index_erase(const BitString& where) {
  auto p = parent_key(where);
  if (!p) return;
  auto it = children_.find(*p);
  if (it != children_.end()) {
    it->second.erase(where);
    if (it->second.empty()) children_.erase(it);
  }
  refresh_open(where);
  refresh_open(*p);
}

void LabelledTreeState::place(const BitString& where, const BitString& sigma) {
  auto existing = labels_.find(where);
  if (existing != labels_.end()) {
    if (is_active(where)) deactivate(where);
    existing->second = sigma;
  } else {
    labels_.emplace(where, sigma);
    index_insert(where);
  }
  if (auto prev = active_clone_of(sigma); prev && *prev != where) {
    active_.erase(*prev);
  }
  active_.insert(where);
  active_clone_[sigma] = where;
  history_.push_back({stage_, where, sigma});
  dvls_ = std::max<std::uint64_t>(dvls_, sigma.size());
}

void LabelledTreeState::deactivate(const BitString& where) {
  active_.erase(where);
  if (auto sigma = label_of(where)) {
    auto it = active_clone_.find(*sigma);
    if (it != active_clone_.end() && it->second == where) active_clone_.erase(it);
  }
}

void LabelledTreeState::activate(const BitString& where) {
  auto sigma = label_of(where);
  if (!sigma) throw std::invalid_argument("activate: " + where.display() + " is unlabelled");
  active_.insert(where);
  active_clone_[*sigma] = where;
}

void LabelledTreeState::append_d(const BitString& where) {
  d_.push_back({where, stage_});
  d_set_.insert(where);
  open_leaves_.erase(where);
}

void LabelledTreeState::record(StageEvent event) { trace_.push_back(std::move(event)); }

void LabelledTreeState::erase_label(const BitString& where) {
  deactivate(where);
  labels_.erase(where);
  index_erase(where);
}

void LabelledTreeState::overwrite_label(const BitString& where, const BitString& sigma) {
  bool was_active = is_active(where);
  deactivate(where);
  if (!labels_.contains(where)) index_insert(where);
  labels_[where] = sigma;
  if (was_active) activate(where);
}

// ---------------------------------------------------------------------------
// Construction

LabelledTreeState init_unchecked(const LevelSchedule& schedule) {
  LabelledTreeState st(schedule);
  const BitString root_code = BitString::zeros(st.level(0));
  st.place(root_code, BitString());
  st.record({EventKind::Init, 0, {{root_code, BitString()}}, {}, std::nullopt});
  return st;
}

LabelledTreeState init(const LevelSchedule& schedule, const EnumeratedClass& cls) {
  const Dyadic mu = cls.measure();
  const Dyadic one = Dyadic::integer(1);
  if (mu >= one) {
    throw HypothesisViolation("class measure " + mu.to_string() + " is not below 1",
                              mu, ScheduleValidation{});
  }
  ScheduleValidation v =
      validate_schedule(schedule, one - mu, schedule.default_horizon());
  if (!v.accepted) {
    throw HypothesisViolation("schedule " + schedule.description() +
                                  " rejected against budget 1 - " + mu.to_string() +
                                  ": " + v.reason,
                              mu, v);
  }
  return init_unchecked(schedule);
}

std::optional<BitString> least_open_leaf_below(const LabelledTreeState& st,
                                               const std::vector<BitString>& roots) {
  // Leaves extending q form a contiguous run starting at lower_bound(q).
  std::optional<BitString> best;
  const auto& leaves = st.open_leaves();
  for (const auto& q : roots) {
    auto it = leaves.lower_bound(q);
    if (it != leaves.end() && q.is_prefix_of(*it) && (!best || *it < *best)) best = *it;
  }
  return best;
}

std::optional<BitString> filtered_step(const LabelledTreeState& st,
                                       const EnumeratedClass& cls) {
  return least_open_leaf_below(st, cls.strings_at(st.stage()));
}

namespace {

// Level of the extensions that decide saturation of rho.
std::uint64_t next_level(const LabelledTreeState& st, const BitString& rho) {
  if (rho.empty()) return st.level(0);
  auto idx = st.level_index(rho.size());
  if (!idx || !st.is_labelled(rho)) {
    throw std::invalid_argument("saturation asked of unlabelled string " + rho.display());
  }
  return st.level(*idx + 1);
}

}  // namespace

bool is_saturated(const LabelledTreeState& st, const BitString& rho) {
  const std::uint64_t gap = next_level(st, rho) - rho.size();
  if (gap >= 63) return false;
  return st.labelled_children(rho).size() == (std::uint64_t{1} << gap);
}

StageEvent expansionary_stage(LabelledTreeState& st) {
  StageEvent ev{EventKind::Expansionary, st.stage(), {}, {}, std::nullopt};
  const std::uint64_t target = st.level(st.dvls() + 1);
  std::vector<BitString> leaves;
  for (const auto& rho : st.active()) {
    if (st.is_leaf(rho)) leaves.push_back(rho);
  }
  for (const auto& rho : leaves) {
    const BitString sigma = *st.label_of(rho);
    const std::size_t gap = target - rho.size();
    ev.placements.push_back({rho + BitString::zeros(gap), sigma.child(false)});
    ev.placements.push_back({rho + BitString::ones(gap), sigma.child(true)});
  }
  for (const auto& p : ev.placements) st.place(p.where, p.sigma);
  return ev;
}

std::vector<Placement> clone_above(const LabelledTreeState& st,
                                   const BitString& delta, const BitString& beta) {
  if (!st.is_leaf(delta)) {
    throw std::logic_error("clone_above: " + delta.display() + " is not a labelled leaf");
  }
  const BitString tau = *st.label_of(delta);
  std::uint64_t next_index = 0;
  if (!beta.empty()) {
    auto sigma = st.label_of(beta);
    auto idx = st.level_index(beta.size());
    if (!sigma || !idx) {
      throw std::logic_error("clone_above: " + beta.display() + " is not labelled");
    }
    if (!sigma->is_proper_prefix_of(tau)) {
      throw std::logic_error("clone_above: label of " + beta.display() +
                             " does not properly prefix label of " + delta.display());
    }
    next_index = *idx + 1;
  }
  const std::uint64_t next = st.level(next_index);
  if (next > delta.size()) {
    throw std::logic_error("clone_above: no level between beta and delta");
  }
  const std::uint64_t gap = next - beta.size();
  const auto& children = st.labelled_children(beta);
  if (gap < 63 && children.size() == (std::uint64_t{1} << gap)) {
    throw std::logic_error("clone_above: " + beta.display() + " is saturated");
  }
  // Children share a length, so lexicographic order is index order.
  std::uint64_t free_index = 0;
  for (const auto& c : children) {
    if (BitString(std::string_view(c.str()).substr(beta.size())).to_index() != free_index) break;
    ++free_index;
  }
  const BitString eta = beta + BitString::from_index(free_index, gap) +
                        BitString::zeros(delta.size() - next);

  std::vector<Placement> out;
  for (std::uint64_t i = next_index; st.level(i) <= delta.size(); ++i) {
    const std::uint64_t len = st.level(i);
    auto label = st.label_of(delta.prefix(len));
    if (!label) {
      throw std::logic_error("clone_above: " + delta.prefix(len).display() +
                             " on the chain of " + delta.display() + " is unlabelled");
    }
    out.push_back({eta.prefix(len), *label});
    if (len == delta.size()) break;
  }
  return out;
}

StageEvent adaptive_stage(LabelledTreeState& st, const BitString& delta) {
  StageEvent ev{EventKind::Adaptive, st.stage(), {}, {}, delta};

  // alpha_0 = lambda, then the labelled initial segments of delta.
  std::vector<BitString> alpha{BitString()};
  for (std::uint64_t i = 0; st.level(i) <= delta.size(); ++i) {
    BitString p = delta.prefix(st.level(i));
    if (st.is_labelled(p)) alpha.push_back(std::move(p));
    if (st.level(i) == delta.size()) break;
  }
  if (alpha.back() != delta) {
    throw std::logic_error("adaptive_stage: " + delta.display() + " is unlabelled");
  }
  const std::size_t k = alpha.size() - 1;

  std::vector<BitString> beta{BitString()};
  for (std::size_t j = 1; j <= k; ++j) {
    auto clone = st.active_clone_of(*st.label_of(alpha[j]));
    if (!clone) {
      throw std::logic_error("adaptive_stage: label of " + alpha[j].display() +
                             " has no active clone");
    }
    beta.push_back(*clone);
  }

  std::optional<std::size_t> j0;
  for (std::size_t j = k; j-- > 0;) {
    if (!is_saturated(st, beta[j])) {
      j0 = j;
      break;
    }
  }
  if (!j0) {
    ev.kind = EventKind::Terminated;
    st.mark_terminated();
    return ev;
  }

  ev.placements = clone_above(st, delta, beta[*j0]);
  for (std::size_t j = *j0 + 1; j <= k; ++j) {
    st.deactivate(beta[j]);
    ev.deactivations.push_back(beta[j]);
  }
  for (const auto& p : ev.placements) st.place(p.where, p.sigma);
  return ev;
}

StageEvent step(LabelledTreeState& st, const EnumeratedClass& cls) {
  if (st.terminated()) throw std::logic_error("step: construction has terminated");
  std::optional<BitString> delta = filtered_step(st, cls);
  st.set_stage(st.stage() + 1);
  StageEvent ev;
  if (delta) {
    st.append_d(*delta);
    ev = adaptive_stage(st, *delta);
  } else {
    ev = expansionary_stage(st);
  }
  st.record(ev);
  return ev;
}

RunOutcome run_until(LabelledTreeState& st, const EnumeratedClass& cls,
                     const std::function<bool(const LabelledTreeState&)>& done,
                     std::uint64_t stage_cap,
                     const std::function<void(const LabelledTreeState&)>& observe) {
  for (;;) {
    if (st.terminated()) return {RunStatus::Terminated, st.stage()};
    if (done(st)) return {RunStatus::Satisfied, st.stage()};
    if (st.stage() >= stage_cap) return {RunStatus::CapExhausted, st.stage()};
    step(st, cls);
    if (observe) observe(st);
  }
}

}  // namespace kgc
