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

#include "kgcode/invariants.hpp"

#include <stdexcept>

namespace kgc {

namespace {

Dyadic cylinder(const BitString& s) { return Dyadic::pow2(-static_cast<std::int64_t>(s.size())); }

CheckReport all_passed(std::uint64_t stage) {
  CheckReport report;
  report.stage = stage;
  for (auto name : check_names()) report.passed.emplace_back(name);
  return report;
}

}  // namespace

CheckReport StageChecker::observe(const LabelledTreeState& st) {
  ++observations_;
  if (failed_ || !synced_ || st.trace().size() != trace_seen_ + 1) return full(st);
  bool ok = false;
  try {
    ok = advance(st, st.trace().back());
  } catch (const std::out_of_range&) {
    ok = false;  // ran off an explicit schedule; let the full check judge
  }
  if (!ok) return full(st);
  trace_seen_ = st.trace().size();
  stage_ = st.stage();
  return all_passed(st.stage());
}

CheckReport StageChecker::full(const LabelledTreeState& st) {
  ++full_checks_;
  CheckReport report = check_all(st, cls_);
  failed_ = !report.ok();
  synced_ = false;
  if (report.ok()) {
    try {
      rebuild(st);
      synced_ = true;
    } catch (const std::out_of_range&) {
    }
  }
  return report;
}

bool StageChecker::is_open(const BitString& w) const {
  if (!labels_.contains(w) || d_set_.contains(w)) return false;
  auto k = kid_count_.find(w);
  return k == kid_count_.end() || k->second == 0;
}

bool StageChecker::d_prefixed(const BitString& w) const {
  for (std::size_t n = 0; n <= w.size(); ++n) {
    if (d_set_.contains(w.prefix(n))) return true;
  }
  return false;
}

void StageChecker::add_open(const BitString& leaf) {
  ++open_lengths_[leaf.size()];
  for (BitString node = leaf;; node = parent_.at(node)) {
    ++open_below_[node];
    if (node.empty()) break;
  }
}

void StageChecker::remove_open(const BitString& leaf) {
  if (auto it = open_lengths_.find(leaf.size()); it != open_lengths_.end() && --it->second == 0) {
    open_lengths_.erase(it);
  }
  for (BitString node = leaf;; node = parent_.at(node)) {
    if (--open_below_[node] == 0) zeroed_.push_back(node);
    if (node.empty()) break;
  }
}

std::optional<bool> StageChecker::saturated(const LabelledTreeState& st,
                                            const BitString& rho) const {
  auto idx = st.level_index(rho.size());
  if (!idx) return std::nullopt;
  std::uint64_t next = 0;
  try {
    next = st.level(*idx + 1);
  } catch (const std::out_of_range&) {
    return false;
  }
  const std::uint64_t gap = next - rho.size();
  if (gap >= 63) return false;
  auto it = next_count_.find(rho);
  return it != next_count_.end() && it->second == (std::uint64_t{1} << gap);
}

void StageChecker::rebuild(const LabelledTreeState& st) {
  labels_ = st.labels();
  parent_.clear();
  kid_count_.clear();
  kid_weight_.clear();
  next_count_.clear();
  open_below_.clear();
  open_lengths_.clear();
  d_set_.clear();
  d_minimal_.clear();
  d_measure_ = Dyadic();
  last_d_stage_ = 0;
  active_.clear();
  holders_.clear();
  weight_ = Dyadic();
  first_sigma_.clear();
  latest_.clear();
  placed_sigmas_.clear();
  sigmas_per_length_.clear();
  frontier_ = 0;
  longest_sigma_ = 0;
  ceiling_ = Dyadic();
  ceiling_for_ = 0;

  // A labelled lambda would be its own parent; leave such states to check_all.
  if (labels_.contains(BitString())) throw std::out_of_range("lambda labelled");

  for (const auto& [w, p] : labelled_parents(st)) {
    parent_[w] = p;
    ++kid_count_[p];
    kid_weight_[p] += cylinder(w);
  }
  for (const auto& [w, sigma] : labels_) {
    auto idx = st.level_index(w.size());
    if (!idx) throw std::out_of_range("off-level label");
    ++next_count_[*idx == 0 ? BitString() : w.prefix(st.level(*idx - 1))];
    frontier_ = std::max(frontier_, w.size());
    longest_sigma_ = std::max(longest_sigma_, sigma.size());
    if (placed_sigmas_.insert(sigma).second) {
      if (sigmas_per_length_.size() <= sigma.size()) sigmas_per_length_.resize(sigma.size() + 1);
      ++sigmas_per_length_[sigma.size()];
    }
  }
  std::set<BitString> all_d;
  for (const auto& e : st.d()) {
    d_set_.insert(e.bits);
    all_d.insert(e.bits);
    last_d_stage_ = e.stage;
  }
  // Sorted order puts a string right after its nearest kept prefix.
  for (const auto& x : all_d) {
    if (!d_minimal_.empty() && d_minimal_.rbegin()->is_prefix_of(x)) continue;
    d_minimal_.insert(x);
    d_measure_ += cylinder(x);
  }
  for (const auto& eta : st.active()) {
    active_.insert(eta);
    holders_[labels_.at(eta)].insert(eta);
    weight_ += cylinder(eta);
  }
  for (const auto& rec : st.history()) {
    first_sigma_.emplace(rec.where, rec.sigma);
    latest_[rec.sigma] = rec.where;
  }
  for (const auto& [w, sigma] : labels_) {
    if (is_open(w)) add_open(w);
  }
  zeroed_.clear();
  stage_ = st.stage();
  trace_seen_ = st.trace().size();
  history_seen_ = st.history().size();
}

// Applies one event to the indexes and re-examines what it touched. False
// means the checker cannot vouch for the new state on its own.
bool StageChecker::advance(const LabelledTreeState& st, const StageEvent& ev) {
  if (ev.stage != st.stage() || ev.stage < stage_) return false;
  zeroed_.clear();
  std::vector<BitString> touched;
  std::vector<BitString> sigmas;

  if (ev.d_append) {
    const BitString& e = *ev.d_append;
    if (!is_open(e)) return false;
    if (!d_set_.empty() && ev.stage <= last_d_stage_) return false;
    if (ev.stage == 0 || !cls_.has_prefix_in(e, ev.stage - 1)) return false;
    remove_open(e);
    if (!d_prefixed(e)) {
      for (auto it = d_minimal_.lower_bound(e); it != d_minimal_.end() && e.is_prefix_of(*it);) {
        d_measure_ -= cylinder(*it);
        it = d_minimal_.erase(it);
      }
      d_minimal_.insert(e);
      d_measure_ += cylinder(e);
    }
    d_set_.insert(e);
    last_d_stage_ = ev.stage;
    touched.push_back(e);
  }
  for (const auto& b : ev.deactivations) touched.push_back(b);

  const std::uint64_t bound = st.level(ev.stage);
  for (const auto& [w, sigma] : ev.placements) {
    if (w.empty() || labels_.contains(w) || d_prefixed(w)) return false;
    auto idx = st.level_index(w.size());
    if (!idx || *idx != sigma.size() || w.size() > bound) return false;
    if (auto ext = labels_.upper_bound(w); ext != labels_.end() && w.is_prefix_of(ext->first)) {
      return false;
    }
    for (std::uint64_t i = 0; i < *idx; ++i) {
      auto below = labels_.find(w.prefix(st.level(i)));
      if (below == labels_.end() || below->second != sigma.prefix(i)) return false;
    }
    if (auto f = first_sigma_.find(w); f != first_sigma_.end() && f->second != sigma) return false;

    const BitString p = *idx == 0 ? BitString() : w.prefix(st.level(*idx - 1));
    if (!p.empty() && is_open(p)) remove_open(p);
    labels_.emplace(w, sigma);
    parent_[w] = p;
    ++kid_count_[p];
    kid_weight_[p] += cylinder(w);
    ++next_count_[p];
    add_open(w);
    first_sigma_.emplace(w, sigma);
    latest_[sigma] = w;
    if (placed_sigmas_.insert(sigma).second) {
      if (sigmas_per_length_.size() <= sigma.size()) sigmas_per_length_.resize(sigma.size() + 1);
      ++sigmas_per_length_[sigma.size()];
    }
    frontier_ = std::max(frontier_, w.size());
    longest_sigma_ = std::max(longest_sigma_, sigma.size());

    touched.push_back(w);
    if (!p.empty()) touched.push_back(p);
    if (auto h = holders_.find(sigma); h != holders_.end()) {
      touched.insert(touched.end(), h->second.begin(), h->second.end());
    }
    sigmas.push_back(sigma);
  }

  for (const auto& t : touched) {
    const bool now = st.is_active(t);
    if (now == active_.contains(t)) continue;
    auto lab = labels_.find(t);
    if (lab == labels_.end()) return false;
    if (now) {
      active_.insert(t);
      holders_[lab->second].insert(t);
      weight_ += cylinder(t);
    } else {
      active_.erase(t);
      holders_[lab->second].erase(t);
      weight_ -= cylinder(t);
    }
    sigmas.push_back(lab->second);
  }

  // The state must be exactly the indexed one plus this event.
  if (labels_.size() != st.labels().size() || active_.size() != st.active().size() ||
      d_set_.size() != st.d().size()) {
    return false;
  }
  if (ev.d_append && st.d().back() != DEntry{*ev.d_append, ev.stage}) return false;
  const auto& history = st.history();
  if (history.size() != history_seen_ + ev.placements.size()) return false;
  for (std::size_t i = 0; i < ev.placements.size(); ++i) {
    const auto& rec = history[history_seen_ + i];
    if (rec.stage != ev.stage || rec.where != ev.placements[i].where ||
        rec.sigma != ev.placements[i].sigma) {
      return false;
    }
  }
  history_seen_ = history.size();
  for (const auto& t : touched) {
    auto lab = labels_.find(t);
    if (st.label_of(t) != (lab == labels_.end() ? std::nullopt : std::optional(lab->second))) {
      return false;
    }
  }

  // Every label of every length up to the longest.
  for (std::size_t n = 0; n <= longest_sigma_; ++n) {
    if (n >= 63 || n >= sigmas_per_length_.size() ||
        sigmas_per_length_[n] != (std::uint64_t{1} << n)) {
      return false;
    }
  }
  if (frontier_ > bound) return false;
  for (const auto& sigma : sigmas) {
    auto h = holders_.find(sigma);
    if (h == holders_.end() || h->second.size() != 1) return false;
    auto last = latest_.find(sigma);
    if (last == latest_.end() || last->second != *h->second.begin()) return false;
  }
  for (const auto& t : touched) {
    if (!labels_.contains(t)) continue;
    const bool act = active_.contains(t);
    if (!act && !d_set_.contains(t)) {
      auto sat = saturated(st, t);
      if (sat && !*sat) return false;
    }
    if (!act && !d_prefixed(t)) {
      auto kw = kid_weight_.find(t);
      if (kw == kid_weight_.end() || kw->second != cylinder(t)) return false;
    }
    if (act) {
      auto ob = open_below_.find(t);
      if (ob == open_below_.end() || ob->second == 0) return false;
    }
  }
  for (const auto& z : zeroed_) {
    if (active_.contains(z) && open_below_.at(z) == 0) return false;
  }
  if (weight_ + d_measure_ >= Dyadic::integer(1)) return false;
  for (; ceiling_for_ <= longest_sigma_; ++ceiling_for_) ceiling_ += st.schedule().term(ceiling_for_);
  if (weight_ > ceiling_) return false;
  if (open_lengths_.size() > 1) return false;
  return true;
}

}  // namespace kgc
