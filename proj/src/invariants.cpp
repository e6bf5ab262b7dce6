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

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace kgc {

const std::vector<std::string_view>& check_names() {
  static const std::vector<std::string_view> kNames = {
      check::kRestriction,       check::kLayering,
      check::kCompleteness,      check::kUniqueness,
      check::kConsistency,       check::kFiniteness,
      check::kPersistence,       check::kOneActivePerLabel,
      check::kActiveIsLatest,    check::kFilteredEnumeration,
      check::kDWithinQ,          check::kInactiveSaturatedOrD,
      check::kNoLabelsAboveD,    check::kWeightBound,
      check::kWeightCeiling,     check::kActiveFrontier,
      check::kEscape,            check::kCover,
      check::kLeafDepth,
  };
  return kNames;
}

std::map<BitString, BitString> labelled_parents(const LabelledTreeState& st) {
  std::map<BitString, BitString> parent;
  std::vector<BitString> stack;
  for (const auto& [where, sigma] : st.labels()) {
    while (!stack.empty() && !stack.back().is_prefix_of(where)) stack.pop_back();
    parent.emplace(where, stack.empty() ? BitString() : stack.back());
    stack.push_back(where);
  }
  return parent;
}

Dyadic weight_of_active(const LabelledTreeState& st) {
  Dyadic w;
  for (const auto& eta : st.active()) w += Dyadic::pow2(-static_cast<std::int64_t>(eta.size()));
  return w;
}

namespace {

std::uint64_t longest_sigma(const LabelledTreeState& st) {
  std::uint64_t m = 0;
  for (const auto& [where, sigma] : st.labels()) m = std::max<std::uint64_t>(m, sigma.size());
  return m;
}

}  // namespace

Dyadic weight_ceiling(const LabelledTreeState& st) {
  Dyadic total;
  const std::uint64_t m = longest_sigma(st);
  for (std::uint64_t n = 0; n <= m; ++n) total += st.schedule().term(n);
  return total;
}

bool check_weight_ceiling(const LabelledTreeState& st) {
  return weight_of_active(st) <= weight_ceiling(st);
}

namespace {

using Failure = std::optional<CheckFailure>;

Failure fail(std::string_view check, std::vector<BitString> witness, std::string expected,
             std::string actual) {
  return CheckFailure{std::string(check), std::move(witness), std::move(expected),
                      std::move(actual)};
}

std::string label_text(const BitString& sigma) { return "x_" + sigma.display(); }

// Facts about one snapshot, derived from the label map, active set, D and the
// placement history only. Nothing here trusts the engine's own indexes.
class Snapshot {
 public:
  Snapshot(const LabelledTreeState& st, const EnumeratedClass& cls)
      : st_(st), cls_(cls), parent_(labelled_parents(st)) {
    for (const auto& [where, p] : parent_) kids_[p].push_back(where);
    for (const auto& e : st.d()) {
      d_set_.insert(e.bits);
      if (!st.is_labelled(e.bits)) unlabelled_d_.push_back(e.bits);
    }
    for (const auto& [where, sigma] : st.labels()) {
      frontier_ = std::max(frontier_, where.size());
      auto idx = level_index(where.size());
      if (!idx) continue;
      if (*idx == 0) {
        ++next_level_count_[BitString()];
      } else if (auto below = level(*idx - 1)) {
        ++next_level_count_[where.prefix(*below)];
      }
    }
  }

  const LabelledTreeState& st() const { return st_; }
  const EnumeratedClass& cls() const { return cls_; }
  std::size_t frontier() const { return frontier_; }
  const std::map<BitString, BitString>& parent() const { return parent_; }

  std::optional<std::uint64_t> level(std::uint64_t i) const {
    try {
      return st_.schedule().level(i);
    } catch (const std::out_of_range&) {
      return std::nullopt;
    }
  }

  std::optional<std::uint64_t> level_index(std::uint64_t length) const {
    auto it = level_index_memo_.find(length);
    if (it != level_index_memo_.end()) return it->second;
    auto idx = st_.schedule().index_of_level(length);
    level_index_memo_.emplace(length, idx);
    return idx;
  }

  bool in_d(const BitString& s) const { return d_set_.contains(s); }

  bool has_d_prefix(const BitString& s) const {
    for (std::size_t n = 0; n <= s.size(); ++n) {
      if (d_set_.contains(s.prefix(n))) return true;
    }
    return false;
  }

  // nullopt when rho is not on a schedule level.
  std::optional<bool> saturated(const BitString& rho) const {
    std::uint64_t next_index = 0;
    if (!rho.empty()) {
      auto idx = level_index(rho.size());
      if (!idx) return std::nullopt;
      next_index = *idx + 1;
    }
    auto next = level(next_index);
    if (!next) return false;
    const std::uint64_t gap = *next - rho.size();
    if (gap >= 63) return false;
    auto it = next_level_count_.find(rho);
    const std::uint64_t have = it == next_level_count_.end() ? 0 : it->second;
    return have == (std::uint64_t{1} << gap);
  }

  const std::vector<BitString>& kids(const BitString& node) const {
    static const std::vector<BitString> kNone;
    auto it = kids_.find(node);
    return it == kids_.end() ? kNone : it->second;
  }

  bool is_leaf(const BitString& where) const { return kids(where).empty(); }

  // Strings that cut a piece out of the region "extends nu, nu is the longest
  // labelled prefix, no prefix in D": immediate labelled descendants plus
  // unlabelled D strings. Labelled D strings below nu lie inside a descendant.
  std::vector<BitString> blockers(const BitString& nu) const {
    std::vector<BitString> out = kids(nu);
    for (const auto& d : unlabelled_d_) {
      if (nu.is_proper_prefix_of(d) && d.size() <= frontier_) out.push_back(d);
    }
    return out;
  }

  static bool fully_covered(const BitString& p, const std::vector<BitString>& blockers) {
    std::vector<BitString> inside;
    for (const auto& b : blockers) {
      if (b.is_prefix_of(p)) return true;
      if (p.is_proper_prefix_of(b)) inside.push_back(b);
    }
    return measure_of(inside) == Dyadic::pow2(-static_cast<std::int64_t>(p.size()));
  }

  // A frontier-length extension of nu avoiding every blocker, if any.
  std::optional<BitString> uncovered_extension(const BitString& nu) const {
    const auto block = blockers(nu);
    if (nu.size() > frontier_ || fully_covered(nu, block)) return std::nullopt;
    BitString p = nu;
    while (p.size() < frontier_) {
      BitString left = p.child(false);
      p = fully_covered(left, block) ? p.child(true) : left;
    }
    return p;
  }

 private:
  const LabelledTreeState& st_;
  const EnumeratedClass& cls_;
  std::map<BitString, BitString> parent_;
  std::map<BitString, std::vector<BitString>> kids_;
  std::unordered_set<BitString> d_set_;
  std::vector<BitString> unlabelled_d_;
  std::map<BitString, std::uint64_t> next_level_count_;
  mutable std::unordered_map<std::uint64_t, std::optional<std::uint64_t>> level_index_memo_;
  std::size_t frontier_ = 0;
};

// ---------------------------------------------------------------------------
// Structured trees

Failure check_restriction(const Snapshot& s) {
  for (const auto& [where, sigma] : s.st().labels()) {
    if (!s.level_index(where.size())) {
      return fail(check::kRestriction, {where}, "length in {l_i}",
                  "length " + std::to_string(where.size()));
    }
  }
  return std::nullopt;
}

Failure check_layering(const Snapshot& s) {
  for (const auto& [where, sigma] : s.st().labels()) {
    auto idx = s.level_index(where.size());
    if (idx && *idx != sigma.size()) {
      return fail(check::kLayering, {where, sigma},
                  "|sigma| = " + std::to_string(*idx), label_text(sigma));
    }
  }
  return std::nullopt;
}

Failure check_completeness(const Snapshot& s) {
  std::unordered_set<BitString> placed;
  std::uint64_t longest = 0;
  for (const auto& [where, sigma] : s.st().labels()) {
    placed.insert(sigma);
    longest = std::max<std::uint64_t>(longest, sigma.size());
  }
  std::vector<std::uint64_t> per_length(longest + 1, 0);
  for (const auto& sigma : placed) ++per_length[sigma.size()];
  for (std::uint64_t n = 0; n <= longest; ++n) {
    if (n < 63 && per_length[n] == (std::uint64_t{1} << n)) continue;
    for (std::uint64_t v = 0; n < 63 && v < (std::uint64_t{1} << n); ++v) {
      BitString rho = BitString::from_index(v, n);
      if (!placed.contains(rho)) {
        return fail(check::kCompleteness, {rho}, "label " + label_text(rho) + " placed",
                    "missing while labels of length " + std::to_string(longest) + " exist");
      }
    }
  }
  return std::nullopt;
}

Failure check_uniqueness(const Snapshot& s) {
  std::unordered_map<BitString, BitString> first;
  for (const auto& rec : s.st().history()) {
    auto [it, inserted] = first.emplace(rec.where, rec.sigma);
    if (!inserted && it->second != rec.sigma) {
      return fail(check::kUniqueness, {rec.where}, "one label per string",
                  label_text(it->second) + " and " + label_text(rec.sigma));
    }
  }
  return std::nullopt;
}

Failure check_consistency(const Snapshot& s) {
  const auto& labels = s.st().labels();
  for (const auto& [where, sigma] : labels) {
    auto k = s.level_index(where.size());
    if (!k) continue;
    for (std::uint64_t i = 0; i < *k && i <= sigma.size(); ++i) {
      const BitString below = where.prefix(*s.level(i));
      auto it = labels.find(below);
      const BitString want = sigma.prefix(i);
      if (it == labels.end() || it->second != want) {
        return fail(check::kConsistency, {where, below}, label_text(want),
                    it == labels.end() ? "unlabelled" : label_text(it->second));
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Canonical process

Failure check_finiteness(const Snapshot& s) {
  auto bound = s.level(s.st().stage());
  if (!bound) return std::nullopt;
  for (const auto& [where, sigma] : s.st().labels()) {
    if (where.size() > *bound) {
      return fail(check::kFiniteness, {where},
                  "length <= l_" + std::to_string(s.st().stage()) + " = " +
                      std::to_string(*bound),
                  "length " + std::to_string(where.size()));
    }
  }
  return std::nullopt;
}

Failure check_persistence(const Snapshot& s) {
  std::unordered_set<BitString> seen;
  for (const auto& rec : s.st().history()) {
    if (!seen.insert(rec.where).second) continue;
    auto now = s.st().label_of(rec.where);
    if (now != rec.sigma) {
      return fail(check::kPersistence, {rec.where}, label_text(rec.sigma),
                  now ? label_text(*now) : "unlabelled");
    }
  }
  return std::nullopt;
}

Failure check_one_active(const Snapshot& s) {
  std::map<BitString, std::vector<BitString>> holders;
  for (const auto& [where, sigma] : s.st().labels()) holders[sigma];
  for (const auto& eta : s.st().active()) {
    auto sigma = s.st().label_of(eta);
    if (!sigma) return fail(check::kOneActivePerLabel, {eta}, "active strings labelled", "unlabelled");
    holders[*sigma].push_back(eta);
  }
  for (const auto& [sigma, active] : holders) {
    if (active.size() != 1) {
      std::vector<BitString> witness{sigma};
      witness.insert(witness.end(), active.begin(), active.end());
      return fail(check::kOneActivePerLabel, witness, "exactly one active " + label_text(sigma),
                  std::to_string(active.size()) + " active");
    }
  }
  return std::nullopt;
}

Failure check_active_is_latest(const Snapshot& s) {
  std::unordered_map<BitString, BitString> latest;
  for (const auto& rec : s.st().history()) latest[rec.sigma] = rec.where;
  for (const auto& eta : s.st().active()) {
    auto sigma = s.st().label_of(eta);
    if (!sigma) continue;
    auto it = latest.find(*sigma);
    if (it == latest.end() || it->second != eta) {
      return fail(check::kActiveIsLatest, {eta}, "last holder of " + label_text(*sigma),
                  it == latest.end() ? "never placed" : "last holder is " + it->second.display());
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Filtered enumeration

Failure check_filtered_enumeration(const Snapshot& s) {
  std::unordered_set<BitString> seen;
  std::optional<std::uint64_t> prev_stage;
  for (const auto& e : s.st().d()) {
    if (!seen.insert(e.bits).second) {
      return fail(check::kFilteredEnumeration, {e.bits}, "distinct D entries", "repeated");
    }
    if (!s.st().is_labelled(e.bits)) {
      return fail(check::kFilteredEnumeration, {e.bits}, "labelled D entry", "unlabelled");
    }
    if (e.stage > s.st().stage() || (prev_stage && e.stage <= *prev_stage)) {
      return fail(check::kFilteredEnumeration, {e.bits},
                  "at most one entry per stage, in stage order",
                  "entry stage " + std::to_string(e.stage));
    }
    prev_stage = e.stage;
  }
  return std::nullopt;
}

Failure check_d_within_q(const Snapshot& s) {
  for (const auto& e : s.st().d()) {
    const std::uint64_t seen_by = e.stage == 0 ? 0 : e.stage - 1;
    if (e.stage == 0 || !s.cls().has_prefix_in(e.bits, seen_by)) {
      return fail(check::kDWithinQ, {e.bits},
                  "prefix in Q_" + std::to_string(seen_by), "none");
    }
  }
  return std::nullopt;
}

Failure check_inactive_saturated_or_d(const Snapshot& s) {
  for (const auto& [where, sigma] : s.st().labels()) {
    if (s.st().is_active(where) || s.in_d(where)) continue;
    auto sat = s.saturated(where);
    if (sat && !*sat) {
      return fail(check::kInactiveSaturatedOrD, {where}, "saturated or in D",
                  "inactive, unsaturated, not in D");
    }
  }
  return std::nullopt;
}

Failure check_no_labels_above_d(const Snapshot& s) {
  const auto& labels = s.st().labels();
  for (const auto& e : s.st().d()) {
    auto it = labels.upper_bound(e.bits);
    if (it != labels.end() && e.bits.is_proper_prefix_of(it->first)) {
      return fail(check::kNoLabelsAboveD, {e.bits, it->first}, "no labelled extension",
                  it->first.display() + " labelled");
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Weight

Failure check_weight_bound(const Snapshot& s) {
  std::vector<BitString> d;
  for (const auto& e : s.st().d()) d.push_back(e.bits);
  const Dyadic total = weight_of_active(s.st()) + measure_of(d);
  if (total >= Dyadic::integer(1)) {
    return fail(check::kWeightBound, {}, "wgt(U) + mu(D) < 1", total.to_string());
  }
  return std::nullopt;
}

Failure check_ceiling(const Snapshot& s) {
  const Dyadic w = weight_of_active(s.st());
  const Dyadic c = weight_ceiling(s.st());
  if (w > c) return fail(check::kWeightCeiling, {}, "wgt(U) <= " + c.to_string(), w.to_string());
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Frontier facts, transcribed at the current frontier length

Failure check_active_frontier(const Snapshot& s) {
  for (const auto& [nu, sigma] : s.st().labels()) {
    if (s.st().is_active(nu) || s.has_d_prefix(nu)) continue;
    if (auto z = s.uncovered_extension(nu)) {
      return fail(check::kActiveFrontier, {*z, nu}, "longest labelled prefix active",
                  nu.display() + " inactive");
    }
  }
  return std::nullopt;
}

Failure check_escape(const Snapshot& s) {
  // good: some labelled leaf outside D at or above the string.
  std::unordered_set<BitString> good;
  const auto& labels = s.st().labels();
  for (auto it = labels.rbegin(); it != labels.rend(); ++it) {
    const BitString& w = it->first;
    if (s.is_leaf(w) && !s.in_d(w)) good.insert(w);
    if (good.contains(w)) good.insert(s.parent().at(w));
  }
  for (const auto& tau : s.st().active()) {
    if (s.st().is_labelled(tau) && !good.contains(tau)) {
      return fail(check::kEscape, {tau}, "a leaf above it outside D", "none");
    }
  }
  return std::nullopt;
}

Failure check_cover(const Snapshot& s) {
  // bad(nu): some frontier-length z above nu has no prefix in D and no active
  // prefix extending nu. Descendants precede ancestors in reverse order.
  std::unordered_map<BitString, BitString> bad;  // nu -> uncovered z
  const auto& labels = s.st().labels();
  for (auto it = labels.rbegin(); it != labels.rend(); ++it) {
    const BitString& nu = it->first;
    if (s.st().is_active(nu) || s.has_d_prefix(nu)) continue;
    std::optional<BitString> z = s.uncovered_extension(nu);
    if (!z) {
      for (const auto& c : s.kids(nu)) {
        if (auto b = bad.find(c); b != bad.end()) {
          z = b->second;
          break;
        }
      }
    }
    if (z) bad.emplace(nu, *z);
  }
  for (const auto& [nu, sigma] : labels) {
    if (auto b = bad.find(nu); b != bad.end()) {
      return fail(check::kCover, {nu, b->second}, "[[nu]] within [[D]] u [[U(nu)]]",
                  b->second.display() + " uncovered");
    }
  }
  return std::nullopt;
}

Failure check_leaf_depth(const Snapshot& s) {
  std::optional<BitString> first;
  for (const auto& [where, sigma] : s.st().labels()) {
    if (!s.is_leaf(where) || s.in_d(where)) continue;
    if (!first) {
      first = where;
    } else if (first->size() != where.size()) {
      return fail(check::kLeafDepth, {*first, where}, "leaves outside D of equal length",
                  std::to_string(first->size()) + " vs " + std::to_string(where.size()));
    }
  }
  return std::nullopt;
}

using CheckFn = Failure (*)(const Snapshot&);

const std::vector<std::pair<std::string_view, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string_view, CheckFn>> kChecks = {
      {check::kRestriction, check_restriction},
      {check::kLayering, check_layering},
      {check::kCompleteness, check_completeness},
      {check::kUniqueness, check_uniqueness},
      {check::kConsistency, check_consistency},
      {check::kFiniteness, check_finiteness},
      {check::kPersistence, check_persistence},
      {check::kOneActivePerLabel, check_one_active},
      {check::kActiveIsLatest, check_active_is_latest},
      {check::kFilteredEnumeration, check_filtered_enumeration},
      {check::kDWithinQ, check_d_within_q},
      {check::kInactiveSaturatedOrD, check_inactive_saturated_or_d},
      {check::kNoLabelsAboveD, check_no_labels_above_d},
      {check::kWeightBound, check_weight_bound},
      {check::kWeightCeiling, check_ceiling},
      {check::kActiveFrontier, check_active_frontier},
      {check::kEscape, check_escape},
      {check::kCover, check_cover},
      {check::kLeafDepth, check_leaf_depth},
  };
  return kChecks;
}

}  // namespace

std::vector<CheckResult> evaluate_checks(const LabelledTreeState& st,
                                         const EnumeratedClass& cls) {
  const Snapshot snap(st, cls);
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : registry()) out.push_back({std::string(name), fn(snap)});
  return out;
}

CheckReport check_all(const LabelledTreeState& st, const EnumeratedClass& cls) {
  const Snapshot snap(st, cls);
  CheckReport report;
  report.stage = st.stage();
  for (const auto& [name, fn] : registry()) {
    if (auto f = fn(snap)) {
      report.failed = std::move(f);
      return report;
    }
    report.passed.emplace_back(name);
  }
  return report;
}

}  // namespace kgc
