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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kgcode/bitstring.hpp"
#include "kgcode/dyadic.hpp"
#include "kgcode/labelling.hpp"
#include "kgcode/piclass.hpp"

namespace kgc {

namespace check {
inline constexpr std::string_view kRestriction = "Restriction";
inline constexpr std::string_view kLayering = "Layering";
inline constexpr std::string_view kCompleteness = "Completeness";
inline constexpr std::string_view kUniqueness = "Uniqueness";
inline constexpr std::string_view kConsistency = "Consistency";
inline constexpr std::string_view kFiniteness = "Finiteness";
inline constexpr std::string_view kPersistence = "Persistence";
inline constexpr std::string_view kOneActivePerLabel = "one-active-per-label";
inline constexpr std::string_view kActiveIsLatest = "ActiveIsLatest";
inline constexpr std::string_view kFilteredEnumeration = "FilteredEnumeration";
inline constexpr std::string_view kDWithinQ = "DWithinQ";
inline constexpr std::string_view kInactiveSaturatedOrD = "InactiveSaturatedOrD";
inline constexpr std::string_view kNoLabelsAboveD = "NoLabelsAboveD";
inline constexpr std::string_view kWeightBound = "WeightBound";
inline constexpr std::string_view kWeightCeiling = "WeightCeiling";
inline constexpr std::string_view kActiveFrontier = "ActiveFrontier";
inline constexpr std::string_view kEscape = "Escape";
inline constexpr std::string_view kCover = "Cover";
inline constexpr std::string_view kLeafDepth = "LeafDepth";
}  // namespace check

// All check names in evaluation order.
const std::vector<std::string_view>& check_names();

struct CheckFailure {
  std::string check;
  std::vector<BitString> witness;
  std::string expected;
  std::string actual;
};

struct CheckResult {
  std::string check;
  std::optional<CheckFailure> failure;
  bool passed() const noexcept { return !failure; }
};

struct CheckReport {
  std::uint64_t stage = 0;
  std::vector<std::string> passed;
  std::optional<CheckFailure> failed;
  bool ok() const noexcept { return !failed; }
};

// Every check, independently. Used for fault isolation.
std::vector<CheckResult> evaluate_checks(const LabelledTreeState& st,
                                         const EnumeratedClass& cls);

// Checks in order until the first failure.
CheckReport check_all(const LabelledTreeState& st, const EnumeratedClass& cls);

// wgt(U_s) = sum over active strings of 2^-|eta|.
Dyadic weight_of_active(const LabelledTreeState& st);
// sum_{n <= m} 2^(n - l_n), m the longest placed sigma.
Dyadic weight_ceiling(const LabelledTreeState& st);
bool check_weight_ceiling(const LabelledTreeState& st);

// Nearest labelled proper prefix of every labelled string (lambda when none).
std::map<BitString, BitString> labelled_parents(const LabelledTreeState& st);

// Evaluates check_all along a run, one stage at a time. Between calls the
// state must have advanced by exactly one recorded event (the engine's step
// or apply_event). The checker keeps its own indexes, built from the label
// map, active set, D and history, and updates them from that event. Only the
// strings the event touched are re-examined; anything it cannot vouch for
// locally (a failure, an unexpected delta, a skipped stage) falls back to
// check_all on the whole state, whose report is then returned.
class StageChecker {
 public:
  explicit StageChecker(EnumeratedClass cls) : cls_(std::move(cls)) {}

  CheckReport observe(const LabelledTreeState& st);

  // How many observations needed the whole-state check.
  std::uint64_t full_checks() const noexcept { return full_checks_; }
  std::uint64_t observations() const noexcept { return observations_; }

 private:
  CheckReport full(const LabelledTreeState& st);
  void rebuild(const LabelledTreeState& st);
  bool advance(const LabelledTreeState& st, const StageEvent& ev);

  void add_open(const BitString& leaf);
  void remove_open(const BitString& leaf);
  bool is_open(const BitString& w) const;
  bool d_prefixed(const BitString& w) const;
  std::optional<bool> saturated(const LabelledTreeState& st, const BitString& rho) const;

  EnumeratedClass cls_;
  bool synced_ = false;
  bool failed_ = false;
  std::uint64_t full_checks_ = 0;
  std::uint64_t observations_ = 0;

  std::map<BitString, BitString> labels_;
  std::unordered_map<BitString, BitString> parent_;
  std::unordered_map<BitString, std::uint64_t> kid_count_;
  std::unordered_map<BitString, Dyadic> kid_weight_;
  std::unordered_map<BitString, std::uint64_t> next_count_;
  std::unordered_map<BitString, std::uint64_t> open_below_;
  std::map<std::size_t, std::uint64_t> open_lengths_;
  std::unordered_set<BitString> d_set_;
  std::set<BitString> d_minimal_;
  Dyadic d_measure_;
  std::uint64_t last_d_stage_ = 0;
  std::unordered_set<BitString> active_;
  std::unordered_map<BitString, std::set<BitString>> holders_;
  Dyadic weight_;
  std::unordered_map<BitString, BitString> first_sigma_;
  std::unordered_map<BitString, BitString> latest_;
  std::unordered_set<BitString> placed_sigmas_;
  std::vector<std::uint64_t> sigmas_per_length_;
  std::size_t frontier_ = 0;
  std::size_t longest_sigma_ = 0;
  Dyadic ceiling_;
  std::size_t ceiling_for_ = 0;
  std::uint64_t stage_ = 0;
  std::size_t trace_seen_ = 0;
  std::size_t history_seen_ = 0;
  std::vector<BitString> zeroed_;
};

}  // namespace kgc
