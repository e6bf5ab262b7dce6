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
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "kgcode/dyadic.hpp"

namespace kgc {

// The increasing sequence of tree depths (l_i) at which labels x_sigma with
// |sigma| = i sit, together with a certificate for the tail of the series
// sum_i 2^(i - l_i).
//
// tail_bound(N) must return an upper bound on sum_{i >= N} 2^(i - l_i), or
// nullopt when no certificate is available (e.g. the series diverges).
class LevelSchedule {
 public:
  using LevelFn = std::function<std::uint64_t(std::uint64_t)>;
  using TailFn = std::function<std::optional<Dyadic>(std::uint64_t)>;

  LevelSchedule(std::string description, LevelFn levels, TailFn tail,
                std::uint64_t default_horizon = 64,
                std::optional<std::uint64_t> defined_levels = std::nullopt);

  // l_i. Throws std::out_of_range past the defined range of an explicit
  // schedule.
  std::uint64_t level(std::uint64_t i) const;
  std::optional<Dyadic> tail_bound(std::uint64_t n) const { return tail_(n); }
  // 2^(i - l_i)
  Dyadic term(std::uint64_t i) const;

  // The i with l_i == length, if any.
  std::optional<std::uint64_t> index_of_level(std::uint64_t length) const;

  const std::string& description() const noexcept { return description_; }
  std::uint64_t default_horizon() const noexcept { return default_horizon_; }
  std::optional<std::uint64_t> defined_levels() const noexcept {
    return defined_levels_;
  }

  // l_i = 2i + c
  static LevelSchedule geometric(std::uint64_t c);
  // l_i = i + a * floor(log2(i + 1)) + b
  static LevelSchedule logarithmic(std::uint64_t a, std::uint64_t b);
  // Explicit l_0..l_{m-1} plus a certificate B(n) >= sum_{i >= n} 2^(i - l_i).
  static LevelSchedule explicit_levels(std::vector<std::uint64_t> levels,
                                       std::uint64_t cert_index,
                                       Dyadic cert_bound);

 private:
  std::string description_;
  LevelFn levels_;
  TailFn tail_;
  std::uint64_t default_horizon_;
  std::optional<std::uint64_t> defined_levels_;
};

struct ScheduleValidation {
  bool accepted = false;
  Dyadic partial_sum;           // sum_{i < horizon} 2^(i - l_i)
  std::optional<Dyadic> tail;   // tail_bound(horizon)
  std::optional<Dyadic> total;  // partial_sum + tail, the certified sum
  std::string reason;           // why it was rejected; empty on accept
};

// Accepts iff the certified total is strictly below `budget`.
// Throws std::invalid_argument when budget == 0 or horizon == 0.
ScheduleValidation validate_schedule(const LevelSchedule& schedule,
                                     const Dyadic& budget,
                                     std::uint64_t horizon);

// l_i = i + g(i), tail_bound(N) = tail_cert(N). Throws std::invalid_argument
// if i + g(i) fails to increase strictly on [0, check_upto].
LevelSchedule from_redundancy(std::function<std::uint64_t(std::uint64_t)> g,
                              LevelSchedule::TailFn tail_cert,
                              std::string description = "redundancy",
                              std::uint64_t check_upto = 64);

// CLI mini-language: "geometric:c", "log:a,b", "file:<path>".
LevelSchedule parse_schedule(const std::string& spec);
// "i<TAB>l_i" lines then "tail<TAB>N<TAB>num<TAB>exp"; '#' comments.
LevelSchedule read_schedule_file(std::istream& in, const std::string& name);

std::uint64_t floor_log2(std::uint64_t v);

}  // namespace kgc
