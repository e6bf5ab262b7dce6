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

#include "kgcode/schedule.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kgc {

std::uint64_t floor_log2(std::uint64_t v) {
  if (v == 0) throw std::domain_error("floor_log2(0)");
  std::uint64_t r = 0;
  while (v >>= 1) ++r;
  return r;
}

LevelSchedule::LevelSchedule(std::string description, LevelFn levels,
                             TailFn tail, std::uint64_t default_horizon,
                             std::optional<std::uint64_t> defined_levels)
    : description_(std::move(description)),
      levels_(std::move(levels)),
      tail_(std::move(tail)),
      default_horizon_(default_horizon),
      defined_levels_(defined_levels) {}

std::uint64_t LevelSchedule::level(std::uint64_t i) const {
  if (defined_levels_ && i >= *defined_levels_) {
    throw std::out_of_range("schedule '" + description_ + "' defines only " +
                            std::to_string(*defined_levels_) + " levels");
  }
  return levels_(i);
}

Dyadic LevelSchedule::term(std::uint64_t i) const {
  return Dyadic::pow2(static_cast<std::int64_t>(i) -
                      static_cast<std::int64_t>(level(i)));
}

std::optional<std::uint64_t> LevelSchedule::index_of_level(
    std::uint64_t length) const {
  for (std::uint64_t i = 0; i <= length; ++i) {
    if (defined_levels_ && i >= *defined_levels_) return std::nullopt;
    std::uint64_t l = levels_(i);
    if (l == length) return i;
    if (l > length) return std::nullopt;
  }
  return std::nullopt;
}

LevelSchedule LevelSchedule::geometric(std::uint64_t c) {
  auto levels = [c](std::uint64_t i) { return 2 * i + c; };
  // sum_{i >= n} 2^(-i - c) = 2^(1 - n - c)
  auto tail = [c](std::uint64_t n) -> std::optional<Dyadic> {
    return Dyadic::pow2(1 - static_cast<std::int64_t>(n) -
                        static_cast<std::int64_t>(c));
  };
  return LevelSchedule("geometric:" + std::to_string(c), levels, tail);
}

LevelSchedule LevelSchedule::logarithmic(std::uint64_t a, std::uint64_t b) {
  auto levels = [a, b](std::uint64_t i) {
    return i + a * floor_log2(i + 1) + b;
  };
  auto tail = [a, b](std::uint64_t n) -> std::optional<Dyadic> {
    if (a < 2) return std::nullopt;
    const auto ia = static_cast<std::int64_t>(a);
    const auto ib = static_cast<std::int64_t>(b);
    // Terms are constant (2^(-aK-b)) on blocks i+1 in [2^K, 2^(K+1)).
    std::uint64_t k = floor_log2(n + 1);
    std::uint64_t block_end = (std::uint64_t{2} << k) - 1;  // first i of K+1
    Dyadic rest = Dyadic::integer(block_end - n)
                      .scaled(-ia * static_cast<std::int64_t>(k) - ib);
    // sum over blocks >= K+1 of 2^(k(1-a)-b) <= 2^((K+1)(1-a)-b+1)
    rest += Dyadic::pow2((static_cast<std::int64_t>(k) + 1) * (1 - ia) - ib + 1);
    return rest;
  };
  return LevelSchedule("log:" + std::to_string(a) + "," + std::to_string(b),
                       levels, tail);
}

LevelSchedule LevelSchedule::explicit_levels(std::vector<std::uint64_t> levels,
                                             std::uint64_t cert_index,
                                             Dyadic cert_bound) {
  const std::uint64_t m = levels.size();
  if (cert_index > m) {
    throw std::invalid_argument("tail certificate index beyond listed levels");
  }
  auto term = [levels](std::uint64_t i) {
    return Dyadic::pow2(static_cast<std::int64_t>(i) -
                        static_cast<std::int64_t>(levels[i]));
  };
  auto tail = [=](std::uint64_t n) -> std::optional<Dyadic> {
    Dyadic b = cert_bound;
    if (n <= cert_index) {
      for (std::uint64_t i = n; i < cert_index; ++i) b += term(i);
      return b;
    }
    Dyadic used;
    for (std::uint64_t i = cert_index; i < std::min(n, m); ++i) used += term(i);
    if (used > b) return std::nullopt;  // certificate contradicts the levels
    return b - used;
  };
  auto level_fn = [levels](std::uint64_t i) { return levels.at(i); };
  return LevelSchedule("explicit", level_fn, tail, cert_index, m);
}

ScheduleValidation validate_schedule(const LevelSchedule& schedule,
                                     const Dyadic& budget,
                                     std::uint64_t horizon) {
  if (budget.is_zero()) throw std::invalid_argument("budget must be positive");
  if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
  ScheduleValidation v;
  std::uint64_t prev = 0;
  for (std::uint64_t i = 0; i < horizon; ++i) {
    std::uint64_t l;
    try {
      l = schedule.level(i);
    } catch (const std::out_of_range& e) {
      v.reason = e.what();
      return v;
    }
    if (i > 0 && l <= prev) {
      v.reason = "levels not strictly increasing at i=" + std::to_string(i);
      return v;
    }
    prev = l;
    v.partial_sum += schedule.term(i);
  }
  v.tail = schedule.tail_bound(horizon);
  if (!v.tail) {
    v.reason = "no tail certificate at N=" + std::to_string(horizon);
    return v;
  }
  if (!schedule.defined_levels() || horizon < *schedule.defined_levels()) {
    if (*v.tail < schedule.term(horizon)) {
      v.reason = "tail certificate below its own first term";
      return v;
    }
  }
  v.total = v.partial_sum + *v.tail;
  if (*v.total < budget) {
    v.accepted = true;
  } else {
    v.reason = "certified sum " + v.total->to_string() +
               " is not strictly below budget " + budget.to_string();
  }
  return v;
}

LevelSchedule from_redundancy(std::function<std::uint64_t(std::uint64_t)> g,
                              LevelSchedule::TailFn tail_cert,
                              std::string description,
                              std::uint64_t check_upto) {
  for (std::uint64_t i = 0; i < check_upto; ++i) {
    if (i + 1 + g(i + 1) <= i + g(i)) {
      throw std::invalid_argument("i + g(i) not strictly increasing at i=" +
                                  std::to_string(i));
    }
  }
  auto levels = [g](std::uint64_t i) { return i + g(i); };
  return LevelSchedule(std::move(description), levels, std::move(tail_cert));
}

namespace {

std::uint64_t to_u64(const std::string& s, const std::string& context) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("bad number '" + s + "' in " + context);
  }
  return std::stoull(s);
}

}  // namespace

LevelSchedule read_schedule_file(std::istream& in, const std::string& name) {
  std::vector<std::uint64_t> levels;
  std::optional<std::pair<std::uint64_t, Dyadic>> cert;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
    const std::string where = name + ":" + std::to_string(lineno);
    if (cert) throw std::invalid_argument(where + ": data after tail line");
    if (fields.size() == 4 && fields[0] == "tail") {
      cert.emplace(to_u64(fields[1], where),
                   Dyadic(BigInt(fields[2]), to_u64(fields[3], where)));
      continue;
    }
    if (fields.size() != 2) throw std::invalid_argument(where + ": expected i<TAB>l_i");
    if (to_u64(fields[0], where) != levels.size()) {
      throw std::invalid_argument(where + ": indices must be 0,1,2,... in order");
    }
    levels.push_back(to_u64(fields[1], where));
  }
  if (!cert) throw std::invalid_argument(name + ": missing tail line");
  return LevelSchedule::explicit_levels(std::move(levels), cert->first,
                                        cert->second);
}

LevelSchedule parse_schedule(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("schedule spec '" + spec + "' lacks ':'");
  }
  std::string kind = spec.substr(0, colon);
  std::string arg = spec.substr(colon + 1);
  if (kind == "geometric") return LevelSchedule::geometric(to_u64(arg, spec));
  if (kind == "log") {
    auto comma = arg.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("log schedule needs 'log:a,b'");
    }
    return LevelSchedule::logarithmic(to_u64(arg.substr(0, comma), spec),
                                      to_u64(arg.substr(comma + 1), spec));
  }
  if (kind == "file") {
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open schedule file " + arg);
    return read_schedule_file(in, arg);
  }
  throw std::invalid_argument("unknown schedule kind '" + kind + "'");
}

}  // namespace kgc
