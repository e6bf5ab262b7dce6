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

#include "kgcode/piclass.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace kgc {

Dyadic measure_of(std::span<const BitString> strings) {
  std::vector<BitString> sorted(strings.begin(), strings.end());
  std::sort(sorted.begin(), sorted.end());
  // In lexicographic order the extensions of a kept string follow it
  // contiguously, so comparing against the last kept string suffices.
  Dyadic total;
  const BitString* last = nullptr;
  for (const auto& s : sorted) {
    if (last && last->is_prefix_of(s)) continue;
    total += Dyadic::pow2(-static_cast<std::int64_t>(s.size()));
    last = &s;
  }
  return total;
}

EnumeratedClass::EnumeratedClass(std::vector<ClassEntry> entries)
    : entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    auto [it, inserted] = first_stage_.emplace(e.bits, e.stage);
    if (!inserted) it->second = std::min(it->second, e.stage);
    max_len_ = std::max(max_len_, e.bits.size());
    complete_by_ = std::max(complete_by_, e.stage);
  }
  for (const auto& [bits, stage] : first_stage_) sorted_.push_back(bits);
  std::sort(sorted_.begin(), sorted_.end());
}

std::vector<BitString> EnumeratedClass::strings_at(std::uint64_t stage) const {
  std::vector<BitString> out;
  for (const auto& s : sorted_) {
    if (first_stage_.at(s) <= stage) out.push_back(s);
  }
  return out;
}

std::vector<BitString> EnumeratedClass::all_strings() const { return sorted_; }

bool EnumeratedClass::has_prefix_in(const BitString& z,
                                    std::uint64_t stage) const {
  const std::size_t limit = std::min(z.size(), max_len_);
  for (std::size_t n = 0; n <= limit; ++n) {
    auto it = first_stage_.find(z.prefix(n));
    if (it != first_stage_.end() && it->second <= stage) return true;
  }
  return false;
}

bool EnumeratedClass::has_prefix_in_final(const BitString& z) const {
  return has_prefix_in(z, complete_by_);
}

bool EnumeratedClass::has_proper_extension_in_final(const BitString& tau) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), tau);
  return it != sorted_.end() && tau.is_proper_prefix_of(*it);
}

Dyadic EnumeratedClass::measure() const { return measure_of(sorted_); }

bool is_extendible(const BitString& tau, const EnumeratedClass& cls) {
  if (cls.has_prefix_in_final(tau)) return false;
  if (!cls.has_proper_extension_in_final(tau)) return true;
  return is_extendible(tau.child(false), cls) ||
         is_extendible(tau.child(true), cls);
}

EnumeratedClass generate_class(std::uint64_t seed, const Dyadic& measure_cap,
                               std::uint32_t depth, std::uint32_t stages) {
  if (measure_cap.is_zero() || measure_cap >= Dyadic::integer(1)) {
    throw std::invalid_argument("generate_class: need 0 < measure_cap < 1");
  }
  if (depth == 0 || stages == 0) {
    throw std::invalid_argument("generate_class: depth and stages must be >= 1");
  }
  // Raw engine output only: std distributions are not portable bit-for-bit.
  std::mt19937_64 rng(seed);
  const std::uint64_t target = 1 + rng() % (2 * depth);
  std::vector<ClassEntry> entries;
  std::vector<BitString> strings;
  for (std::uint64_t attempt = 0; attempt < 8 * target && entries.size() < target;
       ++attempt) {
    const std::size_t len = 1 + rng() % depth;
    BitString s = BitString::from_index(rng(), len);
    const std::uint64_t stage = 1 + rng() % stages;
    strings.push_back(s);
    if (measure_of(strings) < measure_cap) {
      entries.push_back({stage, std::move(s)});
    } else {
      strings.pop_back();
    }
  }
  return EnumeratedClass(std::move(entries));
}

EnumeratedClass read_class(std::istream& in, const std::string& name) {
  std::vector<ClassEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    const std::string where = name + ":" + std::to_string(lineno);
    if (tab == std::string::npos) {
      throw std::invalid_argument(where + ": expected stage<TAB>bits");
    }
    std::string stage = line.substr(0, tab);
    if (stage.empty() || stage.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument(where + ": bad stage '" + stage + "'");
    }
    try {
      entries.push_back({std::stoull(stage), BitString(line.substr(tab + 1))});
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument(where + ": bad bit string");
    }
  }
  return EnumeratedClass(std::move(entries));
}

EnumeratedClass load_class_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open class file " + path);
  return read_class(in, path);
}

void write_class(std::ostream& out, const EnumeratedClass& cls) {
  for (const auto& e : cls.entries()) out << e.stage << '\t' << e.bits.str() << '\n';
}

}  // namespace kgc
