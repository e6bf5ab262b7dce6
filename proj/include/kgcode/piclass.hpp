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
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgcode/bitstring.hpp"
#include "kgcode/dyadic.hpp"

namespace kgc {

// mu([[S]]), overlapping cylinders counted once.
Dyadic measure_of(std::span<const BitString> strings);

struct ClassEntry {
  std::uint64_t stage = 0;
  BitString bits;
  bool operator==(const ClassEntry&) const = default;
};

// A finite, stage-annotated excluded set Q standing for the effectively
// closed class P = 2^omega - [[Q]]. Q_s is the set of strings enumerated by
// stage s; after complete_by() nothing new appears.
class EnumeratedClass {
 public:
  EnumeratedClass() = default;
  explicit EnumeratedClass(std::vector<ClassEntry> entries);

  const std::vector<ClassEntry>& entries() const noexcept { return entries_; }
  std::size_t max_len() const noexcept { return max_len_; }
  std::uint64_t complete_by() const noexcept { return complete_by_; }

  // Q_s, sorted and without duplicates.
  std::vector<BitString> strings_at(std::uint64_t stage) const;
  std::vector<BitString> all_strings() const;

  // Some prefix (not necessarily proper) of z lies in Q_stage.
  bool has_prefix_in(const BitString& z, std::uint64_t stage) const;
  bool has_prefix_in_final(const BitString& z) const;
  // Some element of Q_inf properly extends tau.
  bool has_proper_extension_in_final(const BitString& tau) const;

  Dyadic measure() const;

 private:
  std::vector<ClassEntry> entries_;
  // string -> earliest stage at which it is enumerated
  std::unordered_map<BitString, std::uint64_t> first_stage_;
  std::vector<BitString> sorted_;
  std::size_t max_len_ = 0;
  std::uint64_t complete_by_ = 0;
};

// [[tau]] not contained in [[Q_inf]].
bool is_extendible(const BitString& tau, const EnumeratedClass& cls);

// Seed-deterministic fuzz class with measure strictly below measure_cap,
// strings of length in [1, depth] and stages in [1, stages].
// Throws std::invalid_argument unless 0 < measure_cap < 1.
EnumeratedClass generate_class(std::uint64_t seed, const Dyadic& measure_cap,
                               std::uint32_t depth, std::uint32_t stages);

// "stage<TAB>bits" per line, '#' comments and blank lines ignored.
EnumeratedClass read_class(std::istream& in, const std::string& name = "class");
EnumeratedClass load_class_file(const std::string& path);
void write_class(std::ostream& out, const EnumeratedClass& cls);

}  // namespace kgc
