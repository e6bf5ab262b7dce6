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
#include <optional>
#include <vector>

#include "kgcode/bitstring.hpp"
#include "kgcode/piclass.hpp"

namespace kgc {

// Bit-by-bit coder in the style of Kucera: at every level l_n each sigma of
// length n owns one extendible code string, and l_{n+1} is the least length
// at which every one of them has two extendible extensions. sigma*0 and
// sigma*1 take the two lexicographically least of those.
class KuceraCode {
 public:
  // Throws std::invalid_argument if lambda is not extendible, and
  // std::runtime_error if some level search exceeds max_len + n_max + 2.
  KuceraCode(const EnumeratedClass& cls, std::uint64_t n_max);

  const std::vector<std::uint64_t>& levels() const noexcept { return levels_; }
  std::uint64_t n_max() const noexcept { return levels_.size() - 1; }

  // Throws std::out_of_range when |x| > n_max.
  const BitString& encode(const BitString& x) const;
  // Follows the assignment bit by bit; nullopt when y is not a code string.
  // Throws std::invalid_argument when |y| is not one of the levels.
  std::optional<BitString> decode(const BitString& y) const;

 private:
  std::vector<std::uint64_t> levels_;
  // codes_[n][i]: code of the length-n string with index i.
  std::vector<std::vector<BitString>> codes_;
};

// The levels alone.
std::vector<std::uint64_t> kucera_levels(const EnumeratedClass& cls, std::uint64_t n_max);

// Up to `limit` lexicographically least extendible extensions of tau of
// the given length.
std::vector<BitString> extendible_extensions(const BitString& tau, std::uint64_t length,
                                             const EnumeratedClass& cls, std::size_t limit);

}  // namespace kgc
