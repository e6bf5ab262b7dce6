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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace kgc {

// A finite binary word. Doubles as a node of the full binary tree, as the
// payload sigma of a label x_sigma, and as a finite oracle prefix.
//
// Ordering is lexicographic with 0 < 1 and a proper prefix preceding all of
// its extensions, which is exactly std::string ordering over '0'/'1'.
class BitString {
 public:
  BitString() = default;

  // Throws std::invalid_argument on characters other than '0' and '1'.
  explicit BitString(std::string_view bits);

  static BitString zeros(std::size_t n);
  static BitString ones(std::size_t n);
  // Big-endian binary rendering of `value` in exactly `width` bits.
  static BitString from_index(std::uint64_t value, std::size_t width);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i] == '1'; }

  // First n bits; n must not exceed size().
  BitString prefix(std::size_t n) const;
  BitString child(bool bit) const;
  BitString operator+(const BitString& tail) const;

  bool is_prefix_of(const BitString& other) const noexcept;
  bool is_proper_prefix_of(const BitString& other) const noexcept {
    return size() < other.size() && is_prefix_of(other);
  }
  bool comparable_with(const BitString& other) const noexcept {
    return is_prefix_of(other) || other.is_prefix_of(*this);
  }

  // Big-endian value of the whole string; inverse of from_index.
  std::uint64_t to_index() const;

  const std::string& str() const noexcept { return bits_; }
  // "λ" for the empty string, the bits otherwise.
  std::string display() const;

  auto operator<=>(const BitString&) const = default;
  bool operator==(const BitString&) const = default;

 private:
  std::string bits_;
};

std::strong_ordering lex_compare(const BitString& a, const BitString& b);

}  // namespace kgc

template <>
struct std::hash<kgc::BitString> {
  std::size_t operator()(const kgc::BitString& b) const noexcept {
    return std::hash<std::string>{}(b.str());
  }
};
