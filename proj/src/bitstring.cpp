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

#include "kgcode/bitstring.hpp"

#include <stdexcept>

namespace kgc {

BitString::BitString(std::string_view bits) : bits_(bits) {
  for (char c : bits_) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("BitString: invalid character in '" +
                                  std::string(bits) + "'");
    }
  }
}

BitString BitString::zeros(std::size_t n) {
  BitString b;
  b.bits_.assign(n, '0');
  return b;
}

BitString BitString::ones(std::size_t n) {
  BitString b;
  b.bits_.assign(n, '1');
  return b;
}

BitString BitString::from_index(std::uint64_t value, std::size_t width) {
  BitString b = zeros(width);
  for (std::size_t i = 0; i < width && i < 64; ++i) {
    if ((value >> i) & 1U) b.bits_[width - 1 - i] = '1';
  }
  return b;
}

BitString BitString::prefix(std::size_t n) const {
  if (n > bits_.size()) throw std::out_of_range("BitString::prefix");
  BitString b;
  b.bits_ = bits_.substr(0, n);
  return b;
}

BitString BitString::child(bool bit) const {
  BitString b = *this;
  b.bits_.push_back(bit ? '1' : '0');
  return b;
}

BitString BitString::operator+(const BitString& tail) const {
  BitString b = *this;
  b.bits_ += tail.bits_;
  return b;
}

bool BitString::is_prefix_of(const BitString& other) const noexcept {
  return bits_.size() <= other.bits_.size() &&
         other.bits_.compare(0, bits_.size(), bits_) == 0;
}

std::uint64_t BitString::to_index() const {
  if (bits_.size() > 64) throw std::out_of_range("BitString::to_index");
  std::uint64_t v = 0;
  for (char c : bits_) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  return v;
}

std::string BitString::display() const { return bits_.empty() ? "λ" : bits_; }

std::strong_ordering lex_compare(const BitString& a, const BitString& b) {
  return a <=> b;
}

}  // namespace kgc
