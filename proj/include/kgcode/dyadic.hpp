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
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace kgc {

using BigInt = boost::multiprecision::cpp_int;

// Exact non-negative dyadic rational numerator / 2^exponent.
//
// Always kept canonical (numerator odd, or zero with exponent 0), so equal
// values have equal representations. Measures and weights in this library
// are compared with strict inequalities; never route them through doubles.
class Dyadic {
 public:
  Dyadic() = default;
  // Throws std::domain_error on a negative numerator.
  Dyadic(BigInt numerator, std::uint64_t exponent);
  static Dyadic integer(std::uint64_t v) { return Dyadic(BigInt(v), 0); }
  // 2^e for any integer e.
  static Dyadic pow2(std::int64_t e);

  // Parses "n", "n/d" (d a power of two) or "n/2^e".
  static Dyadic parse(const std::string& text);

  const BigInt& numerator() const noexcept { return num_; }
  std::uint64_t exponent() const noexcept { return exp_; }
  bool is_zero() const noexcept { return num_ == 0; }

  Dyadic& operator+=(const Dyadic& rhs);
  // Throws std::domain_error when the result would be negative.
  Dyadic& operator-=(const Dyadic& rhs);
  Dyadic& operator*=(const Dyadic& rhs);
  // Multiplication by 2^e.
  Dyadic scaled(std::int64_t e) const;

  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }
  friend Dyadic operator*(Dyadic a, const Dyadic& b) { return a *= b; }

  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);
  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exp_ == b.exp_ && a.num_ == b.num_;
  }

  // "0", "3/8", "5" ...
  std::string to_string() const;
  // Lossy; reporting only.
  double to_double() const;

 private:
  void normalize();

  BigInt num_ = 0;
  std::uint64_t exp_ = 0;
};

inline std::string to_string(const Dyadic& d) { return d.to_string(); }

}  // namespace kgc
