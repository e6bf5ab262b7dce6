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

#include "kgcode/dyadic.hpp"

#include <cmath>
#include <stdexcept>

namespace kgc {

namespace {

BigInt shifted(const BigInt& v, std::uint64_t bits) {
  return v << static_cast<unsigned>(bits);
}

std::uint64_t trailing_zeros(const BigInt& v) {
  return boost::multiprecision::lsb(v);
}

}  // namespace

Dyadic::Dyadic(BigInt numerator, std::uint64_t exponent)
    : num_(std::move(numerator)), exp_(exponent) {
  if (num_ < 0) throw std::domain_error("Dyadic: negative numerator");
  normalize();
}

Dyadic Dyadic::pow2(std::int64_t e) {
  if (e >= 0) return Dyadic(shifted(BigInt(1), static_cast<std::uint64_t>(e)), 0);
  return Dyadic(BigInt(1), static_cast<std::uint64_t>(-e));
}

Dyadic Dyadic::parse(const std::string& text) {
  auto slash = text.find('/');
  auto parse_uint = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("Dyadic: cannot parse '" + text + "'");
    }
    return BigInt(s);
  };
  if (slash == std::string::npos) return Dyadic(parse_uint(text), 0);
  BigInt num = parse_uint(text.substr(0, slash));
  std::string den = text.substr(slash + 1);
  if (den.rfind("2^", 0) == 0) {
    return Dyadic(num, static_cast<std::uint64_t>(parse_uint(den.substr(2))));
  }
  BigInt d = parse_uint(den);
  if (d == 0 || (d & (d - 1)) != 0) {
    throw std::invalid_argument("Dyadic: denominator of '" + text +
                                "' is not a power of two");
  }
  return Dyadic(num, boost::multiprecision::msb(d));
}

void Dyadic::normalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  std::uint64_t tz = std::min<std::uint64_t>(trailing_zeros(num_), exp_);
  if (tz > 0) {
    num_ >>= static_cast<unsigned>(tz);
    exp_ -= tz;
  }
}

Dyadic& Dyadic::operator+=(const Dyadic& rhs) {
  if (exp_ >= rhs.exp_) {
    num_ += shifted(rhs.num_, exp_ - rhs.exp_);
  } else {
    num_ = shifted(num_, rhs.exp_ - exp_) + rhs.num_;
    exp_ = rhs.exp_;
  }
  normalize();
  return *this;
}

Dyadic& Dyadic::operator-=(const Dyadic& rhs) {
  BigInt a = num_, b = rhs.num_;
  std::uint64_t e = std::max(exp_, rhs.exp_);
  a = shifted(a, e - exp_);
  b = shifted(b, e - rhs.exp_);
  if (a < b) throw std::domain_error("Dyadic: negative difference");
  num_ = a - b;
  exp_ = e;
  normalize();
  return *this;
}

Dyadic& Dyadic::operator*=(const Dyadic& rhs) {
  num_ *= rhs.num_;
  exp_ += rhs.exp_;
  normalize();
  return *this;
}

Dyadic Dyadic::scaled(std::int64_t e) const {
  return *this * pow2(e);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  std::uint64_t e = std::max(a.exp_, b.exp_);
  BigInt x = shifted(a.num_, e - a.exp_);
  BigInt y = shifted(b.num_, e - b.exp_);
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Dyadic::to_string() const {
  if (exp_ == 0) return num_.str();
  if (exp_ <= 62) {
    return num_.str() + "/" + std::to_string(std::uint64_t{1} << exp_);
  }
  return num_.str() + "/2^" + std::to_string(exp_);
}

double Dyadic::to_double() const {
  return std::ldexp(num_.convert_to<double>(), -static_cast<int>(exp_));
}

}  // namespace kgc
