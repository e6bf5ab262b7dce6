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

#include "kgcode/baseline.hpp"

#include <stdexcept>
#include <string>

namespace kgc {

namespace {

void collect(const BitString& prefix, std::uint64_t length, const EnumeratedClass& cls,
             std::size_t limit, std::vector<BitString>& out) {
  if (out.size() >= limit || !is_extendible(prefix, cls)) return;
  if (prefix.size() == length) {
    out.push_back(prefix);
    return;
  }
  collect(prefix.child(false), length, cls, limit, out);
  collect(prefix.child(true), length, cls, limit, out);
}

}  // namespace

std::vector<BitString> extendible_extensions(const BitString& tau, std::uint64_t length,
                                             const EnumeratedClass& cls, std::size_t limit) {
  std::vector<BitString> out;
  if (length >= tau.size()) collect(tau, length, cls, limit, out);
  return out;
}

KuceraCode::KuceraCode(const EnumeratedClass& cls, std::uint64_t n_max) {
  if (!is_extendible(BitString(), cls)) {
    throw std::invalid_argument("KuceraCode: the class is empty");
  }
  if (n_max >= 30) throw std::invalid_argument("KuceraCode: n_max too large");
  const std::uint64_t bound = cls.max_len() + n_max + 2;

  // The root needs one extendible string; lambda sits on level 0.
  levels_.push_back(1);
  codes_.push_back({extendible_extensions(BitString(), 1, cls, 1).front()});

  for (std::uint64_t n = 0; n < n_max; ++n) {
    const auto& current = codes_.back();
    std::uint64_t next = levels_.back() + 1;
    for (;; ++next) {
      if (next > bound) {
        throw std::runtime_error("KuceraCode: no splitting level <= " + std::to_string(bound));
      }
      bool all_split = true;
      for (const auto& tau : current) {
        if (extendible_extensions(tau, next, cls, 2).size() < 2) {
          all_split = false;
          break;
        }
      }
      if (all_split) break;
    }
    std::vector<BitString> codes(current.size() * 2);
    for (std::size_t i = 0; i < current.size(); ++i) {
      auto pair = extendible_extensions(current[i], next, cls, 2);
      codes[2 * i] = pair[0];
      codes[2 * i + 1] = pair[1];
    }
    levels_.push_back(next);
    codes_.push_back(std::move(codes));
  }
}

const BitString& KuceraCode::encode(const BitString& x) const {
  if (x.size() >= codes_.size()) throw std::out_of_range("KuceraCode::encode: x too long");
  return codes_[x.size()][x.to_index()];
}

std::optional<BitString> KuceraCode::decode(const BitString& y) const {
  std::size_t n = 0;
  while (n < levels_.size() && levels_[n] != y.size()) ++n;
  if (n == levels_.size()) {
    throw std::invalid_argument("KuceraCode::decode: length is not a level");
  }
  if (codes_[0][0] != y.prefix(levels_[0])) return std::nullopt;
  std::uint64_t index = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const BitString head = y.prefix(levels_[k]);
    if (codes_[k][2 * index] == head) {
      index = 2 * index;
    } else if (codes_[k][2 * index + 1] == head) {
      index = 2 * index + 1;
    } else {
      return std::nullopt;
    }
  }
  return BitString::from_index(index, n);
}

std::vector<std::uint64_t> kucera_levels(const EnumeratedClass& cls, std::uint64_t n_max) {
  return KuceraCode(cls, n_max).levels();
}

}  // namespace kgc
