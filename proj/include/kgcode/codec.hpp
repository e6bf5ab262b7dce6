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
#include <set>
#include <vector>

#include "kgcode/bitstring.hpp"
#include "kgcode/labelling.hpp"
#include "kgcode/piclass.hpp"
#include "kgcode/schedule.hpp"

namespace kgc {

// Read-only oracle prefix that records which positions a decoder touched.
class OracleTape {
 public:
  explicit OracleTape(BitString bits) : bits_(std::move(bits)) {}
  // Throws std::out_of_range past the end of the known prefix.
  bool read(std::size_t i);
  std::size_t reads() const noexcept { return reads_; }
  std::size_t distinct_positions() const noexcept { return touched_.size(); }
  // One past the highest position read, 0 if nothing was read.
  std::size_t extent() const noexcept {
    return touched_.empty() ? 0 : *touched_.rbegin() + 1;
  }

 private:
  BitString bits_;
  std::set<std::size_t> touched_;
  std::size_t reads_ = 0;
};

struct CodeResult {
  BitString code_prefix;      // length l_n
  std::uint64_t settled_at_stage = 0;
  bool extendible = false;
  BitString leaf_witness;     // active leaf extending code_prefix
};

struct DecodeResult {
  BitString sigma;
  std::uint64_t labelled_at_stage = 0;
};

std::uint64_t default_stage_cap(const LevelSchedule& schedule,
                                const EnumeratedClass& cls, std::uint64_t n);

// Settled for inputs of length n: the frontier level l_N (N = dvls) is at
// least max(max_len, l_n), N >= n, and no labelled leaf outside D has a
// prefix in Q_inf.
bool is_settled(const LabelledTreeState& st, const EnumeratedClass& cls,
                std::uint64_t n);

// Code for x at the first settled stage. Throws HypothesisViolation,
// CapExhausted or ConstructionTerminated.
CodeResult encode(const BitString& x, const LevelSchedule& schedule,
                  const EnumeratedClass& cls,
                  std::optional<std::uint64_t> stage_cap = std::nullopt);

// Runs the construction until y (|y| = l_n) is labelled and returns its
// label. Throws std::invalid_argument when |y| is not a schedule level.
DecodeResult decode(const BitString& y, const LevelSchedule& schedule,
                    const EnumeratedClass& cls,
                    std::optional<std::uint64_t> stage_cap = std::nullopt);

// Decodes the first n bits of an oracle, reading exactly l_n positions.
DecodeResult decode_prefix(OracleTape& oracle, std::uint64_t n,
                           const LevelSchedule& schedule, const EnumeratedClass& cls,
                           std::optional<std::uint64_t> stage_cap = std::nullopt);

// decode(encode(x)) == x with the decoder reading exactly l_{|x|} bits of the
// witness.
bool roundtrip(const BitString& x, const LevelSchedule& schedule,
               const EnumeratedClass& cls,
               std::optional<std::uint64_t> stage_cap = std::nullopt);

// One construction shared by many encode/decode queries on the same schedule
// and class. Every answer, error included, is the one the free functions
// give for the same arguments; the state only ever moves forward. Inputs
// longer than n_max are rejected.
class CodecSession {
 public:
  CodecSession(const LevelSchedule& schedule, EnumeratedClass cls, std::uint64_t n_max);

  CodeResult encode(const BitString& x, std::optional<std::uint64_t> stage_cap = std::nullopt);
  DecodeResult decode(const BitString& y, std::optional<std::uint64_t> stage_cap = std::nullopt);
  DecodeResult decode_prefix(OracleTape& oracle, std::uint64_t n,
                             std::optional<std::uint64_t> stage_cap = std::nullopt);
  bool roundtrip(const BitString& x, std::optional<std::uint64_t> stage_cap = std::nullopt);

  const LabelledTreeState& state() const noexcept { return st_; }

 private:
  struct Settled {
    std::uint64_t stage = 0;
    std::uint64_t dvls = 0;
  };

  void step_once();
  void note_settled();
  // Stage at which a query first holding at `first` resolves under `cap`,
  // following run_until's order: termination, then the goal, then the cap.
  void resolve(std::optional<std::uint64_t> first, std::uint64_t cap, const char* what) const;

  EnumeratedClass cls_;
  std::uint64_t n_max_;
  LabelledTreeState st_;
  std::vector<Settled> settled_;  // index n: first stage settled for length n
};

struct OracleUseRow {
  std::uint64_t n = 0;
  std::uint64_t oracle_use = 0;  // l_n
  std::uint64_t redundancy = 0;  // l_n - n
  bool operator==(const OracleUseRow&) const = default;
};

std::vector<OracleUseRow> oracle_use_profile(const LevelSchedule& schedule,
                                             std::uint64_t n_max);

}  // namespace kgc
