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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "kgcode/baseline.hpp"
#include "kgcode/codec.hpp"
#include "kgcode/invariants.hpp"
#include "kgcode/labelling.hpp"

namespace kgc {

using Json = nlohmann::ordered_json;

// Trace lines: {"kind","stage","placements":[[bits,sigma],...],
// "deactivations":[...],"d_append":bits|null}
Json to_json(const StageEvent& ev);
StageEvent event_from_json(const Json& j);
std::string to_jsonl_line(const StageEvent& ev);
void write_trace_jsonl(std::ostream& out, const std::vector<StageEvent>& trace);
// Throws std::invalid_argument on malformed lines.
std::vector<StageEvent> read_trace_jsonl(std::istream& in);

// Applies one recorded event to a state: stage counter, D append, explicit
// deactivations, then placements. Init events are applied to an empty state.
void apply_event(LabelledTreeState& st, const StageEvent& ev);

// Graphviz view of T*: lambda plus every labelled string, edges to the
// nearest labelled ancestor.
std::string to_dot(const LabelledTreeState& st);

Json to_json(const CheckReport& report);
Json to_json(const CodeResult& r);

struct ComparisonRow {
  std::uint64_t n = 0;
  std::uint64_t ell_optimal = 0;
  std::uint64_t ell_kucera = 0;
  std::uint64_t redundancy_optimal() const { return ell_optimal - n; }
  std::uint64_t redundancy_kucera() const { return ell_kucera - n; }
  bool operator==(const ComparisonRow&) const = default;
};

inline constexpr const char* kBenchHeader =
    "n,ell_optimal,ell_kucera,redundancy_optimal,redundancy_kucera";

std::vector<ComparisonRow> compare_redundancy(const LevelSchedule& schedule,
                                              const EnumeratedClass& cls,
                                              std::uint64_t n_max);
// Least n0 with ell_kucera >= ell_optimal for every row n >= n0, nullopt when
// even the last row fails.
std::optional<std::uint64_t> kucera_dominance_start(const std::vector<ComparisonRow>& rows);
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows,
                          bool header = true);

// Everything needed to reproduce a CLI run.
struct RunConfig {
  std::string schedule = "geometric:2";
  std::string class_path;
  std::optional<std::uint64_t> stage_cap;
  std::uint64_t seed = 0;
  std::string out_trace;
  std::string out_dot;
  std::string out_csv;
  std::uint64_t n_max = 10;
  std::string measure_cap = "1/2";
  std::uint32_t depth = 12;
  std::uint32_t stages = 20;
  std::uint32_t classes = 1;
  bool operator==(const RunConfig&) const = default;
};

Json to_json(const RunConfig& config);
RunConfig config_from_json(const Json& j);

}  // namespace kgc
