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

#include "kgcode/io.hpp"

#include <sstream>
#include <stdexcept>

namespace kgc {

Json to_json(const StageEvent& ev) {
  Json j;
  j["kind"] = std::string(to_string(ev.kind));
  j["stage"] = ev.stage;
  Json placements = Json::array();
  for (const auto& p : ev.placements) placements.push_back({p.where.str(), p.sigma.str()});
  j["placements"] = std::move(placements);
  Json deactivations = Json::array();
  for (const auto& b : ev.deactivations) deactivations.push_back(b.str());
  j["deactivations"] = std::move(deactivations);
  j["d_append"] = ev.d_append ? Json(ev.d_append->str()) : Json(nullptr);
  return j;
}

StageEvent event_from_json(const Json& j) {
  StageEvent ev;
  auto kind = parse_event_kind(j.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("unknown event kind");
  ev.kind = *kind;
  ev.stage = j.at("stage").get<std::uint64_t>();
  for (const auto& p : j.at("placements")) {
    if (!p.is_array() || p.size() != 2) throw std::invalid_argument("placement must be a pair");
    ev.placements.push_back({BitString(p[0].get<std::string>()), BitString(p[1].get<std::string>())});
  }
  for (const auto& b : j.at("deactivations")) ev.deactivations.emplace_back(b.get<std::string>());
  if (!j.at("d_append").is_null()) ev.d_append = BitString(j.at("d_append").get<std::string>());
  return ev;
}

std::string to_jsonl_line(const StageEvent& ev) { return to_json(ev).dump(); }

void write_trace_jsonl(std::ostream& out, const std::vector<StageEvent>& trace) {
  for (const auto& ev : trace) out << to_jsonl_line(ev) << '\n';
}

std::vector<StageEvent> read_trace_jsonl(std::istream& in) {
  std::vector<StageEvent> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(event_from_json(Json::parse(line)));
    } catch (const std::exception& e) {
      throw std::invalid_argument("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void apply_event(LabelledTreeState& st, const StageEvent& ev) {
  st.set_stage(ev.stage);
  if (ev.d_append) st.append_d(*ev.d_append);
  for (const auto& b : ev.deactivations) st.deactivate(b);
  for (const auto& p : ev.placements) st.place(p.where, p.sigma);
  if (ev.kind == EventKind::Terminated) st.mark_terminated();
  st.record(ev);
}

std::string to_dot(const LabelledTreeState& st) {
  std::ostringstream out;
  out << "digraph T {\n";
  out << "  node [shape=box, fontname=\"monospace\"];\n";
  out << "  \"\" [label=\"λ\", shape=circle];\n";
  for (const auto& [where, sigma] : st.labels()) {
    out << "  \"" << where.str() << "\" [label=\"" << where.str() << "\\nx_" << sigma.display()
        << "\\n" << (st.is_active(where) ? "active" : "inactive")
        << (st.in_d(where) ? "\\nin D" : "") << "\"";
    if (st.in_d(where)) {
      out << ", style=filled, fillcolor=\"#f4cccc\"";
    } else if (st.is_active(where)) {
      out << ", style=bold";
    } else {
      out << ", style=dashed";
    }
    out << "];\n";
  }
  for (const auto& [child, parent] : labelled_parents(st)) {
    out << "  \"" << parent.str() << "\" -> \"" << child.str() << "\";\n";
  }
  out << "}\n";
  return out.str();
}

Json to_json(const CheckReport& report) {
  Json j;
  j["stage"] = report.stage;
  j["passed"] = report.passed;
  if (report.failed) {
    Json w = Json::array();
    for (const auto& b : report.failed->witness) w.push_back(b.str());
    j["failed"] = {{"check", report.failed->check},
                   {"witness", std::move(w)},
                   {"expected", report.failed->expected},
                   {"actual", report.failed->actual}};
  } else {
    j["failed"] = nullptr;
  }
  return j;
}

Json to_json(const CodeResult& r) {
  Json j;
  j["code_prefix"] = r.code_prefix.str();
  j["settled_at_stage"] = r.settled_at_stage;
  j["extendible"] = r.extendible;
  j["leaf_witness"] = r.leaf_witness.str();
  return j;
}

std::vector<ComparisonRow> compare_redundancy(const LevelSchedule& schedule,
                                              const EnumeratedClass& cls,
                                              std::uint64_t n_max) {
  KuceraCode kucera(cls, n_max);
  std::vector<ComparisonRow> rows;
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    rows.push_back({n, schedule.level(n), kucera.levels()[n]});
  }
  return rows;
}

std::optional<std::uint64_t> kucera_dominance_start(const std::vector<ComparisonRow>& rows) {
  std::optional<std::uint64_t> start;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (it->ell_kucera < it->ell_optimal) break;
    start = it->n;
  }
  return start;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows,
                          bool header) {
  if (header) out << kBenchHeader << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << r.ell_optimal << ',' << r.ell_kucera << ',' << r.redundancy_optimal()
        << ',' << r.redundancy_kucera() << '\n';
  }
}

Json to_json(const RunConfig& c) {
  Json j;
  j["schedule"] = c.schedule;
  j["class"] = c.class_path;
  j["cap"] = c.stage_cap ? Json(*c.stage_cap) : Json(nullptr);
  j["seed"] = c.seed;
  j["out_trace"] = c.out_trace;
  j["out_dot"] = c.out_dot;
  j["out_csv"] = c.out_csv;
  j["n_max"] = c.n_max;
  j["measure_cap"] = c.measure_cap;
  j["depth"] = c.depth;
  j["stages"] = c.stages;
  j["classes"] = c.classes;
  return j;
}

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  c.schedule = j.at("schedule").get<std::string>();
  c.class_path = j.at("class").get<std::string>();
  if (!j.at("cap").is_null()) c.stage_cap = j.at("cap").get<std::uint64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.out_trace = j.at("out_trace").get<std::string>();
  c.out_dot = j.at("out_dot").get<std::string>();
  c.out_csv = j.at("out_csv").get<std::string>();
  c.n_max = j.at("n_max").get<std::uint64_t>();
  c.measure_cap = j.at("measure_cap").get<std::string>();
  c.depth = j.at("depth").get<std::uint32_t>();
  c.stages = j.at("stages").get<std::uint32_t>();
  c.classes = j.at("classes").get<std::uint32_t>();
  return c;
}

}  // namespace kgc
