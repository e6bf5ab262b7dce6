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

// kgcode: run the labelling construction, encode and decode against a class,
// check traces and compare redundancy with the bit-by-bit baseline.
//
// Exit codes:
//   0  success
//   1  usage or I/O error
//   2  hypothesis violation (schedule sum plus class measure not below 1)
//   3  stage cap exhausted
//   4  construction terminated
//   5  a check failed

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "kgcode/baseline.hpp"
#include "kgcode/codec.hpp"
#include "kgcode/errors.hpp"
#include "kgcode/invariants.hpp"
#include "kgcode/io.hpp"
#include "kgcode/labelling.hpp"
#include "kgcode/piclass.hpp"
#include "kgcode/schedule.hpp"

namespace {

using namespace kgc;

enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kHypothesis = 2,
  kCap = 3,
  kTerminated = 4,
  kCheckFailed = 5,
};

struct Inputs {
  LevelSchedule schedule;
  EnumeratedClass cls;
};

EnumeratedClass class_for(const RunConfig& c, std::uint64_t seed) {
  if (!c.class_path.empty()) return load_class_file(c.class_path);
  return generate_class(seed, Dyadic::parse(c.measure_cap), c.depth, c.stages);
}

Inputs load_inputs(const RunConfig& c) {
  return {parse_schedule(c.schedule), class_for(c, c.seed)};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << text;
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

void report_hypothesis(const HypothesisViolation& e) {
  const auto& v = e.validation();
  std::cerr << "error: " << e.what() << '\n'
            << "  class measure:       " << e.class_measure().to_string() << '\n'
            << "  schedule partial sum: " << v.partial_sum.to_string() << '\n'
            << "  schedule tail bound:  " << (v.tail ? v.tail->to_string() : "none") << '\n'
            << "  certified total:      " << (v.total ? v.total->to_string() : "none") << '\n';
  if (!v.reason.empty()) std::cerr << "  reason: " << v.reason << '\n';
}

int cmd_run(const RunConfig& c) {
  Inputs in = load_inputs(c);
  LabelledTreeState st = init(in.schedule, in.cls);
  const std::uint64_t cap =
      c.stage_cap.value_or(default_stage_cap(in.schedule, in.cls, c.n_max));
  const RunOutcome out = run_until(
      st, in.cls, [&](const LabelledTreeState& s) { return s.dvls() >= c.n_max; }, cap);

  std::ostringstream trace;
  write_trace_jsonl(trace, st.trace());
  if (c.out_trace.empty()) {
    std::cout << trace.str();
  } else {
    write_file(c.out_trace, trace.str());
  }
  if (!c.out_dot.empty()) write_file(c.out_dot, to_dot(st));

  switch (out.status) {
    case RunStatus::Satisfied:
      return kOk;
    case RunStatus::CapExhausted:
      std::cerr << "error: stage cap " << cap << " exhausted at dvls " << st.dvls() << '\n';
      return kCap;
    case RunStatus::Terminated:
      std::cerr << "error: construction terminated at stage " << out.stage << '\n';
      return kTerminated;
  }
  return kOk;
}

int cmd_encode(const RunConfig& c, const std::string& bits) {
  Inputs in = load_inputs(c);
  const CodeResult r = encode(BitString(bits), in.schedule, in.cls, c.stage_cap);
  std::cout << r.code_prefix.str() << '\n' << to_json(r).dump() << '\n';
  return kOk;
}

int cmd_decode(const RunConfig& c, const std::string& bits) {
  Inputs in = load_inputs(c);
  const DecodeResult r = decode(BitString(bits), in.schedule, in.cls, c.stage_cap);
  Json j;
  j["sigma"] = r.sigma.str();
  j["labelled_at_stage"] = r.labelled_at_stage;
  std::cout << r.sigma.str() << '\n' << j.dump() << '\n';
  return kOk;
}

int cmd_check(const RunConfig& c, const std::string& trace_path) {
  Inputs in = load_inputs(c);
  std::ifstream file(trace_path);
  if (!file) throw std::ios_base::failure("cannot read " + trace_path);
  const auto trace = read_trace_jsonl(file);

  LabelledTreeState st(in.schedule);
  StageChecker checker(in.cls);
  bool ok = true;
  for (const auto& ev : trace) {
    apply_event(st, ev);
    const CheckReport report = checker.observe(st);
    std::cout << to_json(report).dump() << '\n';
    ok = ok && report.ok();
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_bench(const RunConfig& c) {
  const LevelSchedule schedule = parse_schedule(c.schedule);
  const bool grouped = c.class_path.empty() && c.classes > 1;
  std::ostringstream csv;
  csv << kBenchHeader << '\n';
  for (std::uint32_t k = 0; k < c.classes; ++k) {
    const std::uint64_t seed = c.seed + k;
    const EnumeratedClass cls = class_for(c, seed);
    const auto rows = compare_redundancy(schedule, cls, c.n_max);
    const auto n0 = kucera_dominance_start(rows);
    const std::string n0_text = n0 ? std::to_string(*n0) : "none";
    if (grouped) {
      csv << "# class " << k << " seed " << seed << " n0 " << n0_text << '\n';
    } else {
      std::cerr << "n0 " << n0_text << '\n';
    }
    write_comparison_csv(csv, rows, false);
    if (!c.class_path.empty()) break;
  }
  if (c.out_csv.empty()) {
    std::cout << csv.str();
  } else {
    write_file(c.out_csv, csv.str());
  }
  return kOk;
}

int cmd_gen_class(const RunConfig& c) {
  write_class(std::cout, generate_class(c.seed, Dyadic::parse(c.measure_cap), c.depth, c.stages));
  return kOk;
}

void add_common(CLI::App* app, RunConfig& c, std::uint64_t& cap) {
  app->add_option("--schedule", c.schedule, "geometric:c, log:a,b or file:<path>")
      ->capture_default_str();
  app->add_option("--class", c.class_path, "class file (stage<TAB>bits per line)");
  app->add_option("--cap", cap, "stage cap");
  app->add_option("--seed", c.seed, "seed for generated classes")->capture_default_str();
  app->add_option("--n-max", c.n_max, "largest input length")->capture_default_str();
  app->add_option("--measure-cap", c.measure_cap, "measure bound for generated classes")
      ->capture_default_str();
  app->add_option("--depth", c.depth, "longest string in generated classes")
      ->capture_default_str();
  app->add_option("--stages", c.stages, "enumeration stages of generated classes")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kucera-Gacs coding with optimal oracle use"};
  app.require_subcommand(1);

  RunConfig config;
  std::uint64_t cap = 0;
  std::string bits;
  std::string trace_path;

  auto* run = app.add_subcommand("run", "run the construction and export the trace");
  add_common(run, config, cap);
  run->add_option("--out-trace", config.out_trace, "JSONL trace path (stdout if omitted)");
  run->add_option("--out-dot", config.out_dot, "DOT export of the final tree");

  auto* enc = app.add_subcommand("encode", "code prefix for a bit string");
  add_common(enc, config, cap);
  enc->add_option("bits", bits, "input bits")->required();

  auto* dec = app.add_subcommand("decode", "decode a code prefix");
  add_common(dec, config, cap);
  dec->add_option("bits", bits, "code bits")->required();

  auto* chk = app.add_subcommand("check", "replay a trace and check every stage");
  add_common(chk, config, cap);
  chk->add_option("trace", trace_path, "JSONL trace")->required();

  auto* bench = app.add_subcommand("bench", "compare redundancy with the baseline coder");
  add_common(bench, config, cap);
  bench->add_option("--out-csv", config.out_csv, "CSV path (stdout if omitted)");
  bench->add_option("--classes", config.classes, "number of generated classes")
      ->capture_default_str();

  auto* gen = app.add_subcommand("gen-class", "write a generated class to stdout");
  add_common(gen, config, cap);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  for (auto* sub : {run, enc, dec, chk, bench, gen}) {
    if (sub->parsed() && sub->count("--cap") > 0) config.stage_cap = cap;
  }

  try {
    if (run->parsed()) return cmd_run(config);
    if (enc->parsed()) return cmd_encode(config, bits);
    if (dec->parsed()) return cmd_decode(config, bits);
    if (chk->parsed()) return cmd_check(config, trace_path);
    if (bench->parsed()) return cmd_bench(config);
    if (gen->parsed()) return cmd_gen_class(config);
  } catch (const HypothesisViolation& e) {
    report_hypothesis(e);
    return kHypothesis;
  } catch (const CapExhausted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCap;
  } catch (const ConstructionTerminated& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kTerminated;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
