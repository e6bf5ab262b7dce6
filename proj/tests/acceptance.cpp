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

// Acceptance runner: `kgcode_acceptance <criterion>` runs one criterion over
// the fixed corpus and prints a single PASS or FAIL line. Exit status is 0
// exactly when the criterion passes.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kgcode/baseline.hpp"
#include "kgcode/codec.hpp"
#include "kgcode/errors.hpp"
#include "kgcode/invariants.hpp"
#include "kgcode/io.hpp"
#include "kgcode/labelling.hpp"
#include "kgcode/piclass.hpp"
#include "kgcode/schedule.hpp"

#include "fault_fixtures.hpp"
#include "test_support.hpp"

namespace {

using namespace kgc;

// Fixed before any run: 200 seeds at the largest allowed depth and stage
// count, both schedules.
constexpr std::uint64_t kSeeds = 200;
constexpr std::uint32_t kDepth = 12;
constexpr std::uint32_t kStages = 20;
constexpr std::uint64_t kCodeLength = 6;
constexpr std::uint64_t kTargetDvls = 10;

EnumeratedClass corpus_class(std::uint64_t seed) {
  return generate_class(seed, Dyadic::parse("1/2"), kDepth, kStages);
}

std::vector<LevelSchedule> corpus_schedules() {
  return {LevelSchedule::geometric(2), LevelSchedule::logarithmic(2, 3)};
}

std::vector<BitString> strings_upto(std::size_t n) {
  std::vector<BitString> out;
  for (std::size_t len = 0; len <= n; ++len) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      out.push_back(BitString::from_index(v, len));
    }
  }
  return out;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

// Up to `limit` examples, then a count of the rest.
class Examples {
 public:
  explicit Examples(std::size_t limit = 5) : limit_(limit) {}
  void add(const std::string& what) {
    if (shown_.size() < limit_) shown_.push_back(what);
    ++count_;
  }
  std::size_t count() const { return count_; }
  std::string str() const {
    std::string out;
    for (const auto& s : shown_) out += (out.empty() ? "" : "; ") + s;
    if (count_ > shown_.size()) out += "; +" + std::to_string(count_ - shown_.size()) + " more";
    return out;
  }

 private:
  std::size_t limit_;
  std::size_t count_ = 0;
  std::vector<std::string> shown_;
};

std::string pair_name(std::uint64_t seed, const LevelSchedule& s) {
  return "seed " + std::to_string(seed) + " " + s.description();
}

Verdict golden_trace() {
  const std::string shipped = testing::slurp(testing::fixture_path("golden_trace.jsonl"));
  const auto cls = testing::golden_class();
  auto st = init(testing::golden_schedule(), cls);
  for (int i = 0; i < 3; ++i) step(st, cls);
  std::ostringstream engine;
  write_trace_jsonl(engine, st.trace());

  auto machine = testing::reference_for(testing::golden_schedule(), cls);
  for (int i = 0; i < 3; ++i) machine.step();
  std::string reference;
  for (const auto& line : machine.lines()) reference += line + "\n";

  const bool pass = !shipped.empty() && engine.str() == shipped && reference == shipped;
  return {pass, "4 stages, engine " + std::string(engine.str() == shipped ? "==" : "!=") +
                    " fixture, reference " + (reference == shipped ? "==" : "!=") + " fixture"};
}

// Every (class, schedule) pair of the corpus through one codec session each,
// every x with |x| <= 6, under the default stage cap.
struct CodecTally {
  std::uint64_t pairs = 0;
  std::uint64_t queries = 0;
  std::uint64_t settled = 0;
  Examples roundtrip_failures;
  Examples unsettled;
  Examples membership_failures;
};

CodecTally run_codec_corpus() {
  CodecTally t;
  const auto inputs = strings_upto(kCodeLength);
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const auto cls = corpus_class(seed);
    for (const auto& schedule : corpus_schedules()) {
      ++t.pairs;
      CodecSession session(schedule, cls, kCodeLength);
      const std::uint64_t cap = default_stage_cap(schedule, cls, kCodeLength);
      std::map<std::size_t, std::string> unsettled_lengths;
      for (const auto& x : inputs) {
        ++t.queries;
        const std::string where = pair_name(seed, schedule) + " x=" + x.display();
        try {
          const CodeResult r = session.encode(x, cap);
          ++t.settled;
          if (!r.extendible || cls.has_prefix_in_final(r.leaf_witness) ||
              cls.has_prefix_in_final(r.code_prefix)) {
            t.membership_failures.add(where + " witness " + r.leaf_witness.str());
          }
          OracleTape tape(r.leaf_witness);
          const DecodeResult back = session.decode_prefix(tape, x.size(), cap);
          const std::uint64_t use = schedule.level(x.size());
          if (back.sigma != x || tape.reads() != use || tape.extent() != use) {
            t.roundtrip_failures.add(where + " decoded " + back.sigma.display() + " reading " +
                                     std::to_string(tape.reads()) + "/" + std::to_string(use));
          }
        } catch (const CapExhausted&) {
          unsettled_lengths.emplace(x.size(), "cap " + std::to_string(cap));
          t.roundtrip_failures.add(where + " cap");
        } catch (const ConstructionTerminated&) {
          unsettled_lengths.emplace(x.size(), "terminated");
          t.roundtrip_failures.add(where + " terminated");
        }
      }
      if (!unsettled_lengths.empty()) {
        t.unsettled.add(pair_name(seed, schedule) + " from |x|=" +
                        std::to_string(unsettled_lengths.begin()->first) + " (" +
                        unsettled_lengths.begin()->second + ")");
      }
    }
  }
  return t;
}

// Shared by criteria 2 and 3 when both run in one process.
const CodecTally& codec_corpus() {
  static const CodecTally kTally = run_codec_corpus();
  return kTally;
}

Verdict roundtrip() {
  const auto& t = codec_corpus();
  std::string detail = std::to_string(t.pairs) + " class/schedule pairs, " +
                       std::to_string(t.queries) + " inputs, " +
                       std::to_string(t.roundtrip_failures.count()) + " failures, " +
                       std::to_string(t.unsettled.count()) + " pairs unsettled within the cap";
  if (t.unsettled.count() > 0) detail += ": " + t.unsettled.str();
  if (t.roundtrip_failures.count() > 0) detail += " | " + t.roundtrip_failures.str();
  return {t.roundtrip_failures.count() == 0, detail};
}

Verdict membership() {
  const auto& t = codec_corpus();
  std::string detail = std::to_string(t.settled) + " settled witnesses, " +
                       std::to_string(t.membership_failures.count()) + " with a prefix in Q or " +
                       "not extendible; " + std::to_string(t.queries - t.settled) +
                       " inputs never settled";
  if (t.membership_failures.count() > 0) detail += " | " + t.membership_failures.str();
  return {t.membership_failures.count() == 0 && t.settled > 0, detail};
}

// Every corpus run to dvls >= 10 with the stage checker at every stage.
struct RunTally {
  std::uint64_t runs = 0;
  std::uint64_t stages = 0;
  std::uint64_t longest = 0;
  std::uint64_t full_checks = 0;
  Examples check_failures;
  Examples terminated;
  Examples capped;
};

// Past the cap, capped runs are continued unchecked up to this many stages so
// the report says how far short the cap fell. The verdict ignores it.
constexpr std::uint64_t kDiagnosticCap = std::uint64_t{1} << 22;

RunTally corpus_runs(bool follow_capped) {
  RunTally t;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const auto cls = corpus_class(seed);
    for (const auto& schedule : corpus_schedules()) {
      ++t.runs;
      const std::string name = pair_name(seed, schedule);
      auto st = init(schedule, cls);
      StageChecker checker(cls);
      std::uint64_t failures = 0;
      std::string first_failure;
      auto observe = [&](const LabelledTreeState& s) {
        const CheckReport report = checker.observe(s);
        if (!report.ok() && failures++ == 0) {
          first_failure = name + " stage " + std::to_string(s.stage()) + " " +
                          report.failed->check + ": " + report.failed->actual;
        }
      };
      observe(st);
      const std::uint64_t cap = default_stage_cap(schedule, cls, kTargetDvls);
      const RunOutcome out = run_until(
          st, cls, [](const LabelledTreeState& s) { return s.dvls() >= kTargetDvls; }, cap,
          observe);
      // The last state also goes through the from-scratch checker.
      const CheckReport last = check_all(st, cls);
      if (!last.ok() && failures++ == 0) {
        first_failure = name + " final " + last.failed->check + ": " + last.failed->actual;
      }
      if (failures > 0) t.check_failures.add(first_failure);
      t.stages += st.stage() + 1;
      t.longest = std::max(t.longest, st.stage());
      t.full_checks += checker.full_checks();
      if (out.status == RunStatus::Terminated) t.terminated.add(name);
      if (out.status == RunStatus::CapExhausted) {
        std::string what = name + " dvls " + std::to_string(st.dvls()) + " at cap " +
                           std::to_string(cap);
        if (follow_capped) {
          const RunOutcome more = run_until(
              st, cls, [](const LabelledTreeState& s) { return s.dvls() >= kTargetDvls; },
              kDiagnosticCap);
          what += more.status == RunStatus::Satisfied
                      ? ", dvls 10 at stage " + std::to_string(st.stage())
                      : ", still dvls " + std::to_string(st.dvls()) + " at stage " +
                            std::to_string(st.stage());
        }
        t.capped.add(what);
      }
    }
  }
  return t;
}

Verdict invariant_suite() {
  const auto t = corpus_runs(false);
  std::string detail = std::to_string(t.runs) + " runs, " + std::to_string(t.stages) +
                       " stages checked, " + std::to_string(t.check_failures.count()) +
                       " runs with a failed check";
  if (t.check_failures.count() > 0) detail += " | " + t.check_failures.str();
  return {t.check_failures.count() == 0, detail};
}

Verdict non_termination() {
  const auto t = corpus_runs(true);
  std::string detail = std::to_string(t.runs) + " runs, " + std::to_string(t.terminated.count()) +
                       " terminated, " + std::to_string(t.capped.count()) +
                       " short of dvls 10 at the default cap, longest run " + std::to_string(t.longest) +
                       " stages";
  if (t.terminated.count() > 0) detail += " | terminated: " + t.terminated.str();
  if (t.capped.count() > 0) detail += " | capped: " + t.capped.str();
  return {t.terminated.count() == 0 && t.capped.count() == 0, detail};
}

Verdict fault_isolation() {
  std::vector<std::string> names;
  for (auto n : check_names()) names.emplace_back(n);
  std::map<std::string, std::vector<std::string>> seen;
  for (const auto& f : testing::fault_fixtures()) {
    const auto c = f.make();
    seen[f.check] = testing::failing_checks(c.state, c.cls);
  }
  Examples misses(names.size());
  Examples shared(names.size());
  for (const auto& name : names) {
    const auto it = seen.find(name);
    if (it == seen.end()) {
      misses.add(name + " has no fixture");
      continue;
    }
    const auto& failing = it->second;
    if (std::find(failing.begin(), failing.end(), name) == failing.end()) {
      misses.add(name + " did not fail");
    } else if (failing.size() != 1) {
      std::string also;
      for (const auto& other : failing) {
        if (other != name) also += (also.empty() ? "" : ",") + other;
      }
      shared.add(name + " with " + also);
    }
  }
  std::string detail = std::to_string(names.size()) + " checks, " +
                       std::to_string(misses.count()) + " missed, " +
                       std::to_string(shared.count()) + " failing alongside others";
  if (misses.count() > 0) detail += " | missed: " + misses.str();
  if (shared.count() > 0) detail += " | shared: " + shared.str();
  return {names.size() >= 10 && misses.count() == 0 && shared.count() == 0, detail};
}

Verdict redundancy() {
  const auto log = LevelSchedule::logarithmic(2, 3);
  Examples identity;
  for (std::uint64_t n = 0; n <= 64; ++n) {
    std::uint64_t k = 0;
    while ((std::uint64_t{2} << k) <= n + 1) ++k;
    const std::uint64_t expected = 2 * k + 3;
    if (log.level(n) - n != expected) {
      identity.add("n=" + std::to_string(n) + " got " + std::to_string(log.level(n) - n));
    }
  }

  // Rows up to n = 10: the baseline keeps a code table of 2^n strings.
  constexpr std::uint64_t kBenchMax = 10;
  std::uint64_t dominated = 0;
  std::map<std::string, std::uint64_t> n0_counts;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const auto rows = compare_redundancy(log, corpus_class(seed), kBenchMax);
    const auto n0 = kucera_dominance_start(rows);
    if (n0) ++dominated;
    ++n0_counts[n0 ? std::to_string(*n0) : "none"];
  }
  std::string histogram;
  for (const auto& [n0, count] : n0_counts) {
    histogram += (histogram.empty() ? "" : " ") + n0 + ":" + std::to_string(count);
  }
  const bool share_ok = dominated * 10 >= kSeeds * 9;
  std::string detail = "log redundancy identity for n<=64: " +
                       std::string(identity.count() == 0 ? "exact" : identity.str()) +
                       "; baseline >= optimal from n0 on " + std::to_string(dominated) + "/" +
                       std::to_string(kSeeds) + " classes (n0 histogram " + histogram + ")";
  return {identity.count() == 0 && share_ok, detail};
}

// Runs the CLI with stdout sent to `out`, returning its exit status.
int run_cli(const std::string& args, const std::string& out = "/dev/null") {
  const std::string command = std::string(KGCODE_CLI) + " " + args + " >" + out + " 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("kgcode_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string golden = "--class " + testing::fixture_path("golden.class");
  struct Config {
    std::string name;
    std::string args;
  };
  std::vector<Config> configs = {{"golden", golden + " --n-max 3"}};
  for (std::uint64_t seed : {0, 7, 42, 199}) {
    for (const char* s : {"geometric:2", "log:2,3"}) {
      configs.push_back({"s" + std::to_string(seed) + (s[0] == 'g' ? "g" : "l"),
                         "--schedule " + std::string(s) + " --seed " + std::to_string(seed) +
                             " --n-max 8 --depth 12 --stages 20"});
    }
  }
  Examples diffs;
  std::size_t files = 0;
  for (const auto& c : configs) {
    std::vector<std::string> texts[2];
    for (int round = 0; round < 2; ++round) {
      const std::string stem = (dir / (c.name + "_" + std::to_string(round))).string();
      const int run = run_cli("run " + c.args + " --out-trace " + stem + ".jsonl --out-dot " +
                              stem + ".dot");
      const int bench = run_cli("bench " + c.args + " --classes 3 --out-csv " + stem + ".csv");
      const int check =
          run_cli("check " + c.args + " " + stem + ".jsonl", stem + ".check");
      texts[round] = {std::to_string(run) + std::to_string(bench) + std::to_string(check)};
      for (const char* ext : {".jsonl", ".dot", ".csv", ".check"}) {
        texts[round].push_back(testing::slurp(stem + ext));
      }
    }
    if (texts[0][0] != "000") diffs.add(c.name + " exit codes " + texts[0][0]);
    for (std::size_t i = 0; i < texts[0].size(); ++i) {
      ++files;
      if (texts[0][i] != texts[1][i] || (i > 0 && texts[0][i].empty())) {
        diffs.add(c.name + " output " + std::to_string(i) + " differs or is empty");
      }
    }
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return {diffs.count() == 0, std::to_string(configs.size()) + " configs, " +
                                  std::to_string(files) + " outputs compared, " +
                                  std::to_string(diffs.count()) + " differences" +
                                  (diffs.count() > 0 ? " | " + diffs.str() : "")};
}

const std::map<int, std::pair<std::string, std::function<Verdict()>>>& criteria() {
  static const std::map<int, std::pair<std::string, std::function<Verdict()>>> kCriteria = {
      {1, {"golden trace exactness", golden_trace}},
      {2, {"roundtrip with oracle use l_|x|", roundtrip}},
      {3, {"code membership", membership}},
      {4, {"invariants at every stage", invariant_suite}},
      {5, {"non-termination to dvls 10", non_termination}},
      {6, {"checker completeness", fault_isolation}},
      {7, {"redundancy accounting", redundancy}},
      {8, {"determinism", determinism}},
  };
  return kCriteria;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty()) {
    for (const auto& [k, v] : criteria()) which.push_back(k);
  }
  bool all = true;
  for (int k : which) {
    const auto it = criteria().find(k);
    if (it == criteria().end()) {
      std::cerr << "unknown criterion " << k << '\n';
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = it->second.second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    std::cout << "criterion " << k << " (" << it->second.first << "): "
              << (v.pass ? "PASS" : "FAIL") << " [" << ms << " ms] " << v.detail << std::endl;
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
