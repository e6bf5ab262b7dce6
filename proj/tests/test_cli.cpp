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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "test_support.hpp"

namespace kgc {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded.
Result cli(const std::string& args) {
  const std::string command = std::string(KGCODE_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string golden_class_arg() {
  return "--class " + testing::fixture_path("golden.class");
}

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / ("kgcode_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

TEST(Cli, RunReproducesGoldenTrace) {
  const auto r = cli("run " + golden_class_arg() + " --n-max 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, testing::slurp(testing::fixture_path("golden_trace.jsonl")));
}

TEST(Cli, EncodeDecodeGolden) {
  const auto dec = cli("decode 0011 " + golden_class_arg());
  EXPECT_EQ(dec.code, 0);
  EXPECT_EQ(testing::split_lines(dec.out).at(0), "1");
  EXPECT_EQ(testing::split_lines(dec.out).at(1), R"({"sigma":"1","labelled_at_stage":1})");
  const auto enc = cli("encode 0 " + golden_class_arg());
  EXPECT_EQ(enc.code, 0);
  EXPECT_EQ(testing::split_lines(enc.out).at(0), "0001");
  EXPECT_EQ(testing::split_lines(cli("encode '' " + golden_class_arg()).out).at(0), "00");
}

TEST(Cli, ExitCodes) {
  Scratch tmp;
  {
    std::ofstream big(tmp.path("big.class"));
    big << "1\t0\n1\t10\n";
  }
  EXPECT_EQ(cli("run --class " + tmp.path("big.class")).code, 2);
  EXPECT_EQ(cli("run " + golden_class_arg() + " --cap 1").code, 3);
  EXPECT_EQ(cli("encode 0101 " + golden_class_arg() + " --cap 2").code, 3);
  EXPECT_EQ(cli("run --schedule cubic:3").code, 1);
  EXPECT_EQ(cli("frobnicate").code, 1);
  EXPECT_EQ(cli("decode 000 " + golden_class_arg()).code, 1);
  EXPECT_EQ(cli("check " + golden_class_arg() + " " + tmp.path("missing.jsonl")).code, 1);
}

TEST(Cli, CheckPassesGoldenAndFailsMutated) {
  Scratch tmp;
  const std::string golden = testing::fixture_path("golden_trace.jsonl");
  const auto ok = cli("check " + golden_class_arg() + " " + golden);
  EXPECT_EQ(ok.code, 0);
  const auto reports = testing::split_lines(ok.out);
  ASSERT_EQ(reports.size(), 4U);
  for (const auto& line : reports) EXPECT_TRUE(Json::parse(line)["failed"].is_null());

  // The adaptive stage clones the wrong label onto 0001.
  std::string text = testing::slurp(golden);
  const std::string from = R"([["0001","0"]])";
  text.replace(text.find(from), from.size(), R"([["0001","1"]])");
  {
    std::ofstream out(tmp.path("mutated.jsonl"));
    out << text;
  }
  const auto bad = cli("check " + golden_class_arg() + " " + tmp.path("mutated.jsonl"));
  EXPECT_EQ(bad.code, 5);
  const auto lines = testing::split_lines(bad.out);
  ASSERT_EQ(lines.size(), 4U);
  EXPECT_TRUE(Json::parse(lines[1])["failed"].is_null());
  EXPECT_FALSE(Json::parse(lines[2])["failed"].is_null());

  { std::ofstream empty(tmp.path("empty.jsonl")); }
  const auto vacuous = cli("check " + golden_class_arg() + " " + tmp.path("empty.jsonl"));
  EXPECT_EQ(vacuous.code, 0);
  EXPECT_TRUE(vacuous.out.empty());
}

TEST(Cli, BenchOutput) {
  const auto golden = cli("bench " + golden_class_arg() + " --n-max 3");
  EXPECT_EQ(golden.code, 0);
  EXPECT_EQ(golden.out,
            "n,ell_optimal,ell_kucera,redundancy_optimal,redundancy_kucera\n"
            "0,2,1,2,1\n1,4,2,3,1\n2,6,3,4,1\n3,8,5,5,2\n");
  const auto single = cli("bench " + golden_class_arg() + " --n-max 0");
  EXPECT_EQ(testing::split_lines(single.out).size(), 2U);

  const auto grouped = cli("bench --schedule log:2,3 --classes 3 --seed 5 --n-max 4 --depth 8");
  EXPECT_EQ(grouped.code, 0);
  const auto lines = testing::split_lines(grouped.out);
  ASSERT_EQ(lines.size(), 1U + 3 * 6);
  EXPECT_EQ(lines[0], kBenchHeader);
  EXPECT_EQ(lines[1].rfind("# class 0 seed 5 n0 ", 0), 0U);
  EXPECT_EQ(lines[7].rfind("# class 1 seed 6 n0 ", 0), 0U);
  EXPECT_EQ(lines[2].rfind("0,3,", 0), 0U);
}

TEST(Cli, GenClassMatchesLibrary) {
  const auto r = cli("gen-class --seed 3 --depth 7 --stages 6 --measure-cap 1/4");
  EXPECT_EQ(r.code, 0);
  std::ostringstream expected;
  write_class(expected, generate_class(3, Dyadic::parse("1/4"), 7, 6));
  EXPECT_EQ(r.out, expected.str());
}

TEST(Cli, OutputsAreByteIdenticalAcrossRuns) {
  Scratch tmp;
  const std::string base = "--schedule log:2,3 --seed 4 --n-max 5 --depth 8 ";
  for (const char* tag : {"a", "b"}) {
    const std::string t = tmp.path(std::string("t_") + tag);
    ASSERT_EQ(cli("run " + base + "--out-trace " + t + ".jsonl --out-dot " + t + ".dot").code, 0);
    ASSERT_EQ(cli("bench " + base + "--classes 4 --out-csv " + t + ".csv").code, 0);
  }
  for (const char* ext : {".jsonl", ".dot", ".csv"}) {
    const auto a = testing::slurp(tmp.path(std::string("t_a") + ext));
    EXPECT_FALSE(a.empty()) << ext;
    EXPECT_EQ(a, testing::slurp(tmp.path(std::string("t_b") + ext))) << ext;
  }
}

}  // namespace
}  // namespace kgc
