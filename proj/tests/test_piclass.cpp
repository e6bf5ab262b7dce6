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

#include <random>
#include <sstream>

#include "kgcode/piclass.hpp"

#include "test_support.hpp"

namespace kgc {
namespace {

using testing::make_class;

Dyadic D(const char* s) { return Dyadic::parse(s); }

std::vector<BitString> strings(std::initializer_list<const char*> list) {
  std::vector<BitString> out;
  for (const char* s : list) out.emplace_back(s);
  return out;
}

// Fraction of depth-d strings with a prefix in S, as a dyadic.
Dyadic covered_fraction(const std::vector<BitString>& set, std::size_t depth) {
  std::uint64_t hits = 0;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << depth); ++v) {
    const auto z = BitString::from_index(v, depth);
    for (const auto& s : set) {
      if (s.is_prefix_of(z)) {
        ++hits;
        break;
      }
    }
  }
  return Dyadic(hits, depth);
}

// Some string of length max_len + 1 extending tau avoids every element of Q.
bool extendible_brute(const BitString& tau, const EnumeratedClass& cls) {
  const std::size_t len = std::max(tau.size(), cls.max_len()) + 1;
  const std::size_t free = len - tau.size();
  const auto all = cls.all_strings();
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << free); ++v) {
    const auto z = tau + BitString::from_index(v, free);
    bool hit = false;
    for (const auto& q : all) hit = hit || q.is_prefix_of(z);
    if (!hit) return true;
  }
  return false;
}

TEST(MeasureOf, Examples) {
  EXPECT_EQ(measure_of(std::vector<BitString>{}), Dyadic());
  EXPECT_EQ(measure_of(strings({"00", "0000"})), D("1/4"));
  EXPECT_EQ(measure_of(strings({"0", "10"})), D("3/4"));
  EXPECT_EQ(measure_of(strings({""})), D("1"));
  EXPECT_EQ(measure_of(strings({"0", "1", "01"})), D("1"));
}

TEST(MeasureOf, MatchesBruteForceAndIsMonotone) {
  std::mt19937_64 rng(3);
  for (std::size_t depth = 1; depth <= 12; ++depth) {
    for (int trial = 0; trial < 12; ++trial) {
      std::vector<BitString> set;
      const std::size_t count = 1 + rng() % 8;
      for (std::size_t k = 0; k < count; ++k) {
        set.push_back(BitString::from_index(rng(), 1 + rng() % depth));
      }
      const Dyadic m = measure_of(set);
      ASSERT_EQ(m, covered_fraction(set, depth));
      auto bigger = set;
      bigger.push_back(BitString::from_index(rng(), 1 + rng() % depth));
      ASSERT_GE(measure_of(bigger), m);
    }
  }
}

TEST(EnumeratedClass, StringsAtExamples) {
  const auto one = make_class({{1, "0000"}});
  EXPECT_TRUE(one.strings_at(0).empty());
  EXPECT_EQ(one.strings_at(1), strings({"0000"}));
  const auto two = make_class({{1, "0000"}, {3, "11"}});
  EXPECT_EQ(two.strings_at(2), strings({"0000"}));
  EXPECT_EQ(two.strings_at(3), strings({"0000", "11"}));
  EXPECT_EQ(two.complete_by(), 3U);
  EXPECT_EQ(two.max_len(), 4U);
}

TEST(EnumeratedClass, StringsAtIsMonotone) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto cls = testing::corpus_class(seed, 12);
    for (std::uint64_t s = 0; s < 22; ++s) {
      const auto here = cls.strings_at(s);
      const auto next = cls.strings_at(s + 1);
      for (const auto& q : here) {
        ASSERT_TRUE(std::binary_search(next.begin(), next.end(), q));
      }
    }
    EXPECT_EQ(cls.strings_at(cls.complete_by()), cls.all_strings());
  }
}

TEST(EnumeratedClass, PrefixQueries) {
  const auto cls = make_class({{1, "00"}, {4, "101"}});
  EXPECT_TRUE(cls.has_prefix_in(BitString("0011"), 1));
  EXPECT_TRUE(cls.has_prefix_in(BitString("00"), 1));
  EXPECT_FALSE(cls.has_prefix_in(BitString("0"), 1));
  EXPECT_FALSE(cls.has_prefix_in(BitString("1011"), 3));
  EXPECT_TRUE(cls.has_prefix_in_final(BitString("1011")));
  EXPECT_TRUE(cls.has_proper_extension_in_final(BitString("10")));
  EXPECT_FALSE(cls.has_proper_extension_in_final(BitString("101")));
  EXPECT_EQ(cls.measure(), D("1/4") + D("1/8"));
}

TEST(IsExtendible, Examples) {
  EXPECT_TRUE(is_extendible(BitString("0001"), make_class({{1, "0000"}})));
  EXPECT_FALSE(is_extendible(BitString("0000"), make_class({{1, "0000"}})));
  EXPECT_TRUE(is_extendible(BitString("00"), make_class({{1, "000"}, {1, "0010"}})));
  EXPECT_FALSE(is_extendible(BitString("0"), make_class({{1, "00"}, {2, "01"}})));
  EXPECT_TRUE(is_extendible(BitString(), EnumeratedClass()));
}

TEST(IsExtendible, AgreesWithBruteForceUpToLengthTen) {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto cls = generate_class(seed, D("3/4"), 6, 5);
    for (std::size_t len = 0; len <= 10; ++len) {
      for (int trial = 0; trial < 40; ++trial) {
        const auto tau = BitString::from_index(rng(), len);
        ASSERT_EQ(is_extendible(tau, cls), extendible_brute(tau, cls))
            << "seed " << seed << " tau " << tau.str();
      }
    }
  }
  // Exhaustively for short tau on one denser class.
  const auto dense = make_class({{1, "000"}, {1, "0010"}, {2, "01"}, {3, "1100"}, {3, "111"}});
  for (std::size_t len = 0; len <= 6; ++len) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      const auto tau = BitString::from_index(v, len);
      ASSERT_EQ(is_extendible(tau, dense), extendible_brute(tau, dense)) << tau.str();
    }
  }
}

TEST(GenerateClass, Postconditions) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto quarter = generate_class(seed, D("1/4"), 10, 7);
    ASSERT_LT(quarter.measure(), D("1/4"));
    for (const auto& e : quarter.entries()) {
      ASSERT_GE(e.bits.size(), 1U);
      ASSERT_LE(e.bits.size(), 10U);
      ASSERT_GE(e.stage, 1U);
      ASSERT_LE(e.stage, 7U);
    }
    const auto half = generate_class(seed, D("1/2"), 8, 20);
    ASSERT_TRUE(is_extendible(BitString(), half));
    ASSERT_TRUE(extendible_brute(BitString(), half));
  }
}

TEST(GenerateClass, DeterministicPerSeed) {
  EXPECT_EQ(generate_class(42, D("1/2"), 12, 20).entries(),
            generate_class(42, D("1/2"), 12, 20).entries());
  EXPECT_NE(generate_class(42, D("1/2"), 12, 20).entries(),
            generate_class(43, D("1/2"), 12, 20).entries());
  EXPECT_THROW(generate_class(1, D("1"), 4, 4), std::invalid_argument);
  EXPECT_THROW(generate_class(1, Dyadic(), 4, 4), std::invalid_argument);
}

TEST(ClassFile, RoundTripAndErrors) {
  const auto cls = generate_class(9, D("1/2"), 12, 20);
  std::stringstream buf;
  write_class(buf, cls);
  EXPECT_EQ(read_class(buf).entries(), cls.entries());

  std::istringstream commented("# header\n\n3\t0101\n1\t11\n");
  const auto parsed = read_class(commented);
  EXPECT_EQ(parsed.entries().size(), 2U);
  EXPECT_EQ(parsed.strings_at(1), strings({"11"}));

  std::istringstream bad("1 0101\n");
  EXPECT_THROW(read_class(bad), std::invalid_argument);
  std::istringstream bad_bits("1\t01x\n");
  EXPECT_THROW(read_class(bad_bits), std::invalid_argument);
  EXPECT_THROW(load_class_file("/nonexistent/class.tsv"), std::invalid_argument);
  EXPECT_EQ(load_class_file(testing::fixture_path("golden.class")).entries(),
            testing::golden_class().entries());
}

}  // namespace
}  // namespace kgc
