// Copyright 2026 The stcorpus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <random>

#include "../support/table1_data.hpp"
#include "helpers.hpp"
#include "stcorpus/error.hpp"

using namespace stcorpus;

namespace {

const Codebook& book() {
  static const Codebook b = Codebook::load(testutil::data_dir() / "table1" / "codebook.tsv");
  return b;
}

std::vector<CodedTerm> coded(const std::vector<std::string>& terms) {
  return apply_codebook(terms, book());
}

std::vector<CodedTerm> of(std::initializer_list<std::pair<TermCategory, int>> spec) {
  std::vector<CodedTerm> out;
  int n = 0;
  for (auto [c, k] : spec)
    for (int i = 0; i < k; ++i) out.push_back({"t" + std::to_string(n++), c});
  return out;
}

}  // namespace

TEST_SUITE("coding") {
  TEST_CASE("apply_codebook examples") {
    auto c = coded({"codogno", "#sardine", "xyzzy", "Codogno", "caso sospetto"});
    CHECK(c[0].second == TermCategory::Italy);
    CHECK(c[1].second == TermCategory::Uncoded);
    CHECK(c[2].second == TermCategory::Uncoded);
    CHECK(c[3].second == TermCategory::Italy);
    CHECK(c[4].first == "caso sospetto");
    CHECK(c[4].second == book().category_of("caso_sospetto"));
    CHECK(c[4].second != TermCategory::Uncoded);
  }

  TEST_CASE("codebook parsing") {
    auto dir = testutil::scratch("codebook");
    testutil::write_file(dir / "ok.tsv", "# term\tcategory\nzona rossa\tpolicy\n");
    CHECK(Codebook::load(dir / "ok.tsv").category_of("zona_rossa") == TermCategory::Policy);
    testutil::write_file(dir / "bad.tsv", "a\tPolicy\nb\tWeather\n");
    try {
      Codebook::load(dir / "bad.tsv");
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BadCodebook);
      CHECK(e.line() == 2);
    }
    testutil::write_file(dir / "notab.tsv", "a Policy\n");
    CHECK(testutil::code_of([&] { Codebook::load(dir / "notab.tsv"); }) == ErrorCode::BadCodebook);
    CHECK(testutil::code_of([&] { Codebook::load(dir / "missing.tsv"); }) == ErrorCode::Io);
  }

  TEST_CASE("half-up rounding on exact fractions") {
    CHECK(round_half_up_2dp(1, 8) == "0.13");   // 0.125
    CHECK(round_half_up_2dp(23, 59) == "0.39");
    CHECK(round_half_up_2dp(23, 60) == "0.38");
    CHECK(round_half_up_2dp(1, 59) == "0.02");
    CHECK(round_half_up_2dp(1, 1) == "1.00");
    CHECK(round_half_up_2dp(0, 3) == "0.00");
    CHECK(round_half_up_2dp(1, 200) == "0.01");  // 0.005
  }

  TEST_CASE("Pre row under IncludeUncoded") {
    auto lists = table1::load_lists(testutil::data_dir() / "table1" / "lists.tsv");
    std::vector<std::vector<CodedTerm>> row{coded(lists.at({"Pre", "Periphery"})),
                                            coded(lists.at({"Pre", "Epicentre"}))};
    auto t = category_ratios(row, DenominatorConvention::IncludeUncoded, "Pre");
    CHECK(t.total_terms == 20);
    CHECK(t.uncoded == 1);
    CHECK(t.find(TermCategory::External)->count == 5);
    CHECK(t.find(TermCategory::External)->display() == "0.25");
    CHECK(t.find(TermCategory::Spread)->display() == "0.20");
    CHECK(t.find(TermCategory::Italy)->display() == "0.20");
    CHECK(t.find(TermCategory::Event)->display() == "0.10");
    for (auto c : {TermCategory::News, TermCategory::Solidarity, TermCategory::Person,
                   TermCategory::Policy})
      CHECK(t.find(c)->display() == "0.05");
    CHECK_FALSE(t.find(TermCategory::Football).has_value());
    CHECK(t.entries.front().category == TermCategory::External);
  }

  TEST_CASE("Initial row is the same under both conventions") {
    auto lists = table1::load_lists(testutil::data_dir() / "table1" / "lists.tsv");
    std::vector<std::vector<CodedTerm>> row{coded(lists.at({"Initial", "Periphery"})),
                                            coded(lists.at({"Initial", "Epicentre"}))};
    for (auto conv : {DenominatorConvention::IncludeUncoded, DenominatorConvention::ExcludeUncoded}) {
      auto t = category_ratios(row, conv);
      CHECK(t.uncoded == 0);
      CHECK(t.display() == "Italy:0.40, Football:0.30, Spread:0.20, External:0.05, Policy:0.05");
    }
  }

  TEST_CASE("Periphery column under ExcludeUncoded") {
    auto lists = table1::load_lists(testutil::data_dir() / "table1" / "lists.tsv");
    std::vector<std::vector<CodedTerm>> col;
    for (const auto& p : table1::kPeriods) col.push_back(coded(lists.at({p, "Periphery"})));
    auto t = category_ratios(col, DenominatorConvention::ExcludeUncoded);
    CHECK(t.total_terms == 60);
    CHECK(t.uncoded == 1);
    CHECK(t.find(TermCategory::Italy)->count == 23);
    CHECK(t.find(TermCategory::Italy)->denominator == 59);
    CHECK(t.find(TermCategory::Italy)->display() == "0.39");
    CHECK(t.find(TermCategory::News)->display() == "0.02");
  }

  TEST_CASE("ratio errors and conventions") {
    std::vector<std::vector<CodedTerm>> none;
    CHECK(testutil::code_of([&] {
            category_ratios(none, DenominatorConvention::IncludeUncoded);
          }) == ErrorCode::EmptyInput);
    std::vector<std::vector<CodedTerm>> only_uncoded{of({{TermCategory::Uncoded, 3}})};
    CHECK(category_ratios(only_uncoded, DenominatorConvention::IncludeUncoded).entries.empty());
    CHECK(testutil::code_of([&] {
            category_ratios(only_uncoded, DenominatorConvention::ExcludeUncoded);
          }) == ErrorCode::EmptyInput);
    CHECK(parse_convention("exclude_uncoded") == DenominatorConvention::ExcludeUncoded);
    CHECK(parse_convention("include_uncoded") == DenominatorConvention::IncludeUncoded);
    CHECK(testutil::code_of([] { parse_convention("half"); }) == ErrorCode::Config);
  }
}

TEST_SUITE("coding properties") {
  TEST_CASE("ratios are exact fractions that sum as declared") {
    std::mt19937_64 rng(81);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::vector<CodedTerm>> lists(1 + rng() % 6);
      std::size_t uncoded = 0, total = 0;
      for (auto& l : lists)
        for (int i = 0, n = int(rng() % 12); i < n; ++i) {
          auto c = kTermCategories[rng() % kTermCategories.size()];
          l.push_back({"t", c});
          ++total;
          uncoded += c == TermCategory::Uncoded;
        }
      if (total == uncoded) continue;
      auto inc = category_ratios(lists, DenominatorConvention::IncludeUncoded);
      auto exc = category_ratios(lists, DenominatorConvention::ExcludeUncoded);
      double si = 0, se = 0;
      for (const auto& e : inc.entries) {
        CHECK(e.denominator == total);
        CHECK(e.ratio == double(e.count) / double(e.denominator));
        si += e.ratio;
      }
      for (const auto& e : exc.entries) {
        CHECK(e.denominator == total - uncoded);
        se += e.ratio;
      }
      CHECK(std::abs(si + double(uncoded) / double(total) - 1.0) <= 1e-9);
      CHECK(std::abs(se - 1.0) <= 1e-9);
      for (std::size_t i = 1; i < inc.entries.size(); ++i)
        CHECK(inc.entries[i - 1].count >= inc.entries[i].count);
    }
  }

  TEST_CASE("apply_codebook is total and idempotent") {
    auto lists = table1::load_lists(testutil::data_dir() / "table1" / "lists.tsv");
    for (const auto& [key, terms] : lists) {
      auto once = coded(terms);
      REQUIRE(once.size() == terms.size());
      std::vector<std::string> back;
      for (const auto& [t, c] : once) back.push_back(t);
      CHECK(coded(back) == once);
    }
  }
}
