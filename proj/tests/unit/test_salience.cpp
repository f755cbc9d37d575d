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

#include <algorithm>
#include <random>

#include "../support/oracles.hpp"
#include "helpers.hpp"
#include "stcorpus/error.hpp"
#include "stcorpus/salience.hpp"

using namespace stcorpus;

namespace {

TermDoc doc(std::vector<std::string> terms, TweetType t = TweetType::Original) {
  TermDoc d;
  d.terms = std::move(terms);
  d.tweet_type = t;
  return d;
}

TermCategoryCounts table(std::vector<std::string> vocab, std::vector<std::string> cats,
                         std::vector<std::vector<std::uint64_t>> counts) {
  TermCategoryCounts c;
  c.vocabulary = std::move(vocab);
  c.categories = std::move(cats);
  c.counts = std::move(counts);
  c.category_totals.assign(c.categories.size(), 0);
  for (const auto& row : c.counts)
    for (std::size_t j = 0; j < row.size(); ++j) c.category_totals[j] += row[j];
  return c;
}

struct RandomCorpus {
  std::vector<TermDoc> docs;
  std::vector<std::string> labels;
};

RandomCorpus random_corpus(std::mt19937_64& rng, std::size_t terms, std::size_t cats) {
  RandomCorpus c;
  for (int i = 0, n = 20 + int(rng() % 200); i < n; ++i) {
    std::vector<std::string> t;
    for (int j = 0, m = 1 + int(rng() % 8); j < m; ++j) {
      // Skewed draw so term frequencies spread out.
      const auto r = rng() % terms;
      t.push_back("t" + std::to_string(r * r / terms));
    }
    c.docs.push_back(doc(t, rng() % 5 == 0 ? TweetType::Retweet : TweetType::Original));
    c.labels.push_back("c" + std::to_string(rng() % cats));
  }
  return c;
}

}  // namespace

TEST_SUITE("salience") {
  TEST_CASE("build_counts examples") {
    std::vector<TermDoc> docs{doc({"a", "a", "b"})};
    std::vector<std::string> labels{"X"};
    CountOptions o;
    o.min_count = 1;
    auto c = build_counts(docs, labels, o);
    CHECK(c.vocabulary == std::vector<std::string>{"a", "b"});
    CHECK(c.counts[0][0] == 2);
    CHECK(c.counts[1][0] == 1);

    docs.push_back(doc({"z", "z"}, TweetType::Retweet));
    labels.push_back("X");
    CHECK(build_counts(docs, labels, o).vocabulary.size() == 2);

    std::vector<TermDoc> two{doc({"a", "b"}), doc({"c", "d"})};
    auto block = build_counts(two, std::vector<std::string>{"P", "Q"}, o);
    CHECK(block.counts == std::vector<std::vector<std::uint64_t>>{{1, 0}, {1, 0}, {0, 1}, {0, 1}});

    o.document_counts = true;
    CHECK(build_counts(std::vector<TermDoc>{doc({"a", "a"})}, std::vector<std::string>{"X"}, o)
              .counts[0][0] == 1);
  }

  TEST_CASE("build_counts errors") {
    std::vector<TermDoc> rts{doc({"a"}, TweetType::Retweet)};
    CHECK(testutil::code_of([&] { build_counts(rts, std::vector<std::string>{"X"}); }) ==
          ErrorCode::EmptyCorpus);
    std::vector<TermDoc> rare{doc({"a"})};
    CHECK(testutil::code_of([&] { build_counts(rare, std::vector<std::string>{"X"}); }) ==
          ErrorCode::EmptyCorpus);
    CHECK(testutil::code_of([&] { build_counts(rare, std::vector<std::string>{}); }) ==
          ErrorCode::MissingLabel);
  }

  TEST_CASE("precision and recall by hand") {
    // Focal total 10: the term has 3 of them and 1 elsewhere.
    auto c = table({"t", "u"}, {"F", "R"}, {{3, 1}, {7, 0}});
    auto pr = precision_recall(c, 0);
    CHECK(pr.precision[0] == doctest::Approx(0.75));
    CHECK(pr.recall[0] == doctest::Approx(0.3));
    CHECK(pr.precision[1] == 1.0);
    auto other = precision_recall(table({"t", "u"}, {"F", "R"}, {{0, 1}, {7, 0}}), 0);
    CHECK(other.precision[0] == 0.0);
    CHECK(other.recall[0] == 0.0);
  }

  TEST_CASE("normal_cdf_transform examples") {
    auto z = normal_cdf_transform(std::vector<double>{0.2, 0.5, 0.8});
    CHECK(z[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(z[2] == doctest::Approx(0.841345).epsilon(1e-6));
    CHECK(z[2] == doctest::Approx(boost::math::cdf(boost::math::normal(), 1.0)).epsilon(1e-14));
    for (double v : normal_cdf_transform(std::vector<double>{4, 4, 4})) CHECK(v == 0.5);
    CHECK(normal_cdf_transform(std::vector<double>{7}) == std::vector<double>{0.5});
    CHECK(standard_normal_cdf(0.0) == 0.5);
  }

  TEST_CASE("sfs harmonic mean examples") {
    // 2 * 0.841345 * 0.5 / 1.341345 = 0.627241 to six places.
    const double p = 0.841345, r = 0.5;
    CHECK(2 * p * r / (p + r) == doctest::Approx(0.627241).epsilon(1e-6));
    // Two terms cover both branches of the shipped scorer at beta 1 and 2.
    auto c = table({"a", "b", "c"}, {"F", "R"}, {{8, 2}, {2, 8}, {5, 5}});
    for (double beta : {1.0, 2.0, 0.5}) {
      for (const auto& e : scaled_f_score(c, 0, beta)) {
        const double b2 = beta * beta;
        CHECK(e.sfs == doctest::Approx((1 + b2) * e.precision_cdf * e.recall_cdf /
                                       (b2 * e.precision_cdf + e.recall_cdf)));
        if (e.precision_cdf == e.recall_cdf) CHECK(e.sfs == doctest::Approx(e.precision_cdf));
      }
    }
    // Symmetric table: precision and recall ranks agree, so P-hat equals R-hat.
    auto sym = table({"a", "b", "c"}, {"F", "R"}, {{2, 8}, {3, 7}, {5, 5}});
    for (const auto& e : scaled_f_score(sym, 0, 3.0))
      CHECK(e.sfs == doctest::Approx(e.precision_cdf).epsilon(1e-12));
    CHECK(testutil::code_of([&] { scaled_f_score(c, 0, 0.0); }) == ErrorCode::Config);
  }

  TEST_CASE("top_terms truncation and ranking ties") {
    auto c = table({"a", "b", "c"}, {"F", "R"}, {{9, 1}, {5, 5}, {1, 9}});
    auto ranked = scaled_f_score(c, 0);
    CHECK(top_terms(ranked, 10).size() == 3);
    CHECK(top_terms(ranked, 1) == std::vector<std::string>{"a"});
    auto tie = table({"y", "x"}, {"F", "R"}, {{5, 5}, {5, 5}});
    tie.vocabulary = {"x", "y"};
    CHECK(top_terms(scaled_f_score(tie, 0), 2) == std::vector<std::string>{"x", "y"});
  }

  TEST_CASE("planted focal-exclusive term ranks first") {
    std::mt19937_64 rng(61);
    std::vector<TermDoc> docs;
    std::vector<std::string> labels;
    for (int i = 0; i < 600; ++i) {
      std::vector<std::string> t;
      for (int j = 0; j < 6; ++j) t.push_back("w" + std::to_string(rng() % 40));
      const bool focal = i % 3 == 0;
      if (focal && rng() % 4 == 0) t.push_back("piantato");
      docs.push_back(doc(t));
      labels.push_back(focal ? "F" : (i % 3 == 1 ? "G" : "H"));
    }
    auto c = build_counts(docs, labels);
    auto ranked = scaled_f_score(c, c.category_index("F"));
    CHECK(ranked.front().term == "piantato");
    auto ref = oracle::sfs(docs, labels, "F", 5, 1.0);
    auto best = std::max_element(ref.begin(), ref.end(), [](const auto& a, const auto& b) {
      return a.second.sfs < b.second.sfs;
    });
    CHECK(best->first == "piantato");
  }

  TEST_CASE("marginal labellings") {
    std::vector<TermDoc> docs;
    const char* periods[] = {"Pre", "Initial", "Northern", "National", "Prolongation", "Relaxing"};
    for (const char* p : periods)
      for (const char* s : {"Epicentre", "Periphery"}) {
        auto d = doc({"x"});
        d.period = p;
        d.spatial = s;
        docs.push_back(d);
      }
    auto count = [](std::vector<std::string> v) {
      std::sort(v.begin(), v.end());
      return std::size_t(std::unique(v.begin(), v.end()) - v.begin());
    };
    CHECK(count(marginalize(docs, MarginalAxis::None)) == 12);
    CHECK(count(marginalize(docs, MarginalAxis::Temporal)) == 2);
    CHECK(count(marginalize(docs, MarginalAxis::Spatial)) == 6);
    CHECK(marginalize(docs, MarginalAxis::None)[0] == "Pre|Epicentre");
    docs[3].spatial.clear();
    CHECK(testutil::code_of([&] { marginalize(docs, MarginalAxis::None); }) ==
          ErrorCode::MissingLabel);
    CHECK(marginalize(docs, MarginalAxis::Spatial).size() == docs.size());
  }

  TEST_CASE("most frequent terms ignore retweets") {
    std::vector<TermDoc> docs{doc({"a", "b", "b"}), doc({"c", "c", "c"}, TweetType::Retweet),
                              doc({"a", "a"})};
    auto top = most_frequent_terms(docs, 2);
    REQUIRE(top.size() == 2);
    CHECK(top[0] == std::pair<std::string, std::uint64_t>{"a", 3});
    CHECK(top[1] == std::pair<std::string, std::uint64_t>{"b", 2});
  }
}

TEST_SUITE("salience properties") {
  TEST_CASE("recall sums to one and precision stays in the unit interval") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 50; ++trial) {
      auto rc = random_corpus(rng, 50, 4);
      CountOptions o;
      o.min_count = 1 + rng() % 3;
      TermCategoryCounts c;
      try {
        c = build_counts(rc.docs, rc.labels, o);
      } catch (const Error&) {
        continue;
      }
      for (std::size_t j = 0; j < c.categories.size(); ++j) {
        std::uint64_t tot = 0;
        for (const auto& row : c.counts) tot += row[j];
        CHECK(tot == c.category_totals[j]);
        if (tot == 0) continue;
        auto pr = precision_recall(c, j);
        double s = 0;
        for (double r : pr.recall) s += r;
        CHECK(std::abs(s - 1.0) <= 1e-12);
        for (double p : pr.precision) CHECK((p >= 0.0 && p <= 1.0));
      }
    }
  }

  TEST_CASE("count scaling leaves sfs unchanged bit for bit") {
    std::mt19937_64 rng(72);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t terms = 2 + rng() % 30, cats = 2 + rng() % 3;
      std::vector<std::string> vocab;
      for (std::size_t t = 0; t < terms; ++t) vocab.push_back("t" + std::to_string(100 + t));
      std::vector<std::string> names;
      for (std::size_t j = 0; j < cats; ++j) names.push_back("c" + std::to_string(j));
      std::vector<std::vector<std::uint64_t>> counts(terms, std::vector<std::uint64_t>(cats));
      for (auto& row : counts)
        for (auto& v : row) v = rng() % 20;
      counts[0][0] += 1;
      auto base = table(vocab, names, counts);
      const std::uint64_t f = 2 + rng() % 50;
      for (auto& row : counts)
        for (auto& v : row) v *= f;
      auto scaled = table(vocab, names, counts);
      auto a = scaled_f_score(base, 0), b = scaled_f_score(scaled, 0);
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].term == b[i].term);
        CHECK(a[i].sfs == b[i].sfs);
      }
    }
  }

  TEST_CASE("cdf transform preserves order") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> x(2 + rng() % 40);
      for (auto& v : x) v = std::uniform_real_distribution<double>(0, 1)(rng);
      auto z = normal_cdf_transform(x);
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) {
          if (x[i] < x[j]) CHECK(z[i] <= z[j]);
          CHECK((z[i] > 0.0 && z[i] < 1.0));
        }
    }
  }

  TEST_CASE("document order never changes the output") {
    std::mt19937_64 rng(74);
    for (int trial = 0; trial < 20; ++trial) {
      auto rc = random_corpus(rng, 30, 3);
      CountOptions o;
      o.min_count = 1;
      auto before = build_counts(rc.docs, rc.labels, o);
      std::vector<std::size_t> perm(rc.docs.size());
      for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      RandomCorpus sh;
      for (auto i : perm) {
        sh.docs.push_back(rc.docs[i]);
        sh.labels.push_back(rc.labels[i]);
      }
      auto after = build_counts(sh.docs, sh.labels, o);
      CHECK(after.vocabulary == before.vocabulary);
      CHECK(after.counts == before.counts);
      for (std::size_t j = 0; j < before.categories.size(); ++j) {
        auto a = scaled_f_score(before, j), b = scaled_f_score(after, j);
        for (std::size_t i = 0; i < a.size(); ++i) {
          CHECK(a[i].term == b[i].term);
          CHECK(a[i].sfs == b[i].sfs);
        }
      }
    }
  }

  TEST_CASE("sfs matches the brute-force oracle") {
    std::mt19937_64 rng(75);
    for (int trial = 0; trial < 30; ++trial) {
      auto rc = random_corpus(rng, 50, 4);
      CountOptions o;
      o.min_count = 1 + rng() % 2;
      auto c = build_counts(rc.docs, rc.labels, o);
      for (std::size_t j = 0; j < c.categories.size(); ++j) {
        auto ref = oracle::sfs(rc.docs, rc.labels, c.categories[j], o.min_count, 1.0);
        auto got = scaled_f_score(c, j);
        REQUIRE(got.size() == ref.size());
        for (const auto& e : got) {
          const auto& r = ref.at(e.term);
          CHECK(std::abs(e.sfs - r.sfs) <= 1e-12);
          CHECK(std::abs(e.precision - r.precision) <= 1e-12);
          CHECK(std::abs(e.recall - r.recall) <= 1e-12);
        }
      }
    }
  }
}
