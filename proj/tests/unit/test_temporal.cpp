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
#include <map>
#include <random>
#include <tuple>

#include "../support/oracles.hpp"
#include "helpers.hpp"
#include "stcorpus/error.hpp"
#include "stcorpus/temporal.hpp"

using namespace stcorpus;
using testutil::at;
using testutil::day;

namespace {

std::vector<std::string> ids_of(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("g" + std::to_string(10 + i));
  return ids;
}

Matrix blobs(std::size_t per, std::size_t k, std::uint64_t seed, std::vector<int>* truth) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<std::vector<double>> rows;
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t i = 0; i < per; ++i) {
      rows.push_back({10.0 * double(c) + noise(rng), 5.0 * double(c % 2) + noise(rng)});
      truth->push_back(int(c));
    }
  return Matrix::from_rows(rows);
}

}  // namespace

TEST_SUITE("temporal") {
  TEST_CASE("default periods and assignment") {
    auto p = PeriodConfig::defaults();
    REQUIRE(p.periods().size() == 6);
    CHECK(assign_period(at("2020-03-10T00:00:00Z"), p) == "National");
    CHECK(assign_period(at("2020-04-10T23:59:59Z"), p) == "National");
    CHECK(assign_period(at("2020-04-11T00:00:00Z"), p) == "Prolongation");
    CHECK(assign_period(at("2020-05-05T00:00:00Z"), p) == "Relaxing");
    CHECK(assign_period(at("2020-02-18T12:00:00Z"), p) == "Pre");
    CHECK(assign_period(at("2020-02-22T12:00:00Z"), p) == "Initial");
    CHECK(testutil::code_of([&] { assign_period(at("2020-01-15T00:00:00Z"), p); }) ==
          ErrorCode::OutOfRange);
    CHECK(testutil::code_of([&] { assign_period(at("2020-06-01T00:00:00Z"), p); }) ==
          ErrorCode::OutOfRange);
  }

  TEST_CASE("period starts must increase") {
    CHECK(testutil::code_of([] {
            PeriodConfig({{"a", day("2020-02-01")}, {"b", day("2020-02-01")}}, day("2020-03-01"));
          }) == ErrorCode::Config);
    CHECK(testutil::code_of([] {
            PeriodConfig({{"a", day("2020-02-01")}}, day("2020-02-01"));
          }) == ErrorCode::Config);
  }

  TEST_CASE("build_series counts per group and day") {
    std::vector<SeriesObservation> obs{
        {"A", TweetType::Original, at("2020-03-01T01:00:00Z")},
        {"A", TweetType::Original, at("2020-03-01T10:00:00Z")},
        {"A", TweetType::Retweet, at("2020-03-01T23:59:59Z")},
        {"", TweetType::Original, at("2020-03-01T05:00:00Z")},
        {"B", TweetType::Original, at("2020-03-02T00:00:00Z")},
    };
    auto all = build_series(obs, day("2020-03-01"), day("2020-03-03"), false);
    REQUIRE(all.groups.size() == 2);
    CHECK(all.n_days == 2);
    CHECK(all.counts[all.row_of({"A", SeriesType::All})][0] == 3);
    CHECK(all.counts[all.row_of({"B", SeriesType::All})][1] == 1);
    std::uint64_t total = 0;
    for (const auto& r : all.counts)
      for (auto c : r) total += c;
    CHECK(total == 4);  // the unmapped observation is not counted

    auto split = build_series(obs, day("2020-03-01"), day("2020-03-03"), true);
    CHECK(split.groups.size() == 4);
    CHECK(split.counts[split.row_of({"A", SeriesType::Original})][0] == 2);
    CHECK(split.counts[split.row_of({"A", SeriesType::Retweet})][0] == 1);
    CHECK(testutil::code_of([&] { split.row_of({"Z", SeriesType::All}); }) == ErrorCode::OutOfRange);

    CHECK(testutil::code_of([&] {
            build_series(obs, day("2020-04-01"), day("2020-04-03"), false);
          }) == ErrorCode::EmptyWindow);
  }

  TEST_CASE("build_series matches an independent tally") {
    std::mt19937_64 rng(41);
    std::vector<SeriesObservation> obs;
    const auto first = day("2020-02-01");
    for (int i = 0; i < 5000; ++i)
      obs.push_back({std::string(1, char('A' + rng() % 4)),
                     rng() % 3 ? TweetType::Original : TweetType::Retweet,
                     Instant{first} + std::chrono::seconds(long(rng() % (40L * 86400)))});
    auto panel = build_series(obs, first, first + std::chrono::days{30}, true);
    // Oracle: sort the observations, then tally runs of equal keys.
    std::vector<std::tuple<std::string, int, long>> keys;
    for (const auto& o : obs) {
      long d = (utc_day(o.at) - first).count();
      if (d < 30) keys.emplace_back(o.group, int(o.type), d);
    }
    std::sort(keys.begin(), keys.end());
    std::map<std::tuple<std::string, int, long>, std::uint64_t> tally;
    for (const auto& k : keys) ++tally[k];
    for (std::size_t r = 0; r < panel.groups.size(); ++r)
      for (std::size_t d = 0; d < panel.n_days; ++d) {
        const int type = panel.groups[r].type == SeriesType::Original ? 0 : 1;
        auto it = tally.find({panel.groups[r].group, type, long(d)});
        CHECK(panel.counts[r][d] == (it == tally.end() ? 0 : it->second));
      }
  }

  TEST_CASE("normalize_series examples") {
    std::vector<SeriesObservation> obs;
    auto d0 = day("2020-03-01");
    for (int d = 0; d < 3; ++d)
      for (int i = 0; i < (d == 0 ? 2 : d == 1 ? 3 : 5); ++i)
        obs.push_back({"A", TweetType::Original, Instant{d0 + std::chrono::days{d}}});
    for (int d = 0; d < 3; ++d)
      for (int i = 0; i < (d == 0 ? 20 : d == 1 ? 30 : 50); ++i)
        obs.push_back({"B", TweetType::Original, Instant{d0 + std::chrono::days{d}}});
    auto p = build_series(obs, d0, d0 + std::chrono::days{3}, false);
    p.groups.push_back({"Z", SeriesType::All});
    p.counts.push_back({0, 0, 0});
    normalize_series(p);
    auto a = p.row_of({"A", SeriesType::All});
    auto b = p.row_of({"B", SeriesType::All});
    CHECK(p.normalized(a, 0) == doctest::Approx(0.2));
    CHECK(p.normalized(a, 1) == doctest::Approx(0.3));
    CHECK(p.normalized(a, 2) == doctest::Approx(0.5));
    for (std::size_t d = 0; d < 3; ++d) CHECK(p.normalized(a, d) == p.normalized(b, d));
    auto z = p.row_of({"Z", SeriesType::All});
    CHECK(p.normalized(z, 0) == 0.0);
    CHECK(p.normalized(z, 1) == 0.0);
  }

  TEST_CASE("remove_mean_trend examples") {
    TimeSeriesPanel p;
    p.groups = {{"A", SeriesType::All}, {"B", SeriesType::All}};
    p.n_days = 2;
    p.first_day = day("2020-03-01");
    p.counts = {{5, 5}, {3, 7}};
    normalize_series(p);
    remove_mean_trend(p, SeriesType::All);
    CHECK(p.residual(0, 0) == doctest::Approx(0.1));
    CHECK(p.residual(0, 1) == doctest::Approx(-0.1));
    CHECK(p.residual(1, 0) == doctest::Approx(-0.1));
    CHECK(p.residual(1, 1) == doctest::Approx(0.1));

    TimeSeriesPanel one;
    one.groups = {{"A", SeriesType::All}};
    one.n_days = 3;
    one.first_day = p.first_day;
    one.counts = {{1, 4, 2}};
    normalize_series(one);
    remove_mean_trend(one);
    for (double v : one.residual.data) CHECK(v == 0.0);
  }

  TEST_CASE("smoothing") {
    auto m = Matrix::from_rows({{0, 3, 0, 3}});
    CHECK(smooth_rows(m, 1).data == m.data);
    auto s = smooth_rows(m, 3);
    CHECK(s(0, 0) == doctest::Approx(1.5));
    CHECK(s(0, 1) == doctest::Approx(1.0));
    CHECK(s(0, 3) == doctest::Approx(1.5));
  }

  TEST_CASE("k = 1 gives the mean row and total scatter") {
    auto m = Matrix::from_rows({{0, 0}, {2, 0}, {4, 6}});
    auto ids = ids_of(3);
    auto r = kmeans(m, ids, 1, 0);
    CHECK(r.centroids(0, 0) == doctest::Approx(2.0));
    CHECK(r.centroids(0, 1) == doctest::Approx(2.0));
    // Sum of squared deviations: (4+4)+(0+4)+(4+16).
    CHECK(r.inertia == doctest::Approx(32.0));
  }

  TEST_CASE("separable groups are recovered exactly") {
    auto m = Matrix::from_rows({{0, 0, 1}, {9, 9, 9}, {0, 0, 1}, {9, 9, 9}, {0, 0, 1}});
    std::vector<std::string> ids{"e", "a", "d", "b", "c"};
    auto r = kmeans(m, ids, 2, 3);
    CHECK(r.inertia == 0.0);
    auto a = r.assignment();
    CHECK(a["a"] == 0);
    CHECK(a["b"] == 0);
    CHECK(a["c"] == 1);
    CHECK(a["d"] == 1);
    CHECK(a["e"] == 1);
    CHECK(r.silhouette == doctest::Approx(1.0));
  }

  TEST_CASE("fixed seed is bitwise deterministic") {
    std::vector<int> truth;
    auto m = blobs(15, 3, 8, &truth);
    auto ids = ids_of(m.rows);
    auto a = kmeans(m, ids, 3, 99);
    auto b = kmeans(m, ids, 3, 99);
    CHECK(a.labels == b.labels);
    CHECK(a.centroids.data == b.centroids.data);
    CHECK(a.inertia == b.inertia);
    CHECK(a.best_restart == b.best_restart);
  }

  TEST_CASE("kmeans argument checks") {
    auto m = Matrix::from_rows({{0}, {1}, {2}});
    auto ids = ids_of(3);
    CHECK(testutil::code_of([&] { kmeans(m, ids, 0, 0); }) == ErrorCode::BadK);
    CHECK(testutil::code_of([&] { kmeans(m, ids, 4, 0); }) == ErrorCode::BadK);
    CHECK(testutil::code_of([&] { select_k(m, ids, 1, 2, 0); }) == ErrorCode::BadK);
    CHECK(testutil::code_of([&] { select_k(m, ids, 3, 2, 0); }) == ErrorCode::BadK);
  }

  TEST_CASE("identical rows warn and stay deterministic") {
    auto m = Matrix::from_rows({{1, 1}, {1, 1}, {1, 1}, {1, 1}});
    auto ids = ids_of(4);
    auto a = kmeans(m, ids, 2, 5);
    auto b = kmeans(m, ids, 2, 5);
    REQUIRE_FALSE(a.warnings.empty());
    CHECK(a.warnings[0].rfind("DegenerateData", 0) == 0);
    CHECK(a.labels == b.labels);
    CHECK(a.silhouette == 0.0);
  }

  TEST_CASE("silhouette examples") {
    auto pairs = Matrix::from_rows({{0, 0}, {0, 0}, {10, 10}, {10, 10}});
    std::vector<int> lab{0, 0, 1, 1};
    CHECK(silhouette_score(pairs, lab) == doctest::Approx(1.0));

    auto same = Matrix::from_rows({{3, 3}, {3, 3}, {3, 3}, {3, 3}});
    CHECK(silhouette_score(same, std::vector<int>{0, 1, 0, 1}) == 0.0);

    std::vector<int> truth;
    auto m = blobs(20, 3, 1, &truth);
    std::vector<int> shuffled = truth;
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(2));
    const double good = silhouette_score(m, truth);
    const double bad = silhouette_score(m, shuffled);
    CHECK(good > bad);
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < m.rows; ++r) rows.emplace_back(m.row(r).begin(), m.row(r).end());
    CHECK(good == doctest::Approx(oracle::silhouette(rows, truth)).epsilon(1e-12));
    CHECK(bad == doctest::Approx(oracle::silhouette(rows, shuffled)).epsilon(1e-12));

    CHECK(testutil::code_of([&] { silhouette_score(pairs, std::vector<int>{0, 0, 1}); }) ==
          ErrorCode::BadAssignment);
    CHECK(testutil::code_of([&] { silhouette_score(pairs, std::vector<int>{0, 0, 0, 0}); }) ==
          ErrorCode::BadAssignment);
  }

  TEST_CASE("select_k recovers the planted number of shapes") {
    for (std::size_t shapes : {2u, 3u}) {
      auto p = oracle::two_shape_panel(18, 60, 0.02, 100 + shapes, shapes);
      auto m = Matrix::from_rows(p.rows);
      auto r = select_k(m, p.ids, 2, 8, 7);
      CHECK(r.k == shapes);
      CHECK(oracle::partition(p.ids, r.labels) == oracle::partition(p.ids, p.truth));
      // Exhaustive sweep oracle: no k scores higher than the chosen one.
      for (std::size_t k = 2; k <= 8; ++k)
        CHECK(kmeans(m, p.ids, k, 7).silhouette <= r.silhouette);
    }
  }

  TEST_CASE("a single-k range returns that k") {
    auto p = oracle::two_shape_panel(12, 40, 0.02, 5, 3);
    auto r = select_k(Matrix::from_rows(p.rows), p.ids, 2, 2, 1);
    CHECK(r.k == 2);
  }
}

TEST_SUITE("temporal properties") {
  TEST_CASE("normalized rows sum to one and residuals to zero") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<SeriesObservation> obs;
      const auto first = day("2020-02-01");
      for (int i = 0, n = 200 + int(rng() % 2000); i < n; ++i)
        obs.push_back({"G" + std::to_string(rng() % 9),
                       rng() % 2 ? TweetType::Original : TweetType::Retweet,
                       Instant{first} + std::chrono::seconds(long(rng() % (60L * 86400)))});
      auto p = build_series(obs, first, first + std::chrono::days{60}, true);
      normalize_series(p);
      remove_mean_trend(p);
      for (std::size_t r = 0; r < p.groups.size(); ++r) {
        double s = 0;
        std::uint64_t raw = 0;
        for (std::size_t d = 0; d < p.n_days; ++d) {
          s += p.normalized(r, d);
          raw += p.counts[r][d];
        }
        if (raw)
          CHECK(std::abs(s - 1.0) <= 1e-12);
        else
          CHECK(s == 0.0);
      }
      for (auto type : {SeriesType::Original, SeriesType::Retweet})
        for (std::size_t d = 0; d < p.n_days; ++d) {
          double sum = 0;
          for (std::size_t r = 0; r < p.groups.size(); ++r)
            if (p.groups[r].type == type) sum += p.residual(r, d);
          CHECK(std::abs(sum) <= 1e-9);
        }
    }
  }

  TEST_CASE("period fibres partition the window") {
    auto p = PeriodConfig::defaults();
    std::map<std::string, int> days;
    std::string prev;
    std::size_t changes = 0;
    for (auto d = p.start(); d < p.end(); d += std::chrono::days{1}) {
      const auto& name = assign_period(Instant{d} + std::chrono::hours{12}, p);
      ++days[name];
      if (name != prev) ++changes;
      prev = name;
    }
    CHECK(changes == 6);
    int total = 0;
    for (const auto& [n, c] : days) total += c;
    CHECK(total == (p.end() - p.start()).count());
    CHECK(days["National"] == 32);
    CHECK(days["Initial"] == 4);
  }

  TEST_CASE("inertia never increases and silhouette stays in range") {
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 5 + rng() % 30, d = 1 + rng() % 10;
      Matrix m(n, d);
      for (auto& v : m.data) v = std::uniform_real_distribution<double>(0, 1)(rng);
      auto ids = ids_of(n);
      for (std::size_t k = 1; k <= std::min<std::size_t>(6, n - 1); ++k) {
        auto r = kmeans(m, ids, k, trial);
        REQUIRE_FALSE(r.inertia_trace.empty());
        for (std::size_t i = 1; i < r.inertia_trace.size(); ++i)
          CHECK(r.inertia_trace[i] <= r.inertia_trace[i - 1]);
        CHECK(r.inertia_trace.back() == r.inertia);
        CHECK(r.inertia >= 0.0);
        CHECK(r.silhouette >= -1.0);
        CHECK(r.silhouette <= 1.0);
        CHECK(r.labels.size() == n);
      }
    }
  }

  TEST_CASE("relabelling input rows never changes the partition") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto p = oracle::two_shape_panel(16, 30, 0.05, 300 + seed, 2);
      auto base = kmeans(Matrix::from_rows(p.rows), p.ids, 2, 11);
      std::vector<std::size_t> perm(p.ids.size());
      for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), std::mt19937_64(seed));
      std::vector<std::vector<double>> rows;
      std::vector<std::string> ids;
      for (auto i : perm) {
        rows.push_back(p.rows[i]);
        ids.push_back(p.ids[i]);
      }
      auto moved = kmeans(Matrix::from_rows(rows), ids, 2, 11);
      CHECK(oracle::partition(ids, moved.labels) == oracle::partition(p.ids, base.labels));
      // Canonical labels: the smallest id always sits in cluster 0.
      auto smallest = std::min_element(ids.begin(), ids.end()) - ids.begin();
      CHECK(moved.labels[std::size_t(smallest)] == 0);
    }
  }
}
