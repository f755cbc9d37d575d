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

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stcorpus/calendar.hpp"
#include "stcorpus/ingest.hpp"

namespace stcorpus {

struct Period {
  std::string name;
  Day start;
};

/// Consecutive half-open periods [start_i, start_{i+1}) closed by `end`.
class PeriodConfig {
 public:
  PeriodConfig(std::vector<Period> periods, Day end);

  /// Pre 2020-01-27, Initial 02-19, Northern 02-23, National 03-10,
  /// Prolongation 04-11, Relaxing 05-05, end 2020-06-01.
  static PeriodConfig defaults();

  const std::vector<Period>& periods() const { return periods_; }
  Day start() const { return periods_.front().start; }
  Day end() const { return end_; }
  Day end_of(std::size_t index) const;
  Window window() const { return {Instant{start()}, Instant{end_}}; }

  /// Index of the period holding the instant's UTC date; OutOfRange otherwise.
  std::size_t index_of(Instant t) const;

 private:
  std::vector<Period> periods_;
  Day end_;
};

const std::string& assign_period(Instant t, const PeriodConfig& periods);

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
};

enum class SeriesType { Original, Retweet, All };

std::string_view to_string(SeriesType t);

struct SeriesKey {
  std::string group;
  SeriesType type = SeriesType::All;

  auto operator<=>(const SeriesKey&) const = default;
};

struct TimeSeriesPanel {
  std::vector<SeriesKey> groups;
  Day first_day;
  std::size_t n_days = 0;
  std::vector<std::vector<std::uint64_t>> counts;  // group x day
  Matrix normalized;
  Matrix residual;

  Day date(std::size_t d) const { return first_day + std::chrono::days{static_cast<int>(d)}; }
  std::size_t row_of(const SeriesKey& key) const;  // throws OutOfRange
};

struct SeriesObservation {
  std::string group;  // empty = unmapped, ignored
  TweetType type = TweetType::Original;
  Instant at;
};

/// Daily UTC counts over [first, end). With `split_types` every group gets an
/// Original and a Retweet row; otherwise one All row. Rows sorted by key.
TimeSeriesPanel build_series(std::span<const SeriesObservation> observations, Day first, Day end,
                             bool split_types);

/// Fills `normalized`: each row divided by its sum; zero rows stay zero.
void normalize_series(TimeSeriesPanel& panel);

/// Fills the `residual` rows of one series type: normalized minus the
/// per-day mean over all rows of that type.
void remove_mean_trend(TimeSeriesPanel& panel, SeriesType type);

/// Every series type present in the panel.
void remove_mean_trend(TimeSeriesPanel& panel);

/// Centred rolling mean, truncated at the edges. Window 1 is the identity.
Matrix smooth_rows(const Matrix& m, std::size_t window);

struct KMeansOptions {
  std::size_t restarts = 20;
  std::size_t max_iter = 300;
  double tol = 1e-6;  // relative inertia change
};

struct ClusterResult {
  std::size_t k = 0;
  std::vector<std::string> ids;
  std::vector<int> labels;  // parallel to ids
  Matrix centroids;         // k x days
  double inertia = 0.0;
  double silhouette = 0.0;
  std::uint64_t seed = 0;
  std::size_t best_restart = 0;
  std::vector<double> inertia_trace;  // per Lloyd step of the winning restart
  std::vector<std::string> warnings;

  std::map<std::string, int> assignment() const;
};

/// Lloyd's algorithm with k-means++ seeding; restart r draws from
/// mt19937_64(seed + r). Labels are canonical: label 0 holds the
/// lexicographically smallest id, label 1 the smallest id not in 0, ...
/// k = 1 is accepted.
ClusterResult kmeans(const Matrix& series, std::span<const std::string> ids, std::size_t k,
                     std::uint64_t seed, const KMeansOptions& options = {});

/// Mean silhouette with Euclidean distance; singleton members score 0.
double silhouette_score(const Matrix& series, std::span<const int> labels);

/// Runs kmeans for every k in [k_min, k_max] and keeps the best silhouette
/// (ties go to the smaller k).
ClusterResult select_k(const Matrix& series, std::span<const std::string> ids, std::size_t k_min,
                       std::size_t k_max, std::uint64_t seed, const KMeansOptions& options = {});

}  // namespace stcorpus
