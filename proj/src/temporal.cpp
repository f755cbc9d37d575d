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

#include "stcorpus/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "stcorpus/error.hpp"

namespace stcorpus {

// --- periods -------------------------------------------------------------

PeriodConfig::PeriodConfig(std::vector<Period> periods, Day end)
    : periods_(std::move(periods)), end_(end) {
  if (periods_.empty()) throw Error(ErrorCode::Config, "at least one period is required");
  for (std::size_t i = 0; i < periods_.size(); ++i) {
    if (periods_[i].name.empty()) throw Error(ErrorCode::Config, "period without a name");
    if (i > 0 && periods_[i].start <= periods_[i - 1].start)
      throw Error(ErrorCode::Config, "period '" + periods_[i].name +
                                         "' does not start after '" + periods_[i - 1].name + "'");
    for (std::size_t j = 0; j < i; ++j)
      if (periods_[j].name == periods_[i].name)
        throw Error(ErrorCode::Config, "duplicate period '" + periods_[i].name + "'");
  }
  if (end_ <= periods_.back().start)
    throw Error(ErrorCode::Config, "terminal end must follow the last period start");
}

PeriodConfig PeriodConfig::defaults() {
  using namespace std::chrono;
  return PeriodConfig({{"Pre", sys_days{2020y / 1 / 27}},
                       {"Initial", sys_days{2020y / 2 / 19}},
                       {"Northern", sys_days{2020y / 2 / 23}},
                       {"National", sys_days{2020y / 3 / 10}},
                       {"Prolongation", sys_days{2020y / 4 / 11}},
                       {"Relaxing", sys_days{2020y / 5 / 5}}},
                      sys_days{2020y / 6 / 1});
}

Day PeriodConfig::end_of(std::size_t index) const {
  return index + 1 < periods_.size() ? periods_[index + 1].start : end_;
}

std::size_t PeriodConfig::index_of(Instant t) const {
  const Day d = utc_day(t);
  if (d < start() || d >= end_)
    throw Error(ErrorCode::OutOfRange, format_date(d) + " is outside [" + format_date(start()) +
                                           ", " + format_date(end_) + ")");
  auto it = std::upper_bound(periods_.begin(), periods_.end(), d,
                             [](Day day, const Period& p) { return day < p.start; });
  return static_cast<std::size_t>(it - periods_.begin()) - 1;
}

const std::string& assign_period(Instant t, const PeriodConfig& periods) {
  return periods.periods()[periods.index_of(t)].name;
}

// --- panel ---------------------------------------------------------------

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols) throw Error(ErrorCode::Config, "ragged matrix rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

std::string_view to_string(SeriesType t) {
  switch (t) {
    case SeriesType::Original: return "original";
    case SeriesType::Retweet: return "retweet";
    case SeriesType::All: return "all";
  }
  return "all";
}

std::size_t TimeSeriesPanel::row_of(const SeriesKey& key) const {
  auto it = std::lower_bound(groups.begin(), groups.end(), key);
  if (it == groups.end() || *it != key)
    throw Error(ErrorCode::OutOfRange, "no series for group '" + key.group + "'");
  return static_cast<std::size_t>(it - groups.begin());
}

TimeSeriesPanel build_series(std::span<const SeriesObservation> observations, Day first, Day end,
                             bool split_types) {
  if (end <= first) throw Error(ErrorCode::BadWindow, "empty daily grid");
  TimeSeriesPanel panel;
  panel.first_day = first;
  panel.n_days = static_cast<std::size_t>((end - first).count());

  std::set<SeriesKey> keys;
  for (const auto& o : observations) {
    if (o.group.empty()) continue;
    const Day d = utc_day(o.at);
    if (d < first || d >= end) continue;
    if (split_types) {
      keys.insert({o.group, SeriesType::Original});
      keys.insert({o.group, SeriesType::Retweet});
    } else {
      keys.insert({o.group, SeriesType::All});
    }
  }
  if (keys.empty())
    throw Error(ErrorCode::EmptyWindow, "no mapped records between " + format_date(first) +
                                            " and " + format_date(end));
  panel.groups.assign(keys.begin(), keys.end());
  panel.counts.assign(panel.groups.size(), std::vector<std::uint64_t>(panel.n_days, 0));
  for (const auto& o : observations) {
    if (o.group.empty()) continue;
    const Day d = utc_day(o.at);
    if (d < first || d >= end) continue;
    SeriesKey key{o.group, split_types ? (o.type == TweetType::Retweet ? SeriesType::Retweet
                                                                       : SeriesType::Original)
                                       : SeriesType::All};
    ++panel.counts[panel.row_of(key)][static_cast<std::size_t>((d - first).count())];
  }
  panel.normalized = Matrix(panel.groups.size(), panel.n_days);
  panel.residual = Matrix(panel.groups.size(), panel.n_days);
  return panel;
}

void normalize_series(TimeSeriesPanel& panel) {
  panel.normalized = Matrix(panel.groups.size(), panel.n_days);
  for (std::size_t g = 0; g < panel.groups.size(); ++g) {
    const auto& row = panel.counts[g];
    const std::uint64_t total = std::accumulate(row.begin(), row.end(), std::uint64_t{0});
    if (total == 0) continue;
    for (std::size_t d = 0; d < panel.n_days; ++d)
      panel.normalized(g, d) = static_cast<double>(row[d]) / static_cast<double>(total);
  }
}

void remove_mean_trend(TimeSeriesPanel& panel, SeriesType type) {
  if (panel.residual.rows != panel.groups.size() || panel.residual.cols != panel.n_days)
    panel.residual = Matrix(panel.groups.size(), panel.n_days);
  std::vector<std::size_t> rows;
  for (std::size_t g = 0; g < panel.groups.size(); ++g)
    if (panel.groups[g].type == type) rows.push_back(g);
  if (rows.empty()) return;
  for (std::size_t d = 0; d < panel.n_days; ++d) {
    double sum = 0.0;
    for (auto g : rows) sum += panel.normalized(g, d);
    const double mean = sum / static_cast<double>(rows.size());
    for (auto g : rows) panel.residual(g, d) = panel.normalized(g, d) - mean;
  }
}

void remove_mean_trend(TimeSeriesPanel& panel) {
  for (auto t : {SeriesType::Original, SeriesType::Retweet, SeriesType::All})
    remove_mean_trend(panel, t);
}

Matrix smooth_rows(const Matrix& m, std::size_t window) {
  if (window <= 1) return m;
  Matrix out(m.rows, m.cols);
  const std::size_t half = window / 2;
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      const std::size_t lo = c >= half ? c - half : 0;
      const std::size_t hi = std::min(m.cols, c + (window - half));
      double sum = 0.0;
      for (std::size_t j = lo; j < hi; ++j) sum += m(r, j);
      out(r, c) = sum / static_cast<double>(hi - lo);
    }
  }
  return out;
}

// --- clustering ----------------------------------------------------------

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// 53 random bits; identical across standard libraries.
double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

Matrix plus_plus_init(const Matrix& x, std::size_t k, std::mt19937_64& gen) {
  const std::size_t n = x.rows;
  Matrix c(k, x.cols);
  std::vector<char> chosen(n, 0);
  std::size_t first = std::min(n - 1, static_cast<std::size_t>(uniform01(gen) * n));
  chosen[first] = 1;
  std::copy(x.row(first).begin(), x.row(first).end(), c.row(0).begin());
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(x.row(i), c.row(0));
  for (std::size_t j = 1; j < k; ++j) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    const double u = uniform01(gen);
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = u * total;
      double cum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        cum += d2[i];
        pick = i;
        if (cum > target) break;
      }
    } else {
      for (std::size_t i = 0; i < n && pick == n; ++i)
        if (!chosen[i]) pick = i;
    }
    if (pick == n) pick = 0;
    chosen[pick] = 1;
    std::copy(x.row(pick).begin(), x.row(pick).end(), c.row(j).begin());
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_dist(x.row(i), c.row(j)));
  }
  return c;
}

// Nearest centroid (ties to the lower index). Empty clusters are re-seeded
// with the point farthest from its centroid, taken from a cluster that has
// more than one member. Returns the inertia.
double assign(const Matrix& x, Matrix& c, std::vector<int>& labels) {
  const std::size_t n = x.rows, k = c.rows;
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const double d = sq_dist(x.row(i), c.row(j));
      if (d < best) {
        best = d;
        arg = static_cast<int>(j);
      }
    }
    labels[i] = arg;
    dist[i] = best;
  }
  std::vector<std::size_t> sizes(k, 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
  for (std::size_t j = 0; j < k; ++j) {
    if (sizes[j] != 0) continue;
    std::size_t far = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (sizes[static_cast<std::size_t>(labels[i])] < 2) continue;
      if (far == n || dist[i] > dist[far]) far = i;
    }
    if (far == n) break;  // fewer points than clusters cannot happen when k <= n
    --sizes[static_cast<std::size_t>(labels[far])];
    labels[far] = static_cast<int>(j);
    ++sizes[j];
    dist[far] = 0.0;
    std::copy(x.row(far).begin(), x.row(far).end(), c.row(j).begin());
  }
  return std::accumulate(dist.begin(), dist.end(), 0.0);
}

Matrix means(const Matrix& x, const std::vector<int>& labels, std::size_t k) {
  Matrix c(k, x.cols);
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const auto j = static_cast<std::size_t>(labels[i]);
    ++sizes[j];
    auto dst = c.row(j);
    auto src = x.row(i);
    for (std::size_t d = 0; d < x.cols; ++d) dst[d] += src[d];
  }
  for (std::size_t j = 0; j < k; ++j)
    if (sizes[j] > 0)
      for (double& v : c.row(j)) v /= static_cast<double>(sizes[j]);
  return c;
}

double cost(const Matrix& x, const Matrix& c, const std::vector<int>& labels) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i)
    s += sq_dist(x.row(i), c.row(static_cast<std::size_t>(labels[i])));
  return s;
}

struct Run {
  std::vector<int> labels;
  Matrix centroids;
  double inertia = 0.0;
  std::vector<double> trace;
};

Run lloyd(const Matrix& x, std::size_t k, std::mt19937_64& gen, const KMeansOptions& opt) {
  Run run;
  run.centroids = plus_plus_init(x, k, gen);
  run.labels.assign(x.rows, 0);
  run.inertia = assign(x, run.centroids, run.labels);
  run.trace.push_back(run.inertia);
  std::vector<int> next(x.rows);
  for (std::size_t it = 0; it < opt.max_iter; ++it) {
    run.centroids = means(x, run.labels, k);
    const double inertia = assign(x, run.centroids, next);
    run.trace.push_back(inertia);
    const bool changed = next != run.labels;
    const double previous = run.inertia;
    run.labels.swap(next);
    run.inertia = inertia;
    if (!changed || previous - inertia <= opt.tol * previous) break;
  }
  run.centroids = means(x, run.labels, k);
  run.inertia = cost(x, run.centroids, run.labels);
  run.trace.push_back(run.inertia);
  return run;
}

}  // namespace

std::map<std::string, int> ClusterResult::assignment() const {
  std::map<std::string, int> out;
  for (std::size_t i = 0; i < ids.size(); ++i) out[ids[i]] = labels[i];
  return out;
}

ClusterResult kmeans(const Matrix& series, std::span<const std::string> ids, std::size_t k,
                     std::uint64_t seed, const KMeansOptions& options) {
  const std::size_t n = series.rows;
  if (ids.size() != n) throw Error(ErrorCode::Config, "one id per series row is required");
  if (k < 1 || k > n)
    throw Error(ErrorCode::BadK, "k=" + std::to_string(k) + " with " + std::to_string(n) +
                                     " series");
  ClusterResult result;
  result.k = k;
  result.seed = seed;
  result.ids.assign(ids.begin(), ids.end());

  bool identical = k > 1;
  for (std::size_t i = 1; i < n && identical; ++i)
    identical = std::equal(series.row(i).begin(), series.row(i).end(), series.row(0).begin());
  if (identical)
    result.warnings.push_back("DegenerateData: all series identical, split is arbitrary");

  Run best;
  bool have = false;
  for (std::size_t r = 0; r < std::max<std::size_t>(1, options.restarts); ++r) {
    std::mt19937_64 gen(seed + r);
    Run run = lloyd(series, k, gen, options);
    if (!have || run.inertia < best.inertia) {
      best = std::move(run);
      result.best_restart = r;
      have = true;
    }
  }

  // Canonical labels in order of the sorted ids.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ids[a] < ids[b]; });
  std::vector<int> remap(k, -1);
  int next_label = 0;
  for (auto i : order) {
    auto& m = remap[static_cast<std::size_t>(best.labels[i])];
    if (m < 0) m = next_label++;
  }
  result.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    result.labels[i] = remap[static_cast<std::size_t>(best.labels[i])];
  result.centroids = Matrix(k, series.cols);
  for (std::size_t j = 0; j < k; ++j)
    if (remap[j] >= 0)
      std::copy(best.centroids.row(j).begin(), best.centroids.row(j).end(),
                result.centroids.row(static_cast<std::size_t>(remap[j])).begin());
  result.inertia = best.inertia;
  result.inertia_trace = std::move(best.trace);
  if (k >= 2) result.silhouette = silhouette_score(series, result.labels);
  return result;
}

double silhouette_score(const Matrix& series, std::span<const int> labels) {
  const std::size_t n = series.rows;
  if (labels.size() != n) throw Error(ErrorCode::BadAssignment, "one label per row is required");
  int max_label = -1;
  for (int l : labels) {
    if (l < 0) throw Error(ErrorCode::BadAssignment, "negative cluster label");
    max_label = std::max(max_label, l);
  }
  const auto k = static_cast<std::size_t>(max_label + 1);
  if (k < 2) throw Error(ErrorCode::BadAssignment, "silhouette needs at least two clusters");
  std::vector<std::size_t> sizes(k, 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
  for (std::size_t j = 0; j < k; ++j)
    if (sizes[j] == 0)
      throw Error(ErrorCode::BadAssignment, "cluster " + std::to_string(j) + " is empty");

  Matrix dist(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dist(i, j) = dist(j, i) = std::sqrt(sq_dist(series.row(i), series.row(j)));

  double total = 0.0;
  std::vector<double> sums(k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto own = static_cast<std::size_t>(labels[i]);
    if (sizes[own] == 1) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) sums[static_cast<std::size_t>(labels[j])] += dist(i, j);
    const double a = sums[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c)
      if (c != own) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

ClusterResult select_k(const Matrix& series, std::span<const std::string> ids, std::size_t k_min,
                       std::size_t k_max, std::uint64_t seed, const KMeansOptions& options) {
  if (k_min < 2 || k_min > k_max || k_max + 1 > series.rows)
    throw Error(ErrorCode::BadK, "k range [" + std::to_string(k_min) + ", " +
                                     std::to_string(k_max) + "] with " +
                                     std::to_string(series.rows) + " series");
  ClusterResult best;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    ClusterResult r = kmeans(series, ids, k, seed, options);
    if (k == k_min || r.silhouette > best.silhouette) best = std::move(r);
  }
  return best;
}

}  // namespace stcorpus
