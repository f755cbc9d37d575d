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

#include "stcorpus/salience.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "stcorpus/error.hpp"

namespace stcorpus {

std::size_t TermCategoryCounts::category_index(const std::string& category) const {
  auto it = std::lower_bound(categories.begin(), categories.end(), category);
  if (it == categories.end() || *it != category)
    throw Error(ErrorCode::OutOfRange, "unknown category '" + category + "'");
  return static_cast<std::size_t>(it - categories.begin());
}

TermCategoryCounts build_counts(std::span<const TermDoc> docs, std::span<const std::string> labels,
                                const CountOptions& options) {
  if (labels.size() != docs.size())
    throw Error(ErrorCode::MissingLabel, "one label per document is required");
  std::set<std::string> cats;
  for (std::size_t i = 0; i < docs.size(); ++i)
    if (docs[i].tweet_type == TweetType::Original && !labels[i].empty()) cats.insert(labels[i]);
  if (cats.empty()) throw Error(ErrorCode::EmptyCorpus, "no labelled original documents");

  TermCategoryCounts out;
  out.categories.assign(cats.begin(), cats.end());
  const std::size_t nc = out.categories.size();

  std::unordered_map<std::string, std::vector<std::uint64_t>> table;
  std::vector<std::string> seen;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& doc = docs[i];
    if (doc.tweet_type != TweetType::Original || labels[i].empty()) continue;
    const std::size_t c = out.category_index(labels[i]);
    if (options.document_counts) {
      seen.assign(doc.terms.begin(), doc.terms.end());
      std::sort(seen.begin(), seen.end());
      seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
      for (const auto& t : seen) {
        auto& row = table[t];
        if (row.empty()) row.assign(nc, 0);
        ++row[c];
      }
    } else {
      for (const auto& t : doc.terms) {
        auto& row = table[t];
        if (row.empty()) row.assign(nc, 0);
        ++row[c];
      }
    }
  }

  std::vector<std::string> terms;
  terms.reserve(table.size());
  for (const auto& [t, row] : table)
    if (*std::max_element(row.begin(), row.end()) >= options.min_count) terms.push_back(t);
  std::sort(terms.begin(), terms.end());
  if (terms.empty())
    throw Error(ErrorCode::EmptyCorpus,
                "no term reaches min_count=" + std::to_string(options.min_count));

  out.category_totals.assign(nc, 0);
  out.counts.reserve(terms.size());
  for (const auto& t : terms) {
    auto& row = table.at(t);
    for (std::size_t c = 0; c < nc; ++c) out.category_totals[c] += row[c];
    out.counts.push_back(std::move(row));
  }
  out.vocabulary = std::move(terms);
  return out;
}

PrecisionRecall precision_recall(const TermCategoryCounts& counts, std::size_t focal) {
  if (focal >= counts.categories.size())
    throw Error(ErrorCode::OutOfRange, "focal category index out of range");
  PrecisionRecall pr;
  const std::size_t n = counts.vocabulary.size();
  pr.precision.resize(n, 0.0);
  pr.recall.resize(n, 0.0);
  const double focal_total = static_cast<double>(counts.category_totals[focal]);
  for (std::size_t t = 0; t < n; ++t) {
    const auto& row = counts.counts[t];
    const std::uint64_t in_focal = row[focal];
    if (in_focal == 0) continue;
    const std::uint64_t all = std::accumulate(row.begin(), row.end(), std::uint64_t{0});
    pr.precision[t] = static_cast<double>(in_focal) / static_cast<double>(all);
    pr.recall[t] = static_cast<double>(in_focal) / focal_total;
  }
  return pr;
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::vector<double> normal_cdf_transform(std::span<const double> scores) {
  const std::size_t n = scores.size();
  std::vector<double> out(n, 0.5);
  if (n < 2) return out;
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double s : scores) ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) return out;
  for (std::size_t i = 0; i < n; ++i) out[i] = standard_normal_cdf((scores[i] - mean) / sd);
  return out;
}

std::vector<SalienceEntry> scaled_f_score(const TermCategoryCounts& counts, std::size_t focal,
                                          double beta) {
  if (!(beta > 0.0)) throw Error(ErrorCode::Config, "beta must be positive");
  const auto pr = precision_recall(counts, focal);
  const auto p_cdf = normal_cdf_transform(pr.precision);
  const auto r_cdf = normal_cdf_transform(pr.recall);
  const double b2 = beta * beta;

  std::vector<SalienceEntry> out(counts.vocabulary.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    auto& e = out[t];
    e.term = counts.vocabulary[t];
    e.precision = pr.precision[t];
    e.recall = pr.recall[t];
    e.precision_cdf = p_cdf[t];
    e.recall_cdf = r_cdf[t];
    e.sfs = (1.0 + b2) * e.precision_cdf * e.recall_cdf / (b2 * e.precision_cdf + e.recall_cdf);
  }
  std::sort(out.begin(), out.end(), [](const SalienceEntry& a, const SalienceEntry& b) {
    if (a.sfs != b.sfs) return a.sfs > b.sfs;
    return a.term < b.term;
  });
  return out;
}

std::vector<std::string> top_terms(std::span<const SalienceEntry> entries, std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < entries.size() && i < k; ++i) out.push_back(entries[i].term);
  return out;
}

std::vector<std::pair<std::string, std::uint64_t>> most_frequent_terms(
    std::span<const TermDoc> docs, std::size_t k) {
  std::unordered_map<std::string, std::uint64_t> freq;
  for (const auto& d : docs)
    if (d.tweet_type == TweetType::Original)
      for (const auto& t : d.terms) ++freq[t];
  std::vector<std::pair<std::string, std::uint64_t>> all(freq.begin(), freq.end());
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

std::string cell_label(const std::string& period, const std::string& spatial) {
  return period + "|" + spatial;
}

std::vector<std::string> marginalize(std::span<const TermDoc> docs, MarginalAxis axis) {
  std::vector<std::string> labels;
  labels.reserve(docs.size());
  for (const auto& d : docs) {
    const bool need_period = axis != MarginalAxis::Temporal;
    const bool need_spatial = axis != MarginalAxis::Spatial;
    if ((need_period && d.period.empty()) || (need_spatial && d.spatial.empty()))
      throw Error(ErrorCode::MissingLabel, "document '" + d.record_id + "' lacks a " +
                                               (need_period && d.period.empty() ? "period"
                                                                                : "spatial") +
                                               " label");
    switch (axis) {
      case MarginalAxis::Spatial: labels.push_back(d.period); break;
      case MarginalAxis::Temporal: labels.push_back(d.spatial); break;
      case MarginalAxis::None: labels.push_back(cell_label(d.period, d.spatial)); break;
    }
  }
  return labels;
}

}  // namespace stcorpus
