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

// Scaled F-score keyness.
//
// One category is contrasted with the union of all others. For every term
// the precision P(category | term) and recall P(term | category) are each
// mapped through the normal CDF fitted to that metric over the vocabulary,
// and the two transformed scores are combined with a beta-weighted harmonic
// mean.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stcorpus/textproc.hpp"

namespace stcorpus {

struct TermCategoryCounts {
  std::vector<std::string> vocabulary;  // sorted
  std::vector<std::string> categories;  // sorted
  std::vector<std::vector<std::uint64_t>> counts;  // term x category
  std::vector<std::uint64_t> category_totals;

  std::size_t category_index(const std::string& category) const;  // OutOfRange
};

struct CountOptions {
  /// A term survives if some category has at least this many occurrences.
  std::uint64_t min_count = 5;
  /// Count tweets containing the term instead of token occurrences.
  bool document_counts = false;
};

/// `labels[i]` is the category of `docs[i]`; an empty label skips the doc.
/// Retweets never contribute.
TermCategoryCounts build_counts(std::span<const TermDoc> docs, std::span<const std::string> labels,
                                const CountOptions& options = {});

struct PrecisionRecall {
  std::vector<double> precision;  // parallel to vocabulary
  std::vector<double> recall;
};

PrecisionRecall precision_recall(const TermCategoryCounts& counts, std::size_t focal);

/// Phi((x - mean) / sd) with the n-1 standard deviation; 0.5 everywhere when
/// the deviation is zero or there is a single score.
std::vector<double> normal_cdf_transform(std::span<const double> scores);

double standard_normal_cdf(double z);

struct SalienceEntry {
  std::string term;
  double precision = 0.0;
  double recall = 0.0;
  double precision_cdf = 0.5;
  double recall_cdf = 0.5;
  double sfs = 0.5;
};

/// Ranked by sfs descending, ties in term order.
std::vector<SalienceEntry> scaled_f_score(const TermCategoryCounts& counts, std::size_t focal,
                                          double beta = 1.0);

std::vector<std::string> top_terms(std::span<const SalienceEntry> entries, std::size_t k = 10);

/// Raw frequency ranking over every original doc (ties in term order).
std::vector<std::pair<std::string, std::uint64_t>> most_frequent_terms(
    std::span<const TermDoc> docs, std::size_t k = 10);

enum class MarginalAxis { Spatial, Temporal, None };

/// Spatial: period labels only. Temporal: spatial labels only. None: the
/// cross product "period|spatial". MissingLabel if a required label is empty.
std::vector<std::string> marginalize(std::span<const TermDoc> docs, MarginalAxis axis);

std::string cell_label(const std::string& period, const std::string& spatial);

}  // namespace stcorpus
