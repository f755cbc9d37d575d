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

// Pipeline orchestration and artifact writers.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "stcorpus/coding.hpp"
#include "stcorpus/ingest.hpp"
#include "stcorpus/salience.hpp"
#include "stcorpus/temporal.hpp"
#include "stcorpus/textproc.hpp"

namespace stcorpus {

enum class ClusterInput { Normalized, Residual };

struct PipelineConfig {
  // Relative paths in a config file resolve against the file's directory;
  // after loading every path is absolute.
  std::vector<std::string> inputs;  // globs
  FieldMap field_map;
  std::vector<std::string> languages;  // empty = keep all
  std::filesystem::path cleaning_rules;  // empty = built-in rules
  std::filesystem::path gazetteer;
  std::filesystem::path regions;
  std::filesystem::path codebook;
  PeriodConfig periods = PeriodConfig::defaults();
  VocabularyOptions vocabulary;
  CountOptions counts;
  double beta = 1.0;
  std::size_t top_k = 10;
  std::size_t k_min = 2;
  std::size_t k_max = 8;
  std::uint64_t seed = 0;
  KMeansOptions kmeans;
  ClusterInput cluster_input = ClusterInput::Normalized;
  std::size_t smoothing_window = 1;
  /// With k = 2 the cluster holding more normalised mass in this period is
  /// labelled Epicentre, the other Periphery.
  std::string epicentre_period = "Initial";
  DenominatorConvention row_convention = DenominatorConvention::IncludeUncoded;
  DenominatorConvention column_convention = DenominatorConvention::ExcludeUncoded;
  /// Ranked rows per category in salience.csv.
  std::size_t salience_depth = 100;
  bool plotdata = false;
  std::filesystem::path output_dir = "out";

  /// Missing keys take the defaults above. Throws Config on unknown keys or
  /// bad values and Io naming the path of any referenced file that is
  /// missing or fails to parse.
  static PipelineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static PipelineConfig load(const std::filesystem::path& path);

  /// Every field, defaults included.
  nlohmann::json to_json() const;

  /// SHA-256 of the resolved config without `output_dir`, so the same
  /// analysis written to two places hashes the same.
  std::string hash() const;
};

/// The "field_map" object of a config; absent keys keep the defaults.
FieldMap field_map_from_json(const nlohmann::json& j);

struct Artifact {
  std::string name;  // file name inside the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct Manifest {
  std::string config_sha256;
  std::uint64_t seed = 0;
  std::vector<Artifact> artifacts;  // sorted by name
  nlohmann::json stats;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

/// One salience list; `category` carries a scope prefix ("cell:", "period:"
/// or "cluster:").
using SalienceTables = std::map<std::string, std::vector<SalienceEntry>>;

struct Table1Input {
  std::vector<std::string> periods;  // row order
  std::vector<std::string> spatial;  // column order
  SalienceTables salience;
  std::vector<CodedTerm> most_frequent;
  std::map<std::string, RatioTable> row_ratios;     // by period
  std::map<std::string, RatioTable> column_ratios;  // by spatial label
  const Codebook* codebook = nullptr;
  std::size_t top_k = 10;
};

/// Markdown grid: one row per period, a "Clusters" row of spatial-only
/// cells and a "Ratios" row; columns are the spatial labels, "Marginal"
/// (period-only) and "Ratios". Empty cells render as U+2014 and add a
/// warning.
std::string emit_table1(const Table1Input& input, std::vector<std::string>* warnings = nullptr,
                        const std::string& header_comment = {});

/// Writes fig1a_normalized.csv (supra, all types), fig1b_residual.csv
/// (supra x tweet type) and fig1c_clusters.csv (fine regions with cluster
/// label). Returns the file names written.
std::vector<std::string> emit_series_plotdata(const TimeSeriesPanel& supra_all,
                                              const TimeSeriesPanel& supra_split,
                                              const TimeSeriesPanel& fine,
                                              const ClusterResult& clusters,
                                              const std::map<int, std::string>& cluster_names,
                                              const std::filesystem::path& dir,
                                              const std::string& header_comment);

struct PipelineResult {
  Manifest manifest;
  ClusterResult clusters;
  std::map<std::string, std::string> region_to_spatial;
  SalienceTables salience;
  std::map<std::string, RatioTable> row_ratios;
  std::map<std::string, RatioTable> column_ratios;
  std::map<std::string, std::size_t> supra_counts;  // mapped records only
  std::size_t records = 0;
  std::size_t unmapped = 0;
  std::size_t vocabulary_size = 0;
};

enum class PipelineScope {
  Full,
  /// ingest, geonorm and temporal only; writes series.csv and clusters.csv.
  Clustering,
};

/// ingest -> textproc -> geonorm -> temporal -> salience -> coding -> report.
/// The first module error is rethrown as StageError naming the stage.
PipelineResult run_pipeline(const PipelineConfig& config, PipelineScope scope = PipelineScope::Full);

/// Text of the comment line that opens every artifact ("# " is added by
/// the writers; table1.md wraps it in an HTML comment).
std::string header_line(const std::string& config_sha256, std::uint64_t seed);

}  // namespace stcorpus
