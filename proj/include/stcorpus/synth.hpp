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

// Synthetic corpus with known ground truth, used by the end-to-end tests
// and the shipped fixture.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "stcorpus/ingest.hpp"

namespace stcorpus {

struct SynthOptions {
  std::size_t records = 100000;  // in-window Italian records
  std::uint64_t seed = 20200127;
  double unmapped_fraction = 0.05;
  double retweet_fraction = 0.3;
  /// Share of original tweets in a (period, spatial) cell that carry the
  /// cell's planted term.
  double plant_rate = 0.15;
  std::size_t shards = 4;
};

struct PlantedTerm {
  std::string term;
  std::string period;
  std::string spatial;  // "Epicentre" or "Periphery"
};

struct SynthCorpus {
  std::vector<TweetRecord> records;  // the analysed records, in time order
  /// Duplicates, out-of-window and non-Italian records that ingest must drop.
  std::vector<TweetRecord> noise;
  std::vector<PlantedTerm> planted;
  std::map<std::string, std::string> region_group;  // fine region -> spatial
  std::map<std::string, std::size_t> supra_counts;
  std::size_t unmapped = 0;
};

/// Supra shares among mapped records are North 36%, Italy 24%, Centre 24%,
/// South 10%, Islands 6% (exact when the mapped count is a multiple of 50).
SynthCorpus generate_corpus(const SynthOptions& options = {});

std::string default_regions_tsv();
std::string default_gazetteer_tsv();

/// Writes tweets/shard_*.jsonl, gazetteer.tsv, regions.tsv, codebook.tsv,
/// rules.json and config.json (output into `<dir>/out`).
void write_fixture(const SynthCorpus& corpus, const std::filesystem::path& dir,
                   std::uint64_t pipeline_seed = 42, std::size_t shards = 4);

}  // namespace stcorpus
