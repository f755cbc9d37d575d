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

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace stcorpus {

/// Supra-region ids. NUTS "North-East" and "North-West" both become North;
/// Italy is the bucket for locations that are Italian but not regionalisable.
inline constexpr std::string_view kSupraRegions[] = {"North", "Centre", "South", "Islands",
                                                     "Italy"};

/// Maps a supra name (case-insensitive, NUTS spellings accepted) onto one of
/// kSupraRegions. Throws Config for anything else.
std::string canonical_supra(std::string_view name);

struct NormalizedLocation {
  std::string fine;   // empty = Unmapped
  std::string supra;  // empty iff fine is empty
  bool ambiguous = false;

  bool mapped() const { return !fine.empty(); }
  bool operator==(const NormalizedLocation&) const = default;
};

class RegionHierarchy {
 public:
  /// gazetteer: "raw<TAB>fine-region"; regions: "fine<TAB>supra" where the
  /// supra column may use NUTS names. Lines starting with '#' are comments.
  static RegionHierarchy load(const std::filesystem::path& gazetteer,
                              const std::filesystem::path& regions);

  void add_region(const std::string& fine, std::string_view supra);

  /// Conflicting entries for one folded key mark it ambiguous.
  void add_alias(std::string_view raw, const std::string& fine);

  NormalizedLocation normalize(std::string_view raw) const;
  const std::string& aggregate(const std::string& fine) const;

  bool has_region(const std::string& fine) const { return fine_to_supra_.count(fine) > 0; }
  const std::map<std::string, std::string>& fine_to_supra() const { return fine_to_supra_; }
  std::size_t gazetteer_size() const { return gazetteer_.size(); }

  /// Case and diacritic folding, emoji removal, whitespace collapse and
  /// edge-punctuation trim.
  static std::string fold_key(std::string_view raw);

 private:
  struct Match {
    std::string fine;
    bool ambiguous = false;
  };
  const Match* find(const std::string& key) const;
  int specificity(const std::string& fine) const;

  std::unordered_map<std::string, Match> gazetteer_;
  std::map<std::string, std::string> fine_to_supra_;
};

NormalizedLocation normalize_location(std::string_view raw, const RegionHierarchy& h);

/// Throws UnknownRegion for a fine id the hierarchy does not know.
std::string aggregate_region(const std::string& fine, const RegionHierarchy& h);

/// Most frequent raw strings that normalise to Unmapped, count descending.
std::vector<std::pair<std::string, std::size_t>> top_unmapped(
    std::span<const std::string> raw_locations, const RegionHierarchy& h, std::size_t limit);

}  // namespace stcorpus
