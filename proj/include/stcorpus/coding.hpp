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

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stcorpus {

enum class TermCategory {
  Italy,
  External,
  Event,
  Solidarity,
  Spread,
  Policy,
  Person,
  News,
  Football,
  Uncoded,
};

inline constexpr std::array<TermCategory, 10> kTermCategories = {
    TermCategory::Italy,  TermCategory::External, TermCategory::Event,
    TermCategory::Solidarity, TermCategory::Spread, TermCategory::Policy,
    TermCategory::Person, TermCategory::News,     TermCategory::Football,
    TermCategory::Uncoded};

std::string_view to_string(TermCategory c);
std::optional<TermCategory> parse_term_category(std::string_view name);

class Codebook {
 public:
  /// "term<TAB>category". Spaces inside a term are read as n-gram joins, so
  /// "scuole chiuse" and "scuole_chiuse" are the same entry.
  static Codebook load(const std::filesystem::path& path);

  void set(std::string_view term, TermCategory category);
  TermCategory category_of(std::string_view term) const;
  std::size_t size() const { return entries_.size(); }

  static std::string normalize_term(std::string_view term);

 private:
  std::map<std::string, TermCategory, std::less<>> entries_;
};

using CodedTerm = std::pair<std::string, TermCategory>;

std::vector<CodedTerm> apply_codebook(std::span<const std::string> terms, const Codebook& codebook);

enum class DenominatorConvention { IncludeUncoded, ExcludeUncoded };

std::string_view to_string(DenominatorConvention c);
DenominatorConvention parse_convention(std::string_view name);

struct RatioEntry {
  TermCategory category;
  std::size_t count = 0;
  std::size_t denominator = 0;
  double ratio = 0.0;

  /// Half-up to two decimals on the exact fraction, e.g. "0.25".
  std::string display() const;
};

struct RatioTable {
  std::string scope;
  DenominatorConvention convention = DenominatorConvention::IncludeUncoded;
  std::size_t total_terms = 0;
  std::size_t uncoded = 0;
  /// Coded categories only, count descending then category order.
  std::vector<RatioEntry> entries;

  std::optional<RatioEntry> find(TermCategory c) const;
  /// "External:0.25, Spread:0.20, ..."
  std::string display() const;
};

/// Pools every list, counts categories and divides by the total (Include)
/// or by the number of coded terms (Exclude).
RatioTable category_ratios(std::span<const std::vector<CodedTerm>> lists,
                           DenominatorConvention convention, std::string scope = {});

/// floor(100 * count / denominator + 1/2) / 100 in exact integer arithmetic.
std::string round_half_up_2dp(std::size_t count, std::size_t denominator);

}  // namespace stcorpus
