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

#include "stcorpus/coding.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "stcorpus/error.hpp"
#include "stcorpus/tsv.hpp"
#include "stcorpus/utf8.hpp"

namespace stcorpus {

std::string_view to_string(TermCategory c) {
  switch (c) {
    case TermCategory::Italy: return "Italy";
    case TermCategory::External: return "External";
    case TermCategory::Event: return "Event";
    case TermCategory::Solidarity: return "Solidarity";
    case TermCategory::Spread: return "Spread";
    case TermCategory::Policy: return "Policy";
    case TermCategory::Person: return "Person";
    case TermCategory::News: return "News";
    case TermCategory::Football: return "Football";
    case TermCategory::Uncoded: return "Uncoded";
  }
  return "Uncoded";
}

std::optional<TermCategory> parse_term_category(std::string_view name) {
  const auto lowered = utf8::to_lower(name);
  for (auto c : kTermCategories)
    if (utf8::to_lower(to_string(c)) == lowered) return c;
  if (lowered == "none") return TermCategory::Uncoded;
  return std::nullopt;
}

std::string Codebook::normalize_term(std::string_view term) {
  std::string out;
  bool gap = false;
  for (char c : utf8::to_lower(term)) {
    if (c == ' ' || c == '\t') {
      gap = !out.empty();
      continue;
    }
    if (gap) out.push_back('_');
    gap = false;
    out.push_back(c);
  }
  return out;
}

void Codebook::set(std::string_view term, TermCategory category) {
  entries_[normalize_term(term)] = category;
}

TermCategory Codebook::category_of(std::string_view term) const {
  auto it = entries_.find(term);
  if (it != entries_.end()) return it->second;
  it = entries_.find(normalize_term(term));
  return it == entries_.end() ? TermCategory::Uncoded : it->second;
}

Codebook Codebook::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open codebook " + path.string());
  Codebook book;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || is_comment_line(line)) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorCode::BadCodebook, path.string() + ": expected 'term<TAB>category'", n);
    auto category = parse_term_category(line.substr(tab + 1));
    if (!category)
      throw Error(ErrorCode::BadCodebook,
                  path.string() + ": unknown category '" + line.substr(tab + 1) + "'", n);
    book.set(line.substr(0, tab), *category);
  }
  return book;
}

std::vector<CodedTerm> apply_codebook(std::span<const std::string> terms, const Codebook& codebook) {
  std::vector<CodedTerm> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.emplace_back(t, codebook.category_of(t));
  return out;
}

std::string_view to_string(DenominatorConvention c) {
  return c == DenominatorConvention::IncludeUncoded ? "include_uncoded" : "exclude_uncoded";
}

DenominatorConvention parse_convention(std::string_view name) {
  if (name == "include_uncoded") return DenominatorConvention::IncludeUncoded;
  if (name == "exclude_uncoded") return DenominatorConvention::ExcludeUncoded;
  throw Error(ErrorCode::Config, "unknown denominator convention '" + std::string(name) + "'");
}

std::string round_half_up_2dp(std::size_t count, std::size_t denominator) {
  if (denominator == 0) return "0.00";
  const unsigned long long hundredths = (200ULL * count + denominator) / (2ULL * denominator);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%llu.%02llu", hundredths / 100, hundredths % 100);
  return buf;
}

std::string RatioEntry::display() const { return round_half_up_2dp(count, denominator); }

std::optional<RatioEntry> RatioTable::find(TermCategory c) const {
  for (const auto& e : entries)
    if (e.category == c) return e;
  return std::nullopt;
}

std::string RatioTable::display() const {
  std::string out;
  for (const auto& e : entries) {
    if (!out.empty()) out += ", ";
    out += std::string(to_string(e.category)) + ":" + e.display();
  }
  return out;
}

RatioTable category_ratios(std::span<const std::vector<CodedTerm>> lists,
                           DenominatorConvention convention, std::string scope) {
  std::array<std::size_t, kTermCategories.size()> counts{};
  std::size_t total = 0;
  for (const auto& list : lists)
    for (const auto& [term, category] : list) {
      ++counts[static_cast<std::size_t>(category)];
      ++total;
    }
  if (total == 0) throw Error(ErrorCode::EmptyInput, "no coded terms in scope '" + scope + "'");

  RatioTable table;
  table.scope = std::move(scope);
  table.convention = convention;
  table.total_terms = total;
  table.uncoded = counts[static_cast<std::size_t>(TermCategory::Uncoded)];
  const std::size_t denominator =
      convention == DenominatorConvention::IncludeUncoded ? total : total - table.uncoded;
  if (denominator == 0)
    throw Error(ErrorCode::EmptyInput, "every term in scope '" + table.scope + "' is uncoded");
  for (auto c : kTermCategories) {
    if (c == TermCategory::Uncoded) continue;
    const std::size_t n = counts[static_cast<std::size_t>(c)];
    if (n == 0) continue;
    table.entries.push_back(
        {c, n, denominator, static_cast<double>(n) / static_cast<double>(denominator)});
  }
  std::stable_sort(table.entries.begin(), table.entries.end(),
                   [](const RatioEntry& a, const RatioEntry& b) { return a.count > b.count; });
  return table;
}

}  // namespace stcorpus
