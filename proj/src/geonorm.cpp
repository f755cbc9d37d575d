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

#include "stcorpus/geonorm.hpp"

#include <algorithm>
#include <fstream>

#include "stcorpus/error.hpp"
#include "stcorpus/tsv.hpp"
#include "stcorpus/utf8.hpp"

namespace stcorpus {

std::string canonical_supra(std::string_view name) {
  std::string key = utf8::fold(name);
  std::replace(key.begin(), key.end(), '-', ' ');
  std::replace(key.begin(), key.end(), '_', ' ');
  if (key == "north" || key == "north east" || key == "north west" || key == "nord" ||
      key == "nord est" || key == "nord ovest")
    return "North";
  if (key == "centre" || key == "center" || key == "centro") return "Centre";
  if (key == "south" || key == "sud") return "South";
  if (key == "islands" || key == "isole") return "Islands";
  if (key == "italy" || key == "italia") return "Italy";
  throw Error(ErrorCode::Config, "unknown supra-region '" + std::string(name) + "'");
}

namespace {

bool is_decoration(char32_t cp) {
  return (cp >= 0x1F000 && cp <= 0x1FAFF) || (cp >= 0x2600 && cp <= 0x27BF) ||
         (cp >= 0xFE00 && cp <= 0xFE0F) || cp == 0x200D || (cp >= 0xE0000 && cp <= 0xE007F);
}

bool is_edge(char c) {
  switch (c) {
    case '.': case ';': case ':': case '!': case '?': case '"': case '\'': case '(':
    case ')': case '[': case ']': case '-': case '|': case '*':
      return true;
    default:
      return false;
  }
}

template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || is_comment_line(line)) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorCode::Config, path.string() + ": expected two tab-separated columns", n);
    auto second = line.substr(tab + 1);
    if (auto tab2 = second.find('\t'); tab2 != std::string::npos) second.erase(tab2);
    fn(line.substr(0, tab), second, n);
  }
}

}  // namespace

std::string RegionHierarchy::fold_key(std::string_view raw) {
  std::string clean;
  clean.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size();) {
    std::size_t start = i;
    char32_t cp = utf8::next(raw, i);
    if (is_decoration(cp)) continue;
    if (utf8::is_space(cp)) {
      clean.push_back(' ');
      continue;
    }
    clean.append(raw.substr(start, i - start));
  }
  std::string folded = utf8::fold(clean);
  std::string out;
  bool pending_space = false;
  for (char c : folded) {
    if (c == ' ') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space && c != ',') out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  std::size_t b = 0, e = out.size();
  while (b < e && (is_edge(out[b]) || out[b] == ' ')) ++b;
  while (e > b && (is_edge(out[e - 1]) || out[e - 1] == ' ')) --e;
  return out.substr(b, e - b);
}

void RegionHierarchy::add_region(const std::string& fine, std::string_view supra) {
  if (fine.empty()) throw Error(ErrorCode::Config, "empty region id");
  auto canonical = canonical_supra(supra);
  auto [it, inserted] = fine_to_supra_.emplace(fine, canonical);
  if (!inserted && it->second != canonical)
    throw Error(ErrorCode::Config, "region '" + fine + "' assigned to both " + it->second +
                                       " and " + canonical);
  // Region names resolve to themselves unless the gazetteer says otherwise.
  gazetteer_.try_emplace(fold_key(fine), Match{fine, false});
}

void RegionHierarchy::add_alias(std::string_view raw, const std::string& fine) {
  if (!has_region(fine))
    throw Error(ErrorCode::UnknownRegion, "gazetteer maps '" + std::string(raw) +
                                              "' to unknown region '" + fine + "'");
  auto key = fold_key(raw);
  if (key.empty()) return;
  auto [it, inserted] = gazetteer_.emplace(key, Match{fine, false});
  if (inserted) return;
  if (it->second.fine != fine) {
    // A region's own name loses to an explicit entry; explicit entries that
    // disagree make the key ambiguous.
    if (fold_key(it->second.fine) == key && fold_key(fine) != key && !it->second.ambiguous)
      it->second = Match{fine, false};
    else
      it->second.ambiguous = true;
  }
}

RegionHierarchy RegionHierarchy::load(const std::filesystem::path& gazetteer,
                                      const std::filesystem::path& regions) {
  RegionHierarchy h;
  for_each_line(regions, [&](const std::string& fine, const std::string& supra, std::size_t n) {
    try {
      h.add_region(fine, supra);
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, regions.string() + ": " + e.what(), n);
    }
  });
  for_each_line(gazetteer, [&](const std::string& raw, const std::string& fine, std::size_t n) {
    try {
      h.add_alias(raw, fine);
    } catch (const Error& e) {
      throw Error(e.code(), gazetteer.string() + ": " + e.what(), n);
    }
  });
  return h;
}

const RegionHierarchy::Match* RegionHierarchy::find(const std::string& key) const {
  auto it = gazetteer_.find(key);
  return it == gazetteer_.end() ? nullptr : &it->second;
}

// 2: a real region, 1: a supra-level pseudo-region, 0: generic Italy.
int RegionHierarchy::specificity(const std::string& fine) const {
  const auto& supra = fine_to_supra_.at(fine);
  if (supra == "Italy") return 0;
  if (fine == supra) return 1;
  return 2;
}

NormalizedLocation RegionHierarchy::normalize(std::string_view raw) const {
  auto mapped = [&](const std::string& fine) {
    return NormalizedLocation{fine, fine_to_supra_.at(fine), false};
  };
  const auto key = fold_key(raw);
  if (key.empty()) return {};
  if (const Match* m = find(key)) {
    if (m->ambiguous) return {"", "", true};
    return mapped(m->fine);
  }
  if (key.find(',') == std::string::npos) return {};

  std::vector<std::string> hits;  // leftmost first
  std::size_t start = 0;
  while (start <= key.size()) {
    auto comma = key.find(',', start);
    auto part = fold_key(key.substr(start, comma == std::string::npos ? std::string::npos
                                                                       : comma - start));
    if (!part.empty()) {
      if (const Match* m = find(part)) {
        if (m->ambiguous) return {"", "", true};
        hits.push_back(m->fine);
      }
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (hits.empty()) return {};

  int best = -1;
  for (const auto& f : hits) best = std::max(best, specificity(f));
  std::string chosen;
  for (const auto& f : hits) {
    if (specificity(f) != best) continue;
    if (chosen.empty())
      chosen = f;
    else if (chosen != f)
      return {"", "", true};
  }
  // Less specific hits must not contradict the chosen supra-region.
  const auto& supra = fine_to_supra_.at(chosen);
  for (const auto& f : hits) {
    const auto& s = fine_to_supra_.at(f);
    if (s != "Italy" && s != supra) return {"", "", true};
  }
  return mapped(chosen);
}

const std::string& RegionHierarchy::aggregate(const std::string& fine) const {
  auto it = fine_to_supra_.find(fine);
  if (it == fine_to_supra_.end())
    throw Error(ErrorCode::UnknownRegion, "region '" + fine + "' is not in the hierarchy");
  return it->second;
}

NormalizedLocation normalize_location(std::string_view raw, const RegionHierarchy& h) {
  return h.normalize(raw);
}

std::string aggregate_region(const std::string& fine, const RegionHierarchy& h) {
  return h.aggregate(fine);
}

std::vector<std::pair<std::string, std::size_t>> top_unmapped(
    std::span<const std::string> raw_locations, const RegionHierarchy& h, std::size_t limit) {
  std::map<std::string, std::size_t> counts;
  for (const auto& raw : raw_locations)
    if (!raw.empty() && !h.normalize(raw).mapped()) ++counts[raw];
  std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (out.size() > limit) out.resize(limit);
  return out;
}

}  // namespace stcorpus
