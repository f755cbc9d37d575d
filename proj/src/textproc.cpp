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

#include "stcorpus/textproc.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stcorpus/error.hpp"
#include "stcorpus/tsv.hpp"
#include "stcorpus/utf8.hpp"

namespace stcorpus {

namespace {

constexpr char kKeySep = '\x1f';
constexpr int kMaxRewritePasses = 16;

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t start = i;
    char32_t cp = utf8::next(s, i);
    if (utf8::is_space(cp)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.append(s.substr(start, i - start));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string join(const std::vector<std::string>& words, char sep = ' ') {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(sep);
    out += w;
  }
  return out;
}

std::string collapse(std::string_view s) { return join(split_ws(s)); }

bool is_ascii_word(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_';
}

bool is_ascii_punct_only(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return u < 0x80 && std::ispunct(u);
  });
}

bool starts_with_icase(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[pos + i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    if (c != prefix[i]) return false;
  }
  return true;
}

std::string strip_mentions(std::string_view word) {
  std::string out;
  for (std::size_t i = 0; i < word.size();) {
    bool boundary = i == 0 || !is_ascii_word(word[i - 1]);
    if (word[i] == '@' && boundary && i + 1 < word.size() && is_ascii_word(word[i + 1])) {
      ++i;
      while (i < word.size() && is_ascii_word(word[i])) ++i;
      continue;
    }
    out.push_back(word[i++]);
  }
  return out;
}

constexpr std::string_view kSchemes[] = {"https://", "http://", "www."};
constexpr std::string_view kShorteners[] = {"t.co/", "bit.ly/", "goo.gl/", "ow.ly/",
                                            "tinyurl.com/", "buff.ly/", "dlvr.it/",
                                            "fb.me/", "youtu.be/", "amp.gs/"};

// Cuts the word at the first URL start. Shortener hosts only count at the
// start of the word or after punctuation, so hashtags are never eaten.
std::string strip_urls(std::string_view word) {
  for (std::size_t i = 0; i < word.size(); ++i) {
    bool boundary = i == 0 || !is_ascii_word(word[i - 1]);
    if (!boundary) continue;
    for (auto scheme : kSchemes)
      if (starts_with_icase(word, i, scheme)) return std::string(word.substr(0, i));
    if (word[i] == '#' || word[i] == '@') continue;
    for (auto host : kShorteners)
      if (starts_with_icase(word, i, host)) return std::string(word.substr(0, i));
  }
  return std::string(word);
}

bool is_edge_punct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?': case ')': case '(':
    case '"': case '\'': case '[': case ']':
      return true;
    default:
      return false;
  }
}

}  // namespace

CleaningRules::CleaningRules() {
  set_aliases({{"covid-19", "covid19"}, {"covid_19", "covid19"}});
}

void CleaningRules::set_aliases(std::map<std::string, std::string> aliases) {
  std::map<std::string, std::string> lowered;
  std::size_t longest = 0;
  for (auto& [k, v] : aliases) {
    auto key = collapse(utf8::to_lower(k));
    if (key.empty()) continue;
    lowered[key] = collapse(utf8::to_lower(v));
    longest = std::max(longest, split_ws(key).size());
  }
  for (const auto& [k, v] : lowered)
    if (lowered.count(v))
      throw Error(ErrorCode::Config, "alias target '" + v + "' (from '" + k +
                                         "') is itself an alias key");
  aliases_ = std::move(lowered);
  longest_alias_ = longest;
}

void CleaningRules::add_boilerplate(BoilerplatePattern pattern) {
  if (pattern.pattern.empty()) throw Error(ErrorCode::Config, "empty boilerplate pattern");
  if (pattern.kind == BoilerplatePattern::Kind::Regex) {
    try {
      compiled_.emplace_back(pattern.pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::Config, "bad boilerplate regex '" + pattern.pattern + "': " + e.what());
    }
  }
  boilerplate_.push_back(std::move(pattern));
}

CleaningRules CleaningRules::from_json(const nlohmann::json& j) {
  CleaningRules rules;
  if (!j.is_object()) throw Error(ErrorCode::Config, "cleaning rules must be a JSON object");
  rules.strip_mentions = j.value("strip_mentions", true);
  rules.strip_urls = j.value("strip_urls", true);
  if (j.contains("aliases")) {
    std::map<std::string, std::string> aliases;
    for (const auto& [k, v] : j.at("aliases").items()) aliases[k] = v.get<std::string>();
    rules.set_aliases(std::move(aliases));
  }
  for (const auto& item : j.value("boilerplate", nlohmann::json::array())) {
    BoilerplatePattern p;
    if (item.contains("prefix")) {
      p.kind = BoilerplatePattern::Kind::Prefix;
      p.pattern = item.at("prefix").get<std::string>();
    } else if (item.contains("substring")) {
      p.kind = BoilerplatePattern::Kind::Substring;
      p.pattern = item.at("substring").get<std::string>();
    } else if (item.contains("regex")) {
      p.kind = BoilerplatePattern::Kind::Regex;
      p.pattern = item.at("regex").get<std::string>();
    } else {
      throw Error(ErrorCode::Config, "boilerplate entry needs prefix, substring or regex: " +
                                         item.dump());
    }
    rules.add_boilerplate(std::move(p));
  }
  return rules;
}

CleaningRules CleaningRules::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open cleaning rules " + path.string());
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::Config, "cleaning rules are not JSON: " + path.string());
  return from_json(j);
}

std::string clean_text(std::string_view text, const CleaningRules& rules) {
  std::vector<std::string> words = split_ws(text);

  if (rules.strip_mentions || rules.strip_urls) {
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < words.size(); ++i) {
      const std::string& w = words[i];
      if (rules.strip_mentions && w == "RT" && i + 1 < words.size() &&
          words[i + 1].size() > 1 && words[i + 1][0] == '@')
        continue;
      std::string out = w;
      if (rules.strip_mentions) out = strip_mentions(out);
      if (rules.strip_urls) out = strip_urls(out);
      if (out.empty() || (out != w && is_ascii_punct_only(out))) continue;
      kept.push_back(std::move(out));
    }
    words = std::move(kept);
  }
  std::string s = join(words);

  std::size_t regex_index = 0;
  for (const auto& p : rules.boilerplate_) {
    switch (p.kind) {
      case BoilerplatePattern::Kind::Prefix:
        for (int pass = 0; pass < kMaxRewritePasses && s.rfind(p.pattern, 0) == 0; ++pass)
          s = collapse(std::string_view(s).substr(p.pattern.size()));
        break;
      case BoilerplatePattern::Kind::Substring:
        for (int pass = 0; pass < kMaxRewritePasses; ++pass) {
          auto at = s.find(p.pattern);
          if (at == std::string::npos) break;
          s.replace(at, p.pattern.size(), " ");
        }
        break;
      case BoilerplatePattern::Kind::Regex: {
        const auto& re = rules.compiled_[regex_index++];
        for (int pass = 0; pass < kMaxRewritePasses; ++pass) {
          auto next = std::regex_replace(s, re, " ");
          if (next == s) break;
          s = std::move(next);
        }
        break;
      }
    }
    s = collapse(s);
  }

  if (rules.aliases_.empty()) return s;

  words = split_ws(s);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < words.size();) {
    bool replaced = false;
    for (std::size_t len = std::min(rules.longest_alias_, words.size() - i); len >= 1; --len) {
      std::string lead, hash, trail;
      std::vector<std::string> parts(words.begin() + i, words.begin() + i + len);
      std::string& first = parts.front();
      std::size_t b = 0;
      while (b < first.size() && is_edge_punct(first[b])) ++b;
      lead = first.substr(0, b);
      first.erase(0, b);
      if (!first.empty() && first[0] == '#') {
        hash = "#";
        first.erase(0, 1);
      }
      std::string& last = parts.back();
      std::size_t e = last.size();
      while (e > 0 && is_edge_punct(last[e - 1])) --e;
      trail = last.substr(e);
      last.erase(e);
      auto it = rules.aliases_.find(utf8::to_lower(join(parts)));
      if (it == rules.aliases_.end()) continue;
      std::string canonical = it->second;
      if (!hash.empty()) canonical.erase(std::remove(canonical.begin(), canonical.end(), ' '),
                                         canonical.end());
      out.push_back(lead + hash + canonical + trail);
      i += len;
      replaced = true;
      break;
    }
    if (!replaced) out.push_back(words[i++]);
  }
  return collapse(join(out));
}

// --- tokenizer -----------------------------------------------------------

namespace {

bool is_apostrophe(char32_t cp) { return cp == '\'' || cp == 0x2019 || cp == 0x2018 || cp == 0x02BC; }

bool is_word_cp(char32_t cp) {
  if (cp < 0x80) return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
  if (cp < 0xC0) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation, arrows, symbols
  if (cp >= 0x2E00 && cp <= 0x2E7F) return false;
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  if (cp >= 0xFE00 && cp <= 0xFE0F) return false;  // variation selectors
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  if (cp == 0xFEFF || cp == 0xFFFD) return false;
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;  // emoji and pictographs
  if (cp >= 0xE0000) return false;
  return true;
}

}  // namespace

std::vector<std::string> RuleTokenizer::tokenize(std::string_view text) const {
  std::vector<char32_t> cps;
  cps.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) cps.push_back(utf8::next(text, i));

  std::vector<std::string> tokens;
  std::string cur;
  bool hashtag = false;
  auto flush = [&] {
    if (!cur.empty() && cur != "#") tokens.push_back(std::move(cur));
    cur.clear();
    hashtag = false;
  };
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i];
    const bool next_is_word = i + 1 < cps.size() && is_word_cp(cps[i + 1]);
    if (is_word_cp(cp)) {
      utf8::append(cur, utf8::to_lower(cp));
    } else if (cp == '#' && cur.empty() && next_is_word) {
      cur = "#";
      hashtag = true;
    } else if (is_apostrophe(cp) && !cur.empty() && !hashtag && next_is_word &&
               i > 0 && is_word_cp(cps[i - 1])) {
      cur.push_back('\'');
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> tokenize(std::string_view text) { return RuleTokenizer{}.tokenize(text); }

std::string join_term(std::span<const std::string> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back('_');
    out += t;
  }
  return out;
}

// --- n-gram statistics ---------------------------------------------------

namespace {

std::string key_of(std::span<const std::string> tokens) {
  std::string key;
  for (const auto& t : tokens) {
    if (!key.empty()) key.push_back(kKeySep);
    key += t;
  }
  return key;
}

NGram split_key(const std::string& key) {
  NGram out;
  std::size_t start = 0;
  while (true) {
    auto at = key.find(kKeySep, start);
    out.push_back(key.substr(start, at - start));
    if (at == std::string::npos) break;
    start = at + 1;
  }
  return out;
}

}  // namespace

void MonthCounts::add_document(std::span<const std::string> tokens) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    ++unigrams_[tokens[i]];
    ++unigram_total_;
    if (i + 2 <= tokens.size()) {
      ++bigrams_[key_of(tokens.subspan(i, 2))];
      ++bigram_total_;
    }
    if (i + 3 <= tokens.size()) {
      ++trigrams_[key_of(tokens.subspan(i, 3))];
      ++trigram_total_;
    }
  }
}

void MonthCounts::add_unigram(const std::string& token, std::uint64_t count) {
  unigrams_[token] += count;
  unigram_total_ += count;
}

void MonthCounts::add_ngram(std::span<const std::string> tokens, std::uint64_t count) {
  if (tokens.size() == 2) {
    bigrams_[key_of(tokens)] += count;
    bigram_total_ += count;
  } else if (tokens.size() == 3) {
    trigrams_[key_of(tokens)] += count;
    trigram_total_ += count;
  } else {
    throw Error(ErrorCode::Config, "only bigrams and trigrams are counted");
  }
}

std::uint64_t MonthCounts::unigram(const std::string& token) const {
  auto it = unigrams_.find(token);
  return it == unigrams_.end() ? 0 : it->second;
}

std::uint64_t MonthCounts::ngram_total(std::size_t order) const {
  return order == 2 ? bigram_total_ : (order == 3 ? trigram_total_ : unigram_total_);
}

std::vector<std::pair<NGram, std::uint64_t>> MonthCounts::ngrams(std::size_t order) const {
  const auto& src = order == 2 ? bigrams_ : trigrams_;
  std::vector<std::pair<NGram, std::uint64_t>> out;
  out.reserve(src.size());
  for (const auto& [k, v] : src) out.emplace_back(split_key(k), v);
  std::sort(out.begin(), out.end());
  return out;
}

void MonthCounts::scale(std::uint64_t factor) {
  for (auto* m : {&unigrams_, &bigrams_, &trigrams_})
    for (auto& [k, v] : *m) v *= factor;
  unigram_total_ *= factor;
  bigram_total_ *= factor;
  trigram_total_ *= factor;
}

std::vector<NGramCandidate> compute_pmi(const MonthCounts& counts, std::string_view month) {
  std::vector<NGramCandidate> out;
  const double total = static_cast<double>(counts.unigram_total());
  for (std::size_t order : {2u, 3u}) {
    const double ngram_total = static_cast<double>(counts.ngram_total(order));
    for (auto& [tokens, freq] : counts.ngrams(order)) {
      double independent = 1.0;
      for (const auto& w : tokens) {
        const std::uint64_t c = counts.unigram(w);
        if (c == 0)
          throw Error(ErrorCode::ZeroCount, "n-gram '" + join_term(tokens) +
                                                "' uses unseen unigram '" + w + "' in " +
                                                std::string(month));
        independent *= static_cast<double>(c) / total;
      }
      const double joint = static_cast<double>(freq) / ngram_total;
      out.push_back({tokens, std::string(month), freq, std::log(joint / independent)});
    }
  }
  return out;
}

std::map<std::string, std::vector<NGramCandidate>> compute_pmi(
    const std::map<std::string, MonthCounts>& by_month) {
  std::map<std::string, std::vector<NGramCandidate>> out;
  for (const auto& [month, counts] : by_month) out[month] = compute_pmi(counts, month);
  return out;
}

double mass_threshold_cutoff(std::span<const double> scores, double mass, bool shift_to_zero) {
  if (scores.empty()) throw Error(ErrorCode::EmptyScores, "no scores to threshold");
  if (!(mass > 0.0 && mass <= 1.0))
    throw Error(ErrorCode::Config, "mass must lie in (0, 1], got " + std::to_string(mass));
  std::vector<double> desc(scores.begin(), scores.end());
  std::sort(desc.begin(), desc.end(), std::greater<>());
  const double floor = desc.back();
  const double offset = shift_to_zero ? floor : 0.0;
  double total = 0.0;
  for (double v : desc) total += v - offset;
  if (!(total > 0.0)) return floor;
  double cumulative = 0.0;
  for (double v : desc) {
    cumulative += v - offset;
    if (cumulative / total >= mass) return v;
  }
  return floor;
}

// --- vocabulary ----------------------------------------------------------

void TermVocabulary::admit(const NGram& ngram, const std::string& month) {
  auto& months = entries_[ngram];
  if (std::find(months.begin(), months.end(), month) == months.end()) {
    months.push_back(month);
    std::sort(months.begin(), months.end());
  }
  keys_.insert(key_of(ngram));
}

bool TermVocabulary::contains(std::span<const std::string> tokens) const {
  return keys_.count(key_of(tokens)) > 0;
}

void TermVocabulary::save(const std::filesystem::path& path, std::string_view header_comment) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  for (const auto& [ngram, months] : entries_)
    out << join(ngram) << '\t' << join(months, ',') << '\n';
}

TermVocabulary TermVocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  TermVocabulary vocab;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || is_comment_line(line)) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorCode::MalformedRecord, "expected 'ngram<TAB>months'", n);
    NGram ngram = split_ws(line.substr(0, tab));
    if (ngram.size() < 2 || ngram.size() > 3)
      throw Error(ErrorCode::MalformedRecord, "vocabulary entries are bigrams or trigrams", n);
    std::stringstream months(line.substr(tab + 1));
    std::string m;
    while (std::getline(months, m, ',')) vocab.admit(ngram, m);
  }
  return vocab;
}

TermVocabulary select_vocabulary(const std::map<std::string, std::vector<NGramCandidate>>& candidates,
                                 const VocabularyOptions& options) {
  TermVocabulary vocab;
  for (const auto& [month, cands] : candidates) {
    std::vector<std::vector<const NGramCandidate*>> pools;
    if (options.pool_orders) {
      pools.emplace_back();
      for (const auto& c : cands) pools.back().push_back(&c);
    } else {
      pools.resize(2);
      for (const auto& c : cands) pools[c.tokens.size() == 3 ? 1 : 0].push_back(&c);
    }
    for (const auto& pool : pools) {
      if (pool.empty()) continue;
      std::vector<double> pmi, freq;
      pmi.reserve(pool.size());
      freq.reserve(pool.size());
      for (const auto* c : pool) {
        pmi.push_back(c->pmi);
        freq.push_back(static_cast<double>(c->frequency));
      }
      const double pmi_cut = mass_threshold_cutoff(pmi, options.pmi_mass, true);
      const double freq_cut = mass_threshold_cutoff(freq, options.freq_mass, false);
      for (const auto* c : pool)
        if (c->pmi >= pmi_cut && static_cast<double>(c->frequency) >= freq_cut)
          vocab.admit(c->tokens, month);
    }
  }
  return vocab;
}

std::vector<std::string> segment_terms(std::span<const std::string> tokens,
                                       const TermVocabulary& vocab) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size();) {
    if (!vocab.empty()) {
      if (i + 3 <= tokens.size() && vocab.contains(tokens.subspan(i, 3))) {
        out.push_back(join_term(tokens.subspan(i, 3)));
        i += 3;
        continue;
      }
      if (i + 2 <= tokens.size() && vocab.contains(tokens.subspan(i, 2))) {
        out.push_back(join_term(tokens.subspan(i, 2)));
        i += 2;
        continue;
      }
    }
    out.push_back(tokens[i++]);
  }
  return out;
}

}  // namespace stcorpus
