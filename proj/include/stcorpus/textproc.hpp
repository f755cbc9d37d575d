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

// Text cleaning, tokenisation and n-gram vocabulary selection.
//
// The n-gram vocabulary is chosen per calendar month with two ranked
// cumulative-mass cutoffs: one over PMI scores (shifted so the minimum is
// zero) and one over raw frequencies. An n-gram has to clear both in at
// least one month to become a term.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "stcorpus/ingest.hpp"

namespace stcorpus {

struct BoilerplatePattern {
  enum class Kind { Prefix, Substring, Regex };

  Kind kind = Kind::Substring;
  std::string pattern;
};

class CleaningRules {
 public:
  CleaningRules();

  static CleaningRules from_json(const nlohmann::json& j);
  static CleaningRules load(const std::filesystem::path& path);

  /// Surface forms are matched case-insensitively; keys may span several
  /// whitespace-separated words. Throws Config if a canonical form is also a
  /// key.
  void set_aliases(std::map<std::string, std::string> aliases);
  void add_boilerplate(BoilerplatePattern pattern);

  const std::vector<BoilerplatePattern>& boilerplate() const { return boilerplate_; }
  const std::map<std::string, std::string>& aliases() const { return aliases_; }

  bool strip_mentions = true;
  bool strip_urls = true;

 private:
  friend std::string clean_text(std::string_view, const CleaningRules&);

  std::vector<BoilerplatePattern> boilerplate_;
  std::vector<std::regex> compiled_;  // parallel to boilerplate_, regex kinds only
  std::map<std::string, std::string> aliases_;
  std::size_t longest_alias_ = 0;  // in words
};

/// Removes mentions (with a leading "RT" marker), URLs and boilerplate, then
/// maps aliases and collapses whitespace.
std::string clean_text(std::string_view text, const CleaningRules& rules);

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<std::string> tokenize(std::string_view text) const = 0;
};

/// Lowercasing, hashtag-preserving, apostrophe-aware splitter. No
/// lemmatisation or stemming.
class RuleTokenizer final : public Tokenizer {
 public:
  std::vector<std::string> tokenize(std::string_view text) const override;
};

std::vector<std::string> tokenize(std::string_view text);

using NGram = std::vector<std::string>;

/// Terms are rendered with '_' between the words of an n-gram; the
/// tokenizer never emits '_'.
std::string join_term(std::span<const std::string> tokens);

/// Unigram, bigram and trigram counts for one month of documents. N-grams
/// never cross document boundaries.
class MonthCounts {
 public:
  void add_document(std::span<const std::string> tokens);

  void add_unigram(const std::string& token, std::uint64_t count);
  void add_ngram(std::span<const std::string> tokens, std::uint64_t count);

  std::uint64_t unigram(const std::string& token) const;
  std::uint64_t unigram_total() const { return unigram_total_; }
  std::uint64_t ngram_total(std::size_t order) const;

  /// Sorted n-grams of the given order (2 or 3) with their counts.
  std::vector<std::pair<NGram, std::uint64_t>> ngrams(std::size_t order) const;

  /// Multiplies every count by `factor`.
  void scale(std::uint64_t factor);

 private:
  std::unordered_map<std::string, std::uint64_t> unigrams_;
  std::unordered_map<std::string, std::uint64_t> bigrams_;   // key: words joined by '\x1f'
  std::unordered_map<std::string, std::uint64_t> trigrams_;
  std::uint64_t unigram_total_ = 0;
  std::uint64_t bigram_total_ = 0;
  std::uint64_t trigram_total_ = 0;
};

struct NGramCandidate {
  NGram tokens;
  std::string month;
  std::uint64_t frequency = 0;
  double pmi = 0.0;  // natural log
};

/// pmi = ln(p(ngram) / prod p(word)); p(ngram) is relative to the n-gram
/// stream of the same order, p(word) to the unigram stream. Candidates are
/// bigrams then trigrams, each in lexical order.
std::vector<NGramCandidate> compute_pmi(const MonthCounts& counts, std::string_view month);

std::map<std::string, std::vector<NGramCandidate>> compute_pmi(
    const std::map<std::string, MonthCounts>& by_month);

/// Score of the first descending rank whose cumulative normalised mass
/// reaches `mass`, in original (unshifted) units. With `shift_to_zero` the
/// mass is computed on score - min(score).
double mass_threshold_cutoff(std::span<const double> scores, double mass, bool shift_to_zero);

class TermVocabulary {
 public:
  void admit(const NGram& ngram, const std::string& month);

  bool contains(std::span<const std::string> tokens) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// n-gram -> admitting months (sorted).
  const std::map<NGram, std::vector<std::string>>& entries() const { return entries_; }

  /// "w1 w2[ w3]<TAB>month,month" lines in n-gram order.
  void save(const std::filesystem::path& path, std::string_view header_comment = {}) const;
  static TermVocabulary load(const std::filesystem::path& path);

 private:
  std::map<NGram, std::vector<std::string>> entries_;
  std::unordered_set<std::string> keys_;
};

struct VocabularyOptions {
  double pmi_mass = 0.75;
  double freq_mass = 0.15;
  /// Cut bigrams and trigrams as one pool instead of per order.
  bool pool_orders = false;
};

TermVocabulary select_vocabulary(const std::map<std::string, std::vector<NGramCandidate>>& candidates,
                                 const VocabularyOptions& options = {});

/// Greedy left-to-right longest match (trigram, then bigram, else unigram).
std::vector<std::string> segment_terms(std::span<const std::string> tokens,
                                       const TermVocabulary& vocab);

struct TermDoc {
  std::string record_id;
  std::vector<std::string> terms;
  std::string region;   // fine region; empty when unmapped
  std::string supra;    // supra region; empty when unmapped
  std::string period;   // empty outside the configured periods
  std::string spatial;  // cluster-derived label, filled after clustering
  TweetType tweet_type = TweetType::Original;
};

}  // namespace stcorpus
