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
#include <string>
#include <string_view>
#include <vector>

#include "stcorpus/calendar.hpp"

namespace stcorpus {

enum class TweetType { Original, Retweet };

std::string_view to_string(TweetType t);

struct TweetRecord {
  std::string id;
  Instant created_at;
  std::string text;
  std::string user_location;
  TweetType tweet_type = TweetType::Original;
  // Empty when the source carries no language field.
  std::string language;

  bool operator==(const TweetRecord&) const = default;
};

/// Names of the source fields. Dotted names address nested objects
/// ("user.location"). The retweet field may hold a boolean or an object
/// (e.g. "retweeted_status"); a non-null object counts as set.
struct FieldMap {
  std::string id = "id";
  std::string created_at = "created_at";
  std::string text = "text";
  std::string user_location = "user_location";
  std::string retweet = "is_retweet";
  std::string language = "lang";
};

/// `line_number` is only used for error reporting.
TweetRecord parse_record(std::string_view line, const FieldMap& schema = {},
                         std::size_t line_number = 1);

/// One JSON object on one line, in the default FieldMap layout.
std::string serialize_record(const TweetRecord& record);

struct DedupeResult {
  std::vector<TweetRecord> records;
  std::size_t dropped = 0;
};

/// First occurrence per id wins; input order is preserved.
DedupeResult dedupe(std::vector<TweetRecord> records);

/// Half-open [start, end).
struct Window {
  Instant start;
  Instant end;
};

struct FilterResult {
  std::vector<TweetRecord> records;
  std::size_t excluded = 0;
};

FilterResult filter_window(std::vector<TweetRecord> records, const Window& window);

/// Keeps records whose language is in `accepted`. An empty list accepts all.
FilterResult filter_language(std::vector<TweetRecord> records,
                             const std::vector<std::string>& accepted);

/// Expands a shell glob; results sorted. No match is an Io error.
std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

struct LoadStats {
  std::size_t files = 0;
  std::size_t lines = 0;
  std::size_t duplicates = 0;
};

/// Reads every shard (blank lines and lines starting with '#' are skipped),
/// parses shards in parallel, concatenates them in path order, dedupes
/// first-wins and finally sorts stably by (created_at, id).
std::vector<TweetRecord> load_records(const std::vector<std::filesystem::path>& shards,
                                      const FieldMap& schema, LoadStats* stats = nullptr);

void write_records(const std::filesystem::path& path,
                   const std::vector<TweetRecord>& records,
                   std::string_view header_comment = {});

}  // namespace stcorpus
