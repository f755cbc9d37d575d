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

#include "stcorpus/ingest.hpp"

#include <glob.h>

#include <algorithm>
#include <fstream>
#include <future>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "stcorpus/error.hpp"

namespace stcorpus {

using nlohmann::json;

std::string_view to_string(TweetType t) {
  return t == TweetType::Retweet ? "retweet" : "original";
}

namespace {

const json* lookup(const json& obj, std::string_view dotted) {
  const json* cur = &obj;
  while (true) {
    auto dot = dotted.find('.');
    auto key = dotted.substr(0, dot);
    if (!cur->is_object()) return nullptr;
    auto it = cur->find(key);
    if (it == cur->end() || it->is_null()) return nullptr;
    cur = &*it;
    if (dot == std::string_view::npos) return cur;
    dotted.remove_prefix(dot + 1);
  }
}

std::string scalar_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  return {};
}

}  // namespace

TweetRecord parse_record(std::string_view line, const FieldMap& schema,
                         std::size_t line_number) {
  json obj = json::parse(line.begin(), line.end(), nullptr, false);
  if (obj.is_discarded() || !obj.is_object())
    throw Error(ErrorCode::MalformedRecord, "not a JSON object", line_number);

  TweetRecord r;

  const json* id = lookup(obj, schema.id);
  if (id) r.id = scalar_string(*id);
  if (r.id.empty())
    throw Error(ErrorCode::MissingField, "no usable '" + schema.id + "'", line_number);

  const json* ts = lookup(obj, schema.created_at);
  if (!ts)
    throw Error(ErrorCode::MissingField, "no '" + schema.created_at + "'", line_number);
  std::optional<Instant> when;
  if (ts->is_string() || ts->is_number_integer()) when = parse_instant(scalar_string(*ts));
  if (!when)
    throw Error(ErrorCode::BadTimestamp, "cannot parse '" + ts->dump() + "'", line_number);
  r.created_at = *when;

  const json* text = lookup(obj, schema.text);
  if (!text || !text->is_string())
    throw Error(ErrorCode::MissingField, "no '" + schema.text + "'", line_number);
  r.text = text->get<std::string>();

  if (const json* loc = lookup(obj, schema.user_location); loc && loc->is_string())
    r.user_location = loc->get<std::string>();

  if (const json* lang = lookup(obj, schema.language); lang && lang->is_string())
    r.language = lang->get<std::string>();

  const json* rt = lookup(obj, schema.retweet);
  bool is_retweet;
  if (rt && rt->is_boolean())
    is_retweet = rt->get<bool>();
  else if (rt && rt->is_object())
    is_retweet = true;
  else
    is_retweet = r.text.rfind("RT @", 0) == 0;
  r.tweet_type = is_retweet ? TweetType::Retweet : TweetType::Original;
  return r;
}

std::string serialize_record(const TweetRecord& record) {
  nlohmann::ordered_json obj;
  obj["id"] = record.id;
  obj["created_at"] = format_instant(record.created_at);
  obj["text"] = record.text;
  obj["user_location"] = record.user_location;
  obj["is_retweet"] = record.tweet_type == TweetType::Retweet;
  if (!record.language.empty()) obj["lang"] = record.language;
  return obj.dump(-1, ' ', false, json::error_handler_t::replace);
}

DedupeResult dedupe(std::vector<TweetRecord> records) {
  DedupeResult out;
  std::unordered_set<std::string> seen;
  seen.reserve(records.size());
  out.records.reserve(records.size());
  for (auto& r : records) {
    if (seen.insert(r.id).second)
      out.records.push_back(std::move(r));
    else
      ++out.dropped;
  }
  return out;
}

FilterResult filter_window(std::vector<TweetRecord> records, const Window& window) {
  if (window.start >= window.end)
    throw Error(ErrorCode::BadWindow, "window start " + format_instant(window.start) +
                                          " is not before end " + format_instant(window.end));
  FilterResult out;
  for (auto& r : records) {
    if (r.created_at >= window.start && r.created_at < window.end)
      out.records.push_back(std::move(r));
    else
      ++out.excluded;
  }
  return out;
}

FilterResult filter_language(std::vector<TweetRecord> records,
                             const std::vector<std::string>& accepted) {
  if (accepted.empty()) return {std::move(records), 0};
  FilterResult out;
  for (auto& r : records) {
    if (std::find(accepted.begin(), accepted.end(), r.language) != accepted.end())
      out.records.push_back(std::move(r));
    else
      ++out.excluded;
  }
  return out;
}

std::vector<std::filesystem::path> expand_glob(const std::string& pattern) {
  glob_t g{};
  int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::filesystem::path> out;
  if (rc == 0)
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  ::globfree(&g);
  if (out.empty()) throw Error(ErrorCode::Io, "no input matches '" + pattern + "'");
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct Shard {
  std::vector<TweetRecord> records;
  std::size_t lines = 0;
};

Shard parse_shard(const std::filesystem::path& path, const FieldMap& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  Shard shard;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    ++shard.lines;
    try {
      shard.records.push_back(parse_record(line, schema, n));
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ": " + e.what(), e.line());
    }
  }
  return shard;
}

}  // namespace

std::vector<TweetRecord> load_records(const std::vector<std::filesystem::path>& shards,
                                      const FieldMap& schema, LoadStats* stats) {
  std::vector<Shard> parsed(shards.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(shards.size(),
                                                     std::thread::hardware_concurrency()));
  for (std::size_t base = 0; base < shards.size(); base += workers) {
    std::vector<std::future<Shard>> jobs;
    for (std::size_t i = base; i < std::min(shards.size(), base + workers); ++i)
      jobs.push_back(std::async(std::launch::async, parse_shard, std::cref(shards[i]),
                                std::cref(schema)));
    for (std::size_t i = 0; i < jobs.size(); ++i) parsed[base + i] = jobs[i].get();
  }

  std::vector<TweetRecord> all;
  std::size_t lines = 0;
  for (auto& s : parsed) {
    lines += s.lines;
    std::move(s.records.begin(), s.records.end(), std::back_inserter(all));
  }
  auto unique = dedupe(std::move(all));
  std::stable_sort(unique.records.begin(), unique.records.end(),
                   [](const TweetRecord& a, const TweetRecord& b) {
                     if (a.created_at != b.created_at) return a.created_at < b.created_at;
                     return a.id < b.id;
                   });
  if (stats) *stats = {shards.size(), lines, unique.dropped};
  return std::move(unique.records);
}

void write_records(const std::filesystem::path& path,
                   const std::vector<TweetRecord>& records,
                   std::string_view header_comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  for (const auto& r : records) out << serialize_record(r) << '\n';
}

}  // namespace stcorpus
