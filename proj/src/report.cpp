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

#include "stcorpus/report.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "stcorpus/error.hpp"
#include "stcorpus/geonorm.hpp"
#include "stcorpus/hash.hpp"

namespace stcorpus {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kEmptyCell = "\xE2\x80\x94";  // U+2014

// ---------------------------------------------------------------- config

void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw Error(ErrorCode::Config, std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw Error(ErrorCode::Config, "unknown key '" + key + "' in " + std::string(where));
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::Config, std::string("bad value for '") + key + "'");
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal();
}

void require_file(const fs::path& p, std::string_view what) {
  if (p.empty()) throw Error(ErrorCode::Config, std::string(what) + " path is required");
  if (!fs::is_regular_file(p))
    throw Error(ErrorCode::Io, std::string(what) + " not found: " + p.string());
}

Day read_day(const json& j, const char* what) {
  if (!j.is_string()) throw Error(ErrorCode::Config, std::string(what) + " must be a date string");
  auto d = parse_date(j.get<std::string>());
  if (!d) throw Error(ErrorCode::Config, std::string("bad date for ") + what + ": " + j.get<std::string>());
  return *d;
}

std::string_view to_string(ClusterInput c) {
  return c == ClusterInput::Residual ? "residual" : "normalized";
}

// Wraps load-time parse failures so the message always names the file.
template <typename F>
void parse_check(const fs::path& p, F&& parse) {
  try {
    parse();
  } catch (const Error& e) {
    throw Error(ErrorCode::Io, "cannot parse " + p.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------- output helpers

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::string& header_comment,
            std::initializer_list<std::string_view> columns)
      : out_(path, std::ios::binary) {
    if (!out_) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out_ << "# " << header_comment << '\n';
    bool first = true;
    for (auto c : columns) {
      out_ << (first ? "" : ",") << c;
      first = false;
    }
    out_ << '\n';
  }

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << csv_field(fields), first = false), ...);
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::string num(std::size_t v) { return std::to_string(v); }

template <typename Fn>
auto run_stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  } catch (const std::exception& e) {
    throw StageError(name, Error(ErrorCode::Io, e.what()));
  }
}

std::string annotate(const std::string& term, const Codebook* codebook) {
  if (!codebook) return term;
  return term + " (" + std::string(to_string(codebook->category_of(term))) + ")";
}

std::string render_terms(const std::vector<std::string>& terms, const Codebook* codebook) {
  std::string out;
  for (const auto& t : terms) {
    if (!out.empty()) out += ", ";
    out += annotate(t, codebook);
  }
  return out;
}

std::string md_escape(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- PipelineConfig

FieldMap field_map_from_json(const json& f) {
  check_keys(f, "field_map", {"id", "created_at", "text", "user_location", "retweet", "language"});
  FieldMap m;
  read(f, "id", m.id);
  read(f, "created_at", m.created_at);
  read(f, "text", m.text);
  read(f, "user_location", m.user_location);
  read(f, "retweet", m.retweet);
  read(f, "language", m.language);
  return m;
}

PipelineConfig PipelineConfig::from_json(const json& j, const fs::path& base_dir) {
  check_keys(j, "config",
             {"inputs", "field_map", "languages", "cleaning_rules", "gazetteer", "regions",
              "codebook", "periods", "ngrams", "salience", "clustering", "coding", "seed",
              "output"});
  PipelineConfig c;
  const fs::path base = fs::absolute(base_dir);

  std::vector<std::string> inputs;
  if (j.contains("inputs") && j.at("inputs").is_string())
    inputs.push_back(j.at("inputs").get<std::string>());
  else
    read(j, "inputs", inputs);
  if (inputs.empty()) throw Error(ErrorCode::Config, "'inputs' must list at least one path or glob");
  for (const auto& g : inputs) {
    auto abs = resolve(base, g).string();
    try {
      expand_glob(abs);
    } catch (const Error&) {
      throw Error(ErrorCode::Io, "input not found: " + abs);
    }
    c.inputs.push_back(std::move(abs));
  }

  if (j.contains("field_map")) c.field_map = field_map_from_json(j.at("field_map"));
  read(j, "languages", c.languages);

  std::string path;
  if (j.contains("cleaning_rules")) {
    read(j, "cleaning_rules", path);
    c.cleaning_rules = resolve(base, path);
    require_file(c.cleaning_rules, "cleaning rules");
    parse_check(c.cleaning_rules, [&] { CleaningRules::load(c.cleaning_rules); });
  }
  path.clear();
  read(j, "gazetteer", path);
  c.gazetteer = resolve(base, path);
  require_file(c.gazetteer, "gazetteer");
  path.clear();
  read(j, "regions", path);
  c.regions = resolve(base, path);
  require_file(c.regions, "regions table");
  parse_check(c.gazetteer, [&] { RegionHierarchy::load(c.gazetteer, c.regions); });
  path.clear();
  read(j, "codebook", path);
  c.codebook = resolve(base, path);
  require_file(c.codebook, "codebook");
  parse_check(c.codebook, [&] { Codebook::load(c.codebook); });

  if (j.contains("periods")) {
    const auto& p = j.at("periods");
    check_keys(p, "periods", {"list", "end"});
    if (!p.contains("list") || !p.contains("end"))
      throw Error(ErrorCode::Config, "periods needs 'list' and 'end'");
    std::vector<Period> list;
    for (const auto& item : p.at("list")) {
      check_keys(item, "periods.list entry", {"name", "start"});
      if (!item.contains("name") || !item.at("name").is_string() || !item.contains("start"))
        throw Error(ErrorCode::Config, "period entries need 'name' and 'start'");
      list.push_back({item.at("name").get<std::string>(), read_day(item.at("start"), "period start")});
    }
    c.periods = PeriodConfig(std::move(list), read_day(p.at("end"), "periods.end"));
  }

  if (j.contains("ngrams")) {
    const auto& n = j.at("ngrams");
    check_keys(n, "ngrams", {"pmi_mass", "freq_mass", "pool_orders"});
    read(n, "pmi_mass", c.vocabulary.pmi_mass);
    read(n, "freq_mass", c.vocabulary.freq_mass);
    read(n, "pool_orders", c.vocabulary.pool_orders);
  }
  for (double m : {c.vocabulary.pmi_mass, c.vocabulary.freq_mass})
    if (!(m > 0.0 && m <= 1.0)) throw Error(ErrorCode::Config, "n-gram masses must lie in (0, 1]");

  if (j.contains("salience")) {
    const auto& s = j.at("salience");
    check_keys(s, "salience", {"min_count", "document_counts", "beta", "top_k", "depth"});
    read(s, "min_count", c.counts.min_count);
    read(s, "document_counts", c.counts.document_counts);
    read(s, "beta", c.beta);
    read(s, "top_k", c.top_k);
    read(s, "depth", c.salience_depth);
  }
  if (!(c.beta > 0.0)) throw Error(ErrorCode::Config, "beta must be positive");
  if (c.top_k == 0) throw Error(ErrorCode::Config, "top_k must be positive");

  if (j.contains("clustering")) {
    const auto& k = j.at("clustering");
    check_keys(k, "clustering",
               {"k_min", "k_max", "restarts", "max_iter", "tol", "input", "smoothing_window",
                "epicentre_period"});
    read(k, "k_min", c.k_min);
    read(k, "k_max", c.k_max);
    read(k, "restarts", c.kmeans.restarts);
    read(k, "max_iter", c.kmeans.max_iter);
    read(k, "tol", c.kmeans.tol);
    read(k, "smoothing_window", c.smoothing_window);
    read(k, "epicentre_period", c.epicentre_period);
    std::string input = "normalized";
    read(k, "input", input);
    if (input == "normalized")
      c.cluster_input = ClusterInput::Normalized;
    else if (input == "residual")
      c.cluster_input = ClusterInput::Residual;
    else
      throw Error(ErrorCode::Config, "clustering.input must be 'normalized' or 'residual'");
  }
  if (c.k_min < 2 || c.k_max < c.k_min) throw Error(ErrorCode::Config, "need 2 <= k_min <= k_max");
  if (c.kmeans.restarts == 0 || c.kmeans.max_iter == 0)
    throw Error(ErrorCode::Config, "restarts and max_iter must be positive");
  if (c.smoothing_window == 0) throw Error(ErrorCode::Config, "smoothing_window must be positive");
  const auto& periods = c.periods.periods();
  if (std::none_of(periods.begin(), periods.end(),
                   [&](const Period& p) { return p.name == c.epicentre_period; }))
    throw Error(ErrorCode::Config, "epicentre_period '" + c.epicentre_period + "' is not a period");

  if (j.contains("coding")) {
    const auto& k = j.at("coding");
    check_keys(k, "coding", {"row_convention", "column_convention"});
    std::string s;
    if (k.contains("row_convention")) {
      read(k, "row_convention", s);
      c.row_convention = parse_convention(s);
    }
    if (k.contains("column_convention")) {
      read(k, "column_convention", s);
      c.column_convention = parse_convention(s);
    }
  }

  read(j, "seed", c.seed);
  if (j.contains("output")) {
    const auto& o = j.at("output");
    check_keys(o, "output", {"dir", "plotdata"});
    std::string dir;
    read(o, "dir", dir);
    if (!dir.empty()) c.output_dir = resolve(base, dir);
    read(o, "plotdata", c.plotdata);
  }
  if (c.output_dir.is_relative()) c.output_dir = resolve(base, c.output_dir.string());
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "config not found: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, "cannot parse " + path.string() + ": " + e.what());
  }
  return from_json(j, fs::absolute(path).parent_path());
}

json PipelineConfig::to_json() const {
  json periods_list = json::array();
  for (const auto& p : periods.periods())
    periods_list.push_back({{"name", p.name}, {"start", format_date(p.start)}});
  json j;
  j["inputs"] = inputs;
  j["field_map"] = {{"id", field_map.id},
                    {"created_at", field_map.created_at},
                    {"text", field_map.text},
                    {"user_location", field_map.user_location},
                    {"retweet", field_map.retweet},
                    {"language", field_map.language}};
  j["languages"] = languages;
  j["cleaning_rules"] = cleaning_rules.string();
  j["gazetteer"] = gazetteer.string();
  j["regions"] = regions.string();
  j["codebook"] = codebook.string();
  j["periods"] = {{"list", periods_list}, {"end", format_date(periods.end())}};
  j["ngrams"] = {{"pmi_mass", vocabulary.pmi_mass},
                 {"freq_mass", vocabulary.freq_mass},
                 {"pool_orders", vocabulary.pool_orders}};
  j["salience"] = {{"min_count", counts.min_count},
                   {"document_counts", counts.document_counts},
                   {"beta", beta},
                   {"top_k", top_k},
                   {"depth", salience_depth}};
  j["clustering"] = {{"k_min", k_min},
                     {"k_max", k_max},
                     {"restarts", kmeans.restarts},
                     {"max_iter", kmeans.max_iter},
                     {"tol", kmeans.tol},
                     {"input", to_string(cluster_input)},
                     {"smoothing_window", smoothing_window},
                     {"epicentre_period", epicentre_period}};
  j["coding"] = {{"row_convention", to_string(row_convention)},
                 {"column_convention", to_string(column_convention)}};
  j["seed"] = seed;
  j["output"] = {{"dir", output_dir.string()}, {"plotdata", plotdata}};
  return j;
}

std::string PipelineConfig::hash() const {
  auto j = to_json();
  j["output"].erase("dir");
  return sha256_hex(j.dump());
}

json Manifest::to_json() const {
  json arts = json::array();
  for (const auto& a : artifacts)
    arts.push_back({{"name", a.name}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  return {{"config_sha256", config_sha256},
          {"seed", seed},
          {"artifacts", arts},
          {"stats", stats},
          {"warnings", warnings}};
}

std::string header_line(const std::string& config_sha256, std::uint64_t seed) {
  return "stcorpus config_sha256=" + config_sha256 + " seed=" + std::to_string(seed);
}

// ---------------------------------------------------------------- emitters

std::string emit_table1(const Table1Input& in, std::vector<std::string>* warnings,
                        const std::string& header_comment) {
  auto cell = [&](const std::string& key) -> std::string {
    auto it = in.salience.find(key);
    std::vector<std::string> terms;
    if (it != in.salience.end()) terms = top_terms(it->second, in.top_k);
    if (terms.empty()) {
      if (warnings) warnings->push_back("table1: empty cell " + key);
      return kEmptyCell;
    }
    return md_escape(render_terms(terms, in.codebook));
  };
  auto ratio_cell = [&](const std::map<std::string, RatioTable>& tables, const std::string& key) {
    auto it = tables.find(key);
    if (it == tables.end() || it->second.entries.empty()) return std::string(kEmptyCell);
    return it->second.display();
  };

  std::ostringstream out;
  if (!header_comment.empty()) out << "<!-- " << header_comment << " -->\n\n";
  out << "# Top " << in.top_k << " scaled F-score terms\n\n";
  out << "| |";
  for (const auto& s : in.spatial) out << ' ' << md_escape(s) << " |";
  out << " Marginal | Ratios |\n|---|";
  for (std::size_t i = 0; i < in.spatial.size(); ++i) out << "---|";
  out << "---|---|\n";

  for (const auto& p : in.periods) {
    out << "| " << md_escape(p) << " |";
    for (const auto& s : in.spatial) out << ' ' << cell("cell:" + cell_label(p, s)) << " |";
    out << ' ' << cell("period:" + p) << " | " << ratio_cell(in.row_ratios, p) << " |\n";
  }

  out << "| Clusters |";
  for (const auto& s : in.spatial) out << ' ' << cell("cluster:" + s) << " |";
  std::string frequent;
  for (const auto& [term, category] : in.most_frequent) {
    if (!frequent.empty()) frequent += ", ";
    frequent += in.codebook ? term + " (" + std::string(to_string(category)) + ")" : term;
  }
  if (frequent.empty()) {
    if (warnings) warnings->push_back("table1: no most-frequent terms");
    frequent = kEmptyCell;
  }
  out << ' ' << md_escape(frequent) << " | |\n";

  out << "| Ratios |";
  for (const auto& s : in.spatial) out << ' ' << ratio_cell(in.column_ratios, s) << " |";
  out << " | |\n";

  std::set<std::string> conventions;
  for (const auto& [k, t] : in.row_ratios) conventions.insert("rows: " + std::string(to_string(t.convention)));
  for (const auto& [k, t] : in.column_ratios)
    conventions.insert("columns: " + std::string(to_string(t.convention)));
  if (!conventions.empty()) {
    out << "\nRatio denominators:";
    bool first = true;
    for (const auto& c : conventions) {
      out << (first ? " " : "; ") << c;
      first = false;
    }
    out << ".\n";
  }
  return out.str();
}

std::vector<std::string> emit_series_plotdata(const TimeSeriesPanel& supra_all,
                                              const TimeSeriesPanel& supra_split,
                                              const TimeSeriesPanel& fine,
                                              const ClusterResult& clusters,
                                              const std::map<int, std::string>& cluster_names,
                                              const fs::path& dir,
                                              const std::string& header_comment) {
  std::vector<std::string> names = {"fig1a_normalized.csv", "fig1b_residual.csv",
                                    "fig1c_clusters.csv"};
  {
    CsvWriter w(dir / names[0], header_comment, {"supra_region", "date", "normalized"});
    for (std::size_t g = 0; g < supra_all.groups.size(); ++g)
      for (std::size_t d = 0; d < supra_all.n_days; ++d)
        w.row(supra_all.groups[g].group, format_date(supra_all.date(d)),
              fmt(supra_all.normalized(g, d)));
  }
  {
    CsvWriter w(dir / names[1], header_comment, {"supra_region", "tweet_type", "date", "residual"});
    for (std::size_t g = 0; g < supra_split.groups.size(); ++g)
      for (std::size_t d = 0; d < supra_split.n_days; ++d)
        w.row(supra_split.groups[g].group, std::string(to_string(supra_split.groups[g].type)),
              format_date(supra_split.date(d)), fmt(supra_split.residual(g, d)));
  }
  {
    const auto assignment = clusters.assignment();
    CsvWriter w(dir / names[2], header_comment,
                {"region", "cluster", "label", "date", "normalized"});
    for (std::size_t g = 0; g < fine.groups.size(); ++g) {
      const auto& id = fine.groups[g].group;
      auto it = assignment.find(id);
      if (it == assignment.end()) continue;
      auto name = cluster_names.count(it->second) ? cluster_names.at(it->second) : std::string();
      for (std::size_t d = 0; d < fine.n_days; ++d)
        w.row(id, std::to_string(it->second), name, format_date(fine.date(d)),
              fmt(fine.normalized(g, d)));
    }
  }
  return names;
}

// ---------------------------------------------------------------- pipeline

PipelineResult run_pipeline(const PipelineConfig& cfg, PipelineScope scope) {
  const bool full = scope == PipelineScope::Full;
  PipelineResult result;
  Manifest& manifest = result.manifest;
  manifest.config_sha256 = cfg.hash();
  manifest.seed = cfg.seed;
  const std::string header = header_line(manifest.config_sha256, cfg.seed);
  json& stats = manifest.stats;

  // ingest
  auto records = run_stage("ingest", [&] {
    std::vector<fs::path> shards;
    for (const auto& g : cfg.inputs) {
      auto found = expand_glob(g);
      shards.insert(shards.end(), found.begin(), found.end());
    }
    std::sort(shards.begin(), shards.end());
    shards.erase(std::unique(shards.begin(), shards.end()), shards.end());
    LoadStats ls;
    auto loaded = load_records(shards, cfg.field_map, &ls);
    auto lang = filter_language(std::move(loaded), cfg.languages);
    auto windowed = filter_window(std::move(lang.records), cfg.periods.window());
    if (windowed.records.empty())
      throw Error(ErrorCode::EmptyCorpus, "no records inside the analysis window");
    stats["ingest"] = {{"files", ls.files},
                       {"lines", ls.lines},
                       {"duplicates", ls.duplicates},
                       {"language_excluded", lang.excluded},
                       {"window_excluded", windowed.excluded},
                       {"records", windowed.records.size()}};
    return std::move(windowed.records);
  });
  result.records = records.size();

  // textproc
  TermVocabulary vocab;
  auto terms = run_stage("textproc", [&] {
    if (!full) return std::vector<std::vector<std::string>>{};
    const CleaningRules rules =
        cfg.cleaning_rules.empty() ? CleaningRules() : CleaningRules::load(cfg.cleaning_rules);
    const RuleTokenizer tokenizer;
    std::vector<std::vector<std::string>> tokens(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
      tokens[i] = tokenizer.tokenize(clean_text(records[i].text, rules));

    std::map<std::string, MonthCounts> by_month;
    for (std::size_t i = 0; i < records.size(); ++i)
      if (records[i].tweet_type == TweetType::Original)
        by_month[month_key(records[i].created_at)].add_document(tokens[i]);
    vocab = select_vocabulary(compute_pmi(by_month), cfg.vocabulary);

    std::vector<std::vector<std::string>> segmented(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) segmented[i] = segment_terms(tokens[i], vocab);
    stats["textproc"] = {{"months", by_month.size()}, {"vocabulary", vocab.size()}};
    return segmented;
  });
  result.vocabulary_size = vocab.size();

  // geonorm
  auto locations = run_stage("geonorm", [&] {
    const auto hierarchy = RegionHierarchy::load(cfg.gazetteer, cfg.regions);
    std::unordered_map<std::string, NormalizedLocation> cache;
    std::vector<NormalizedLocation> out;
    out.reserve(records.size());
    std::size_t ambiguous = 0;
    std::vector<std::string> raws;
    for (const auto& r : records) {
      auto it = cache.find(r.user_location);
      if (it == cache.end()) it = cache.emplace(r.user_location, hierarchy.normalize(r.user_location)).first;
      out.push_back(it->second);
      if (it->second.mapped()) {
        ++result.supra_counts[it->second.supra];
      } else {
        ++result.unmapped;
        if (it->second.ambiguous) ++ambiguous;
        raws.push_back(r.user_location);
      }
    }
    json shares = json::object();
    const std::size_t mapped = records.size() - result.unmapped;
    for (const auto& [supra, n] : result.supra_counts)
      shares[supra] = {{"count", n}, {"share", mapped ? double(n) / double(mapped) : 0.0}};
    json top = json::array();
    for (const auto& [raw, n] : top_unmapped(raws, hierarchy, 20)) top.push_back({raw, n});
    stats["geonorm"] = {{"mapped", mapped},
                        {"unmapped", result.unmapped},
                        {"ambiguous", ambiguous},
                        {"supra", shares},
                        {"top_unmapped", top}};
    if (mapped == 0) throw Error(ErrorCode::EmptyCorpus, "no record has a mappable location");
    return out;
  });

  // temporal
  TimeSeriesPanel supra_split, supra_all, fine;
  std::map<int, std::string> cluster_names;
  std::vector<std::string> spatial_order;
  run_stage("temporal", [&] {
    std::vector<SeriesObservation> by_supra, by_fine;
    by_supra.reserve(records.size());
    by_fine.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!locations[i].mapped()) continue;
      by_supra.push_back({locations[i].supra, records[i].tweet_type, records[i].created_at});
      by_fine.push_back({locations[i].fine, records[i].tweet_type, records[i].created_at});
    }
    const Day first = cfg.periods.start(), end = cfg.periods.end();
    supra_split = build_series(by_supra, first, end, true);
    normalize_series(supra_split);
    remove_mean_trend(supra_split);
    supra_all = build_series(by_supra, first, end, false);
    normalize_series(supra_all);
    fine = build_series(by_fine, first, end, false);
    normalize_series(fine);
    remove_mean_trend(fine, SeriesType::All);

    std::vector<std::string> ids;
    for (const auto& g : fine.groups) ids.push_back(g.group);
    const Matrix& input = cfg.cluster_input == ClusterInput::Residual ? fine.residual : fine.normalized;
    const Matrix series = smooth_rows(input, cfg.smoothing_window);
    std::size_t k_max = cfg.k_max;
    if (ids.size() >= 1 && k_max > ids.size() - 1) {
      k_max = std::max<std::size_t>(ids.size() - 1, 1);
      manifest.warnings.push_back("k_max clamped to " + std::to_string(k_max) + " for " +
                                  std::to_string(ids.size()) + " regions");
    }
    result.clusters = select_k(series, ids, cfg.k_min, k_max, cfg.seed, cfg.kmeans);
    const auto& cl = result.clusters;
    for (const auto& w : cl.warnings) manifest.warnings.push_back("clustering: " + w);

    if (cl.k == 2) {
      // Mean normalised share of each cluster's members in the reference period.
      std::size_t pi = 0;
      while (cfg.periods.periods()[pi].name != cfg.epicentre_period) ++pi;
      const Day ps = cfg.periods.periods()[pi].start, pe = cfg.periods.end_of(pi);
      double mass[2] = {0.0, 0.0};
      std::size_t members[2] = {0, 0};
      for (std::size_t g = 0; g < ids.size(); ++g) {
        const int l = cl.labels[g];
        ++members[l];
        for (std::size_t d = 0; d < fine.n_days; ++d)
          if (fine.date(d) >= ps && fine.date(d) < pe) mass[l] += fine.normalized(g, d);
      }
      const int epi = mass[1] / double(members[1]) > mass[0] / double(members[0]) ? 1 : 0;
      cluster_names[epi] = "Epicentre";
      cluster_names[1 - epi] = "Periphery";
      spatial_order = {"Periphery", "Epicentre"};
    } else {
      for (std::size_t c = 0; c < cl.k; ++c) {
        cluster_names[int(c)] = "Cluster " + std::to_string(c);
        spatial_order.push_back(cluster_names[int(c)]);
      }
    }
    for (std::size_t g = 0; g < ids.size(); ++g)
      result.region_to_spatial[ids[g]] = cluster_names[cl.labels[g]];
    stats["temporal"] = {{"days", fine.n_days},
                         {"regions", ids.size()},
                         {"k", cl.k},
                         {"silhouette", cl.silhouette},
                         {"inertia", cl.inertia},
                         {"best_restart", cl.best_restart}};
  });

  // salience
  std::vector<TermDoc> docs;
  std::vector<std::pair<std::string, std::uint64_t>> frequent;
  run_stage("salience", [&] {
    if (!full) return;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!locations[i].mapped()) continue;
      TermDoc d;
      d.record_id = records[i].id;
      d.terms = std::move(terms[i]);
      d.region = locations[i].fine;
      d.supra = locations[i].supra;
      d.period = assign_period(records[i].created_at, cfg.periods);
      d.spatial = result.region_to_spatial.at(d.region);
      d.tweet_type = records[i].tweet_type;
      docs.push_back(std::move(d));
    }
    const std::pair<MarginalAxis, const char*> axes[] = {
        {MarginalAxis::None, "cell:"}, {MarginalAxis::Spatial, "period:"}, {MarginalAxis::Temporal, "cluster:"}};
    json sizes = json::object();
    for (const auto& [axis, prefix] : axes) {
      const auto labels = marginalize(docs, axis);
      const auto counts = build_counts(docs, labels, cfg.counts);
      for (std::size_t c = 0; c < counts.categories.size(); ++c)
        result.salience[prefix + counts.categories[c]] = scaled_f_score(counts, c, cfg.beta);
      sizes[std::string(prefix, std::strlen(prefix) - 1)] = counts.vocabulary.size();
    }
    frequent = most_frequent_terms(docs, cfg.top_k);
    stats["salience"] = {{"documents", docs.size()}, {"terms", sizes}};
  });

  // coding
  Codebook codebook;
  run_stage("coding", [&] {
    if (!full) return;
    codebook = Codebook::load(cfg.codebook);
    auto coded = [&](const std::string& key) {
      auto it = result.salience.find(key);
      if (it == result.salience.end()) return std::vector<CodedTerm>{};
      const auto top = top_terms(it->second, cfg.top_k);
      return apply_codebook(top, codebook);
    };
    auto ratios = [&](const std::vector<std::vector<CodedTerm>>& lists, DenominatorConvention conv,
                      const std::string& scope, std::map<std::string, RatioTable>& out,
                      const std::string& key) {
      std::size_t coded_terms = 0, total = 0;
      for (const auto& l : lists)
        for (const auto& t : l) {
          ++total;
          if (t.second != TermCategory::Uncoded) ++coded_terms;
        }
      if (total == 0 || (conv == DenominatorConvention::ExcludeUncoded && coded_terms == 0)) {
        manifest.warnings.push_back("coding: no coded terms for " + scope);
        return;
      }
      out[key] = category_ratios(lists, conv, scope);
    };
    for (const auto& p : cfg.periods.periods()) {
      std::vector<std::vector<CodedTerm>> lists;
      for (const auto& s : spatial_order) lists.push_back(coded("cell:" + cell_label(p.name, s)));
      ratios(lists, cfg.row_convention, "period:" + p.name, result.row_ratios, p.name);
    }
    for (const auto& s : spatial_order) {
      std::vector<std::vector<CodedTerm>> lists;
      for (const auto& p : cfg.periods.periods()) lists.push_back(coded("cell:" + cell_label(p.name, s)));
      ratios(lists, cfg.column_convention, "cluster:" + s, result.column_ratios, s);
    }
  });

  // report
  run_stage("report", [&] {
    const fs::path& dir = cfg.output_dir;
    fs::create_directories(dir);
    std::vector<std::string> written;

    {
      CsvWriter w(dir / "series.csv", header,
                  {"group", "tweet_type", "date", "count", "normalized", "residual"});
      for (std::size_t g = 0; g < supra_split.groups.size(); ++g)
        for (std::size_t d = 0; d < supra_split.n_days; ++d)
          w.row(supra_split.groups[g].group, std::string(to_string(supra_split.groups[g].type)),
                format_date(supra_split.date(d)), num(supra_split.counts[g][d]),
                fmt(supra_split.normalized(g, d)), fmt(supra_split.residual(g, d)));
      written.push_back("series.csv");
    }
    {
      const auto& cl = result.clusters;
      CsvWriter w(dir / "clusters.csv", header, {"group", "cluster", "k", "silhouette", "seed", "label"});
      for (std::size_t g = 0; g < cl.ids.size(); ++g)
        w.row(cl.ids[g], std::to_string(cl.labels[g]), num(cl.k), fmt(cl.silhouette),
              std::to_string(cl.seed), cluster_names.at(cl.labels[g]));
      written.push_back("clusters.csv");
    }
    if (full) {
      CsvWriter w(dir / "salience.csv", header,
                  {"category", "rank", "term", "precision", "recall", "precision_cdf", "recall_cdf",
                   "sfs"});
      for (const auto& [category, entries] : result.salience) {
        const std::size_t n = std::min(entries.size(), cfg.salience_depth);
        for (std::size_t r = 0; r < n; ++r) {
          const auto& e = entries[r];
          w.row(category, num(r + 1), e.term, fmt(e.precision), fmt(e.recall), fmt(e.precision_cdf),
                fmt(e.recall_cdf), fmt(e.sfs));
        }
      }
      written.push_back("salience.csv");
    }
    if (full) {
      CsvWriter w(dir / "ratios.csv", header,
                  {"scope", "category", "count", "denominator", "ratio", "convention", "rounded"});
      for (const auto* tables : {&result.row_ratios, &result.column_ratios})
        for (const auto& [key, t] : *tables)
          for (const auto& e : t.entries)
            w.row(t.scope, std::string(to_string(e.category)), num(e.count), num(e.denominator),
                  fmt(e.ratio), std::string(to_string(t.convention)), e.display());
      written.push_back("ratios.csv");
    }
    if (full) {
      Table1Input t;
      for (const auto& p : cfg.periods.periods()) t.periods.push_back(p.name);
      t.spatial = spatial_order;
      t.salience = result.salience;
      for (const auto& [term, n] : frequent) t.most_frequent.emplace_back(term, codebook.category_of(term));
      t.row_ratios = result.row_ratios;
      t.column_ratios = result.column_ratios;
      t.codebook = &codebook;
      t.top_k = cfg.top_k;
      std::ofstream out(dir / "table1.md", std::ios::binary);
      if (!out) throw Error(ErrorCode::Io, "cannot write " + (dir / "table1.md").string());
      out << emit_table1(t, &manifest.warnings, header);
      written.push_back("table1.md");
    }
    if (full) {
      vocab.save(dir / "vocabulary.tsv", header);
      written.push_back("vocabulary.tsv");
      write_records(dir / "records.jsonl", records, header);
      written.push_back("records.jsonl");
    }
    if (cfg.plotdata) {
      auto names = emit_series_plotdata(supra_all, supra_split, fine, result.clusters, cluster_names,
                                        dir, header);
      written.insert(written.end(), names.begin(), names.end());
    }

    std::sort(written.begin(), written.end());
    for (const auto& name : written)
      manifest.artifacts.push_back({name, sha256_file(dir / name), fs::file_size(dir / name)});

    json doc = manifest.to_json();
    auto config_json = cfg.to_json();
    config_json["output"].erase("dir");
    doc["config"] = config_json;
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + (dir / "manifest.json").string());
    out << doc.dump(2) << '\n';
  });
  return result;
}

}  // namespace stcorpus
