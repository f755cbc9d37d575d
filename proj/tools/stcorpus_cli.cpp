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

// Command-line front end: ingest, geonorm, cluster, run and synth.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "stcorpus/error.hpp"
#include "stcorpus/geonorm.hpp"
#include "stcorpus/ingest.hpp"
#include "stcorpus/report.hpp"
#include "stcorpus/synth.hpp"

namespace fs = std::filesystem;
using namespace stcorpus;

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "config not found: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, "cannot parse " + path + ": " + e.what());
  }
}

int cmd_ingest(const std::vector<std::string>& inputs, const std::string& config, const std::string& out) {
  FieldMap schema;
  std::vector<std::string> languages;
  if (!config.empty()) {
    auto j = read_json(config);
    if (j.contains("field_map")) schema = field_map_from_json(j.at("field_map"));
    if (j.contains("languages")) languages = j.at("languages").get<std::vector<std::string>>();
  }
  std::vector<fs::path> shards;
  for (const auto& g : inputs) {
    auto found = expand_glob(g);
    shards.insert(shards.end(), found.begin(), found.end());
  }
  std::sort(shards.begin(), shards.end());
  shards.erase(std::unique(shards.begin(), shards.end()), shards.end());
  LoadStats stats;
  auto kept = filter_language(load_records(shards, schema, &stats), languages);
  write_records(out, kept.records, "stcorpus normalized records");
  std::cerr << "files=" << stats.files << " lines=" << stats.lines
            << " duplicates=" << stats.duplicates << " language_excluded=" << kept.excluded
            << " records=" << kept.records.size() << '\n';
  return 0;
}

int cmd_geonorm(const std::string& gazetteer, const std::string& regions, const std::string& input,
                bool report_unmapped, std::size_t top) {
  const auto h = RegionHierarchy::load(gazetteer, regions);
  std::cout << "gazetteer entries: " << h.gazetteer_size()
            << ", regions: " << h.fine_to_supra().size() << '\n';
  if (input.empty()) return 0;
  const auto records = load_records({fs::path(input)}, FieldMap{});
  std::map<std::string, std::size_t> supra;
  std::vector<std::string> raws;
  std::size_t unmapped = 0;
  for (const auto& r : records) {
    raws.push_back(r.user_location);
    auto n = h.normalize(r.user_location);
    if (n.mapped())
      ++supra[n.supra];
    else
      ++unmapped;
  }
  const std::size_t mapped = records.size() - unmapped;
  for (const auto& [s, n] : supra) {
    std::printf("%-8s %8zu  %.4f\n", s.c_str(), n, mapped ? double(n) / double(mapped) : 0.0);
  }
  std::printf("%-8s %8zu\n", "Unmapped", unmapped);
  if (report_unmapped) {
    std::cout << "\ntop unmapped locations:\n";
    for (const auto& [raw, n] : top_unmapped(raws, h, top)) std::cout << n << '\t' << raw << '\n';
  }
  return 0;
}

PipelineConfig load_config(const std::string& path, const std::string& out_dir,
                           std::optional<std::uint64_t> seed, bool plotdata) {
  auto cfg = PipelineConfig::load(path);
  if (!out_dir.empty()) cfg.output_dir = fs::absolute(out_dir);
  if (seed) cfg.seed = *seed;
  if (plotdata) cfg.plotdata = true;
  return cfg;
}

void print_manifest(const PipelineConfig& cfg, const Manifest& m) {
  std::cout << "config_sha256 " << m.config_sha256 << "\nseed " << m.seed << '\n';
  for (const auto& a : m.artifacts) std::cout << a.sha256 << "  " << a.name << '\n';
  for (const auto& w : m.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "manifest " << (cfg.output_dir / "manifest.json").string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatio-temporal comparative corpus analysis"};
  app.require_subcommand(1);

  auto* ingest = app.add_subcommand("ingest", "Parse, dedupe and normalise raw record shards");
  std::vector<std::string> inputs;
  std::string ingest_config, ingest_out;
  ingest->add_option("--input", inputs, "Glob(s) of line-delimited JSON shards")->required();
  ingest->add_option("--config", ingest_config, "Pipeline config supplying field_map and languages");
  ingest->add_option("--out", ingest_out, "Normalised records file")->required();

  auto* geonorm = app.add_subcommand("geonorm", "Check a gazetteer and report unmapped locations");
  std::string gazetteer, regions, geo_input;
  bool report_unmapped = false;
  std::size_t top = 20;
  geonorm->add_option("--gazetteer", gazetteer, "raw<TAB>region file")->required()->check(CLI::ExistingFile);
  geonorm->add_option("--regions", regions, "region<TAB>supra file")->required()->check(CLI::ExistingFile);
  geonorm->add_option("--input", geo_input, "Normalised records file")->check(CLI::ExistingFile);
  geonorm->add_flag("--report-unmapped", report_unmapped, "List the most frequent unmapped strings");
  geonorm->add_option("--top", top, "How many unmapped strings to list");

  std::string config, out_dir;
  std::optional<std::uint64_t> seed;
  bool plotdata = false;
  auto* cluster = app.add_subcommand("cluster", "Build the time-series panels and cluster regions");
  std::size_t k_min = 0, k_max = 0;
  cluster->add_option("--config", config, "Pipeline config")->required();
  cluster->add_option("--k-min", k_min, "Smallest k");
  cluster->add_option("--k-max", k_max, "Largest k");
  cluster->add_option("--seed", seed, "Clustering seed");
  cluster->add_option("--out-dir", out_dir, "Output directory");
  cluster->add_flag("--plotdata", plotdata, "Also write the figure CSVs");

  auto* run = app.add_subcommand("run", "Run the whole pipeline");
  run->add_option("--config", config, "Pipeline config")->required();
  run->add_option("--out-dir", out_dir, "Output directory");
  run->add_option("--seed", seed, "Seed override");
  run->add_flag("--plotdata", plotdata, "Also write the figure CSVs");

  auto* synth = app.add_subcommand("synth", "Write the synthetic fixture");
  SynthOptions synth_opts;
  std::string synth_dir;
  std::uint64_t pipeline_seed = 42;
  synth->add_option("--out-dir", synth_dir, "Fixture directory")->required();
  synth->add_option("--records", synth_opts.records, "Analysed records");
  synth->add_option("--seed", synth_opts.seed, "Generator seed");
  synth->add_option("--pipeline-seed", pipeline_seed, "Seed written into config.json");
  synth->add_option("--shards", synth_opts.shards, "Number of shard files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return cmd_ingest(inputs, ingest_config, ingest_out);
    if (*geonorm) return cmd_geonorm(gazetteer, regions, geo_input, report_unmapped, top);
    if (*cluster) {
      auto cfg = load_config(config, out_dir, seed, plotdata);
      if (k_min) cfg.k_min = k_min;
      if (k_max) cfg.k_max = k_max;
      if (cfg.k_min < 2 || cfg.k_max < cfg.k_min) throw Error(ErrorCode::BadK, "need 2 <= k-min <= k-max");
      auto result = run_pipeline(cfg, PipelineScope::Clustering);
      std::cout << "k " << result.clusters.k << "\nsilhouette " << result.clusters.silhouette << '\n';
      print_manifest(cfg, result.manifest);
      return 0;
    }
    if (*run) {
      auto cfg = load_config(config, out_dir, seed, plotdata);
      auto result = run_pipeline(cfg);
      print_manifest(cfg, result.manifest);
      return 0;
    }
    if (*synth) {
      auto corpus = generate_corpus(synth_opts);
      write_fixture(corpus, synth_dir, pipeline_seed, synth_opts.shards);
      std::cout << "records " << corpus.records.size() << " (+" << corpus.noise.size()
                << " to be dropped), unmapped " << corpus.unmapped << '\n';
      return 0;
    }
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
