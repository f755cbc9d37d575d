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

// Python bindings for the main operations. Structured results cross the
// boundary as JSON text and are decoded in the package __init__.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "stcorpus/coding.hpp"
#include "stcorpus/error.hpp"
#include "stcorpus/geonorm.hpp"
#include "stcorpus/report.hpp"
#include "stcorpus/salience.hpp"
#include "stcorpus/synth.hpp"
#include "stcorpus/temporal.hpp"
#include "stcorpus/textproc.hpp"

namespace py = pybind11;
using namespace stcorpus;
using nlohmann::json;

namespace {

CleaningRules rules_from(const std::optional<std::string>& rules_json) {
  return rules_json ? CleaningRules::from_json(json::parse(*rules_json)) : CleaningRules{};
}

std::string ratio_json(const RatioTable& t) {
  json out = {{"scope", t.scope},
              {"convention", std::string(to_string(t.convention))},
              {"total_terms", t.total_terms},
              {"uncoded", t.uncoded},
              {"entries", json::array()}};
  for (const auto& e : t.entries)
    out["entries"].push_back({{"category", std::string(to_string(e.category))},
                              {"count", e.count},
                              {"denominator", e.denominator},
                              {"ratio", e.ratio},
                              {"display", e.display()}});
  return out.dump();
}

std::string cluster_json(const ClusterResult& r) {
  json out = {{"k", r.k},         {"ids", r.ids},         {"labels", r.labels},
              {"inertia", r.inertia}, {"silhouette", r.silhouette}, {"seed", r.seed},
              {"warnings", r.warnings}};
  return out.dump();
}

Matrix matrix_from(const std::vector<std::vector<double>>& rows) { return Matrix::from_rows(rows); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "stcorpus native core";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("clean_text",
        [](const std::string& text, const std::optional<std::string>& rules_json) {
          return clean_text(text, rules_from(rules_json));
        },
        py::arg("text"), py::arg("rules_json") = py::none());
  m.def("tokenize", [](const std::string& text) { return tokenize(text); }, py::arg("text"));
  m.def("mass_threshold_cutoff",
        [](const std::vector<double>& s, double mass, bool shift) {
          return mass_threshold_cutoff(s, mass, shift);
        },
        py::arg("scores"), py::arg("mass"), py::arg("shift_to_zero") = false);

  m.def("normalize_location",
        [](const std::string& raw, const std::filesystem::path& gazetteer,
           const std::filesystem::path& regions) {
          static std::map<std::pair<std::string, std::string>, RegionHierarchy> cache;
          auto key = std::make_pair(gazetteer.string(), regions.string());
          auto it = cache.find(key);
          if (it == cache.end()) it = cache.emplace(key, RegionHierarchy::load(gazetteer, regions)).first;
          auto n = it->second.normalize(raw);
          return py::make_tuple(n.mapped() ? py::object(py::str(n.fine)) : py::object(py::none()),
                                n.mapped() ? py::object(py::str(n.supra)) : py::object(py::none()));
        },
        py::arg("raw"), py::arg("gazetteer"), py::arg("regions"));

  m.def("_category_ratios",
        [](const std::vector<std::vector<std::pair<std::string, std::string>>>& lists,
           const std::string& convention) {
          std::vector<std::vector<CodedTerm>> coded;
          for (const auto& l : lists) {
            auto& out = coded.emplace_back();
            for (const auto& [term, cat] : l) {
              auto c = parse_term_category(cat);
              if (!c) throw Error(ErrorCode::BadCodebook, "unknown category '" + cat + "'");
              out.emplace_back(term, *c);
            }
          }
          return ratio_json(category_ratios(coded, parse_convention(convention)));
        },
        py::arg("lists"), py::arg("convention"));

  m.def("_scaled_f_score",
        [](const std::vector<std::string>& vocabulary, const std::vector<std::string>& categories,
           const std::vector<std::vector<std::uint64_t>>& counts, const std::string& focal,
           double beta) {
          TermCategoryCounts c;
          c.vocabulary = vocabulary;
          c.categories = categories;
          c.counts = counts;
          c.category_totals.assign(categories.size(), 0);
          for (const auto& row : counts) {
            if (row.size() != categories.size())
              throw Error(ErrorCode::Config, "every count row needs one value per category");
            for (std::size_t j = 0; j < row.size(); ++j) c.category_totals[j] += row[j];
          }
          auto it = std::find(categories.begin(), categories.end(), focal);
          if (it == categories.end()) throw Error(ErrorCode::OutOfRange, "unknown focal category");
          json out = json::array();
          for (const auto& e : scaled_f_score(c, std::size_t(it - categories.begin()), beta))
            out.push_back({{"term", e.term}, {"precision", e.precision}, {"recall", e.recall},
                           {"precision_cdf", e.precision_cdf}, {"recall_cdf", e.recall_cdf},
                           {"sfs", e.sfs}});
          return out.dump();
        },
        py::arg("vocabulary"), py::arg("categories"), py::arg("counts"), py::arg("focal"),
        py::arg("beta") = 1.0);

  m.def("_select_k",
        [](const std::vector<std::vector<double>>& rows, const std::vector<std::string>& ids,
           std::size_t k_min, std::size_t k_max, std::uint64_t seed) {
          return cluster_json(select_k(matrix_from(rows), ids, k_min, k_max, seed));
        },
        py::arg("rows"), py::arg("ids"), py::arg("k_min") = 2, py::arg("k_max") = 8,
        py::arg("seed") = 0);

  m.def("_run_pipeline",
        [](const std::filesystem::path& config, const std::optional<std::filesystem::path>& out,
           const std::optional<std::uint64_t>& seed) {
          auto cfg = PipelineConfig::load(config);
          if (out) cfg.output_dir = std::filesystem::absolute(*out);
          if (seed) cfg.seed = *seed;
          py::gil_scoped_release release;
          return run_pipeline(cfg).manifest.to_json().dump();
        },
        py::arg("config"), py::arg("output_dir") = py::none(), py::arg("seed") = py::none());

  m.def("write_synthetic_fixture",
        [](const std::filesystem::path& dir, std::size_t records, std::uint64_t seed,
           std::uint64_t pipeline_seed) {
          SynthOptions o;
          o.records = records;
          o.seed = seed;
          write_fixture(generate_corpus(o), dir, pipeline_seed, o.shards);
        },
        py::arg("dir"), py::arg("records") = 5000, py::arg("seed") = 20200127,
        py::arg("pipeline_seed") = 42);
}
