# Copyright 2026 The stcorpus Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json

import pytest

import stcorpus


def test_clean_and_tokenize():
    assert stcorpus.clean_text("RT @user notizia https://t.co/x #Covid-19") == "notizia #covid19"
    rules = json.dumps({"boilerplate": [{"prefix": "AGENZIA_X:"}]})
    assert stcorpus.clean_text("AGENZIA_X: testo vero", rules) == "testo vero"
    assert stcorpus.tokenize("Conte parla dell'Italia") == ["conte", "parla", "dell'italia"]


def test_cutoff():
    assert stcorpus.mass_threshold_cutoff([4, 3, 2, 1], 0.75) == 2
    assert stcorpus.mass_threshold_cutoff([-1, 0, 3], 0.75, True) == 3
    with pytest.raises(stcorpus.Error):
        stcorpus.mass_threshold_cutoff([], 0.5)


def test_category_ratios():
    terms = [("a", "External")] * 5 + [("b", "Spread")] * 4 + [("c", "Uncoded")] * 11
    table = stcorpus.category_ratios([terms], "include_uncoded")
    shown = {e["category"]: e["display"] for e in table["entries"]}
    assert shown == {"External": "0.25", "Spread": "0.20"}
    assert table["uncoded"] == 11


def test_scaled_f_score_and_select_k():
    ranked = stcorpus.scaled_f_score(["a", "b"], ["F", "R"], [[9, 1], [1, 9]], "F")
    assert ranked[0]["term"] == "a"
    rows = [[1, 0, 0], [1, 0.01, 0], [0, 0, 1], [0, 0.01, 1]]
    result = stcorpus.select_k(rows, ["w", "x", "y", "z"], 2, 2, 1)
    assert result["k"] == 2
    assert result["labels"] == [0, 0, 1, 1]


def test_pipeline_on_small_fixture(tmp_path):
    stcorpus.write_synthetic_fixture(tmp_path, records=3000)
    a = stcorpus.run_pipeline(tmp_path / "config.json", tmp_path / "a")
    b = stcorpus.run_pipeline(tmp_path / "config.json", tmp_path / "b")
    assert a["artifacts"] == b["artifacts"]
    names = {x["name"] for x in a["artifacts"]}
    assert {"series.csv", "clusters.csv", "table1.md"} <= names
    loc = stcorpus.normalize_location("Milan, Lombardia", tmp_path / "gazetteer.tsv",
                                      tmp_path / "regions.tsv")
    assert loc == ("Lombardia", "North")
    with pytest.raises(stcorpus.Error, match="config not found"):
        stcorpus.run_pipeline(tmp_path / "missing.json")
