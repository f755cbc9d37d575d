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

"""Spatio-temporal tweet corpus analysis."""

import json as _json

from ._core import (  # noqa: F401
    Error,
    clean_text,
    mass_threshold_cutoff,
    normalize_location,
    tokenize,
    write_synthetic_fixture,
)
from . import _core

__all__ = [
    "Error",
    "category_ratios",
    "clean_text",
    "mass_threshold_cutoff",
    "normalize_location",
    "run_pipeline",
    "scaled_f_score",
    "select_k",
    "tokenize",
    "write_synthetic_fixture",
]


def category_ratios(lists, convention="include_uncoded"):
    """Ratios over coded lists of (term, category) pairs."""
    return _json.loads(_core._category_ratios([list(l) for l in lists], convention))


def scaled_f_score(vocabulary, categories, counts, focal, beta=1.0):
    """Ranked scaled F-scores of every term for the focal category."""
    return _json.loads(_core._scaled_f_score(vocabulary, categories, counts, focal, beta))


def select_k(rows, ids, k_min=2, k_max=8, seed=0):
    """K-means over the rows with silhouette-selected k."""
    return _json.loads(_core._select_k(rows, ids, k_min, k_max, seed))


def run_pipeline(config, output_dir=None, seed=None):
    """Runs the full pipeline and returns the manifest."""
    return _json.loads(
        _core._run_pipeline(str(config), None if output_dir is None else str(output_dir), seed)
    )
