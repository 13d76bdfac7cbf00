# Copyright 2026 The neolex Authors
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

"""Neologism candidate extraction, filtering and review."""

from ._core import (
    Application,
    ConfigError,
    EditDistanceIndex,
    Error,
    Lexicon,
    LlmError,
    NotFoundError,
    ParseError,
    PreconditionError,
    compute_categorization,
    compute_group_accuracy,
    compute_prf,
    default_chain,
    default_filter_config,
    generate_definition,
    judge_pairwise,
    levenshtein,
    make_document,
    normalize_form,
    parse_csv,
    parse_filter_verdict,
    run_corpus,
    write_csv,
)

__all__ = [
    "Application",
    "ConfigError",
    "EditDistanceIndex",
    "Error",
    "Lexicon",
    "LlmError",
    "NotFoundError",
    "ParseError",
    "PreconditionError",
    "compute_categorization",
    "compute_group_accuracy",
    "compute_prf",
    "default_chain",
    "default_filter_config",
    "generate_definition",
    "judge_pairwise",
    "levenshtein",
    "make_document",
    "normalize_form",
    "parse_csv",
    "parse_filter_verdict",
    "run_corpus",
    "write_csv",
]
