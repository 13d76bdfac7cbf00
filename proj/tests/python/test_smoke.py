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

import json
from pathlib import Path

import pytest

import neolex

POLISH = [
    "Wczoraj w pracy wszyscy rozmawiali o tym, jak bardzo {w} zmienia nasze codzienne życie.",
    "Moja siostra twierdzi, że {w} to najciekawsze zjawisko ostatnich miesięcy w mieście.",
    "Dziennikarze coraz częściej piszą o tym, że {w} pojawia się w rozmowach młodych ludzi.",
]


def corpus_documents():
    docs = []
    for i in range(8):
        sentences = [t.format(w="hejtownik") for t in POLISH]
        sentences.append(POLISH[i % 3].format(w="gwyrdol"))
        sentences.append(POLISH[(i + 1) % 3].format(w="kompuetr"))
        docs.append(
            neolex.make_document(
                f"https://site{i % 4}.example.pl/a/{i}",
                " ".join(sentences),
                f"2024-12-0{1 + i % 5}T10:00:00Z",
            )
        )
    return docs


def dictionary_words():
    words = {"komputer"}
    for t in POLISH:
        for raw in t.replace("{w}", " ").replace(",", " ").replace(".", " ").split():
            words.add(raw.lower())
    return sorted(words)


def test_lexicon_and_edit_distance():
    lex = neolex.Lexicon.from_words("d", ["komputer", "telefon"])
    assert len(lex) == 2 and "Komputer" in lex
    nearest = neolex.EditDistanceIndex(lex).nearest("kompuetr")
    assert nearest["form"] == "komputer"
    assert nearest["edits"] == 2
    assert nearest["distance"] == pytest.approx(0.25)
    assert neolex.levenshtein("żółw", "zolw") == 3


def test_metrics():
    prf = neolex.compute_prf({"a", "b", "c"}, {"b", "c", "d"})
    assert (prf["tp"], prf["fp"], prf["fn"]) == (2, 1, 1)
    groups = neolex.compute_group_accuracy(
        [("metaverse", [("metaverse", "metavar"), ("metaverses", "metavar")])]
    )
    assert groups["S"] == 1 and groups["K"] == 0
    cat = neolex.compute_categorization(["x", "y"], ["x", "x"], ["x", "y"])
    assert cat["accuracy"] == pytest.approx(0.5)


def test_run_corpus_with_python_judge():
    def judge(prompt):
        return "Neologizm: nie" if "gwyrdol" in prompt.split("[Słowo]")[-1] else "Neologizm: tak"

    exemplars = Path(__file__).resolve().parents[2] / "config" / "llm_exemplars.json"
    result = neolex.run_corpus(
        corpus_documents(),
        dictionary_words(),
        gold=["hejtownik"],
        filter_config={"min_doc_freq": 3, "min_lowercase": 3, "min_non_ne": 3, "min_polish_contexts": 3},
        llm=judge,
        exemplars=str(exemplars),
    )
    survivors = [g["base_form"] for g in result["survivors"]]
    assert survivors == ["hejtownik"]
    counts = [s["remaining"] for s in result["stages"]]
    assert counts == sorted(counts, reverse=True)
    assert result["stages"][-1]["precision"] == pytest.approx(1.0)
    rejected = {r["id"]: r["decision"]["filter_id"] for r in result["rejected"]}
    assert rejected["kompuetr"] == "edit-distance"
    assert rejected["gwyrdol"] == "llm"


def test_llm_operations_with_callable():
    definition = neolex.generate_definition("hejtownik", ["a", "b", "c"], 3, lambda p: "Ktoś, kto hejtuje.")
    assert definition["text"] == "Ktoś, kto hejtuje." and definition["shots"] == 3
    verdict = neolex.judge_pairwise("x", "A", "B", ["c"] * 5, lambda p: "WIN", 7)
    expected = "WIN" if verdict["a_first"] else "LOSE"
    assert verdict["de_shuffled"] == expected
    assert neolex.parse_filter_verdict("Neologizm: tak") is True
    with pytest.raises(neolex.PreconditionError):
        neolex.generate_definition("x", ["a"], 3, lambda p: "")


def test_application_review_flow(tmp_path):
    docs = tmp_path / "docs.jsonl"
    docs.write_text("".join(json.dumps(d, ensure_ascii=False) + "\n" for d in corpus_documents()), encoding="utf-8")
    (tmp_path / "dict.txt").write_text("\n".join(dictionary_words()) + "\n", encoding="utf-8")
    conf = tmp_path / "neolex.conf"
    conf.write_text(
        "database = store.db\n"
        "lexicon.dictionary = dict.txt\n"
        "filter.min_doc_freq = 3\n"
        "filter.min_lowercase = 3\n"
        "filter.min_non_ne = 3\n"
        "filter.min_polish_contexts = 3\n"
        "filter.llm = false\n",
        encoding="utf-8",
    )
    app = neolex.Application(str(conf))
    assert app.import_documents(str(docs)) == 8
    stages = app.run_pipeline(["hejtownik"])
    assert stages[0]["filter_id"] == ""
    page = app.list_candidates(stage="survivors")
    ids = [c["id"] for c in page["items"]]
    assert "hejtownik" in ids and "kompuetr" not in ids
    app.set_review_status("hejtownik", "accepted", "ania")
    trend = app.frequency_trend("hejtownik")
    assert sum(b["count"] for b in trend["buckets"]) == 24
    csv = app.export_csv(status="accepted")
    rows = neolex.parse_csv(csv)
    assert [r[0] for r in rows[1:]] == ["hejtownik"]
    assert neolex.write_csv(rows) == csv
    with pytest.raises(neolex.ConfigError):
        app.update_filter_config({"min_len": 0})
    with pytest.raises(neolex.NotFoundError):
        app.candidate("brak")
