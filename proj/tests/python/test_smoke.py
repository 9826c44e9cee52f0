import json
import os
from pathlib import Path

import pytest

import cop

FIXTURES = Path(os.environ.get("COP_FIXTURES_DIR", Path(__file__).resolve().parents[2] / "fixtures"))
KB = FIXTURES / "kb"


def test_tokenize_splits_camel_case():
    assert cop.tokenize("normalizedDifference NDVI_2020") == ["normalized", "difference", "ndvi", "2020"]


def test_metrics():
    assert cop.readability([9, 7, 8, 6, 10]) == "80.0"
    assert cop.percent(6, 7) == "85.7"
    assert cop.executability([(True, False), (True, False), (False, False), (True, False)]) == "75.0"
    assert cop.accuracy([(True, True), (True, False), (False, False), (True, True)]) == "50.0"
    with pytest.raises(cop.CopError):
        cop.readability([0, 5, 5, 5, 5])


def test_kb_search_matches_frozen_oracle():
    cases = json.loads((FIXTURES / "oracle" / "bm25_expected.json").read_text())
    for case in cases:
        hits = cop.kb_search(KB / (case["kind"] + ".json"), case["kind"], case["query"],
                             case["platform"], case["language"], case["k"])
        assert [h["record_id"] for h in hits] == [h["record_id"] for h in case["hits"]]
        for got, want in zip(hits, case["hits"]):
            assert got["score"] == pytest.approx(want["score"], abs=1e-9)


def test_kb_validate_names_missing_field(tmp_path):
    records = json.loads((KB / "dataset.json").read_text())
    assert cop.kb_validate(KB / "dataset.json", "dataset") == len(records)
    del records[0]["DOI"]
    bad = tmp_path / "dataset.json"
    bad.write_text(json.dumps(records))
    with pytest.raises(cop.CopError, match="DOI"):
        cop.kb_validate(bad, "dataset")


def test_run_corpus_summary():
    out = cop.run_corpus(FIXTURES / "corpus.json", FIXTURES / "script.json", FIXTURES / "verdicts.json", KB)
    assert len(out["tasks"]) == 8
    assert out["summary"]["ma"] == 100.0
    assert out["summary"]["acc"] == 75.0
    off = cop.run_corpus(FIXTURES / "corpus.json", FIXTURES / "script.json", FIXTURES / "verdicts.json", KB,
                         {"feedback": False})
    assert all(t["revisions"] == 1 for t in off["tasks"])


def test_check_annotation():
    design = json.dumps({"Document_Type": "Algorithm Design Document", "Algorithm": [
        {"Module_Sequence": 1, "Module_Name": "a", "Module_Description": "d", "Input": "i", "Output": "o",
         "Implementation_Details": "x"}]})
    original = "x = 1\n"
    good = "# Created: t\n# Platform: p\n# Description: d\n# set x\nx = 1\n"
    assert cop.check_annotation(good, "Python", design, original) == []
    assert "missing header" in cop.check_annotation("# set x\nx = 1\n", "Python", design, original)
