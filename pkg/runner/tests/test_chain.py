"""Chain walking semantics and transcripts."""

import json

import pytest

from conftest import SYNTHETIC
from skrunner.chain import load_chain, parse_criterion, run_chain


def test_load_chain(chain_file):
    steps = load_chain(chain_file)
    assert steps == [["LinearSVC"], ["KNeighborsClassifier"], ["SVC", "EnsembleClassifiers"]]


def test_parse_criterion():
    criterion = parse_criterion("f1:0.77")
    assert criterion.metric == "f1"
    assert criterion.threshold == 0.77
    with pytest.raises(ValueError):
        parse_criterion("f1")
    with pytest.raises(ValueError):
        parse_criterion("auc:0.9")


def test_trivial_criterion_accepts_immediately(chain_file, tmp_path):
    transcript = run_chain(SYNTHETIC, chain_file, parse_criterion("f1:0.0"), tmp_path / "out", seed=0)
    assert transcript["final"]["status"] == "accepted"
    assert transcript["final"]["technique"] == "LinearSVC"
    assert len(transcript["decisions"]) == 1


def test_unreachable_criterion_exhausts_chain(chain_file, tmp_path):
    out = tmp_path / "out"
    transcript = run_chain(SYNTHETIC, chain_file, parse_criterion("f1:0.99"), out, seed=8)
    statuses = [d["status"] for d in transcript["decisions"]]
    assert statuses == ["not_working", "not_working", "not_working", "exhausted"]
    # The disjunctive step is consumed alternative by alternative: after SVC
    # fails, only the untried forest remains.
    assert transcript["decisions"][2]["candidates"] == ["EnsembleClassifiers"]
    # One report per trained technique, all in the engine's format.
    assert len(transcript["reports"]) == 4
    for path in transcript["reports"]:
        data = json.loads(open(path, encoding="utf-8").read())
        assert tuple(data) == ("technique", "f1", "mcc", "bacc", "sensitivity", "specificity", "provenance")
    saved = json.loads((out / "decisions.json").read_text(encoding="utf-8"))
    assert saved["decisions"] == transcript["decisions"]


def test_reference_seed_accepts_at_step_zero(chain_file, tmp_path):
    transcript = run_chain(SYNTHETIC, chain_file, parse_criterion("f1:0.77"), tmp_path / "out", seed=8)
    assert transcript["final"]["status"] == "accepted"
    assert transcript["final"]["technique"] == "LinearSVC"
    assert [d["status"] for d in transcript["decisions"]] == ["accepted"]


def test_mid_step_acceptance_leaves_alternatives_untried(chain_file, tmp_path):
    # Seed 3, threshold 0.685: LinearSVC (0.684) and KNeighbors (0.581)
    # fail, SVC (0.686) passes, so the forest is never trained.
    transcript = run_chain(SYNTHETIC, chain_file, parse_criterion("f1:0.685"), tmp_path / "out", seed=3)
    statuses = [d["status"] for d in transcript["decisions"]]
    assert statuses == ["not_working", "not_working", "accepted"]
    assert transcript["final"]["technique"] == "SVC"
    assert not any("EnsembleClassifiers" in path for path in transcript["reports"])
