"""DOT export rules."""

import pytest

from varsel.dot import InvalidHighlightError, export_dot
from varsel.dsl import parse_model
from varsel.model import Configuration
from varsel.recommend import as_configuration, heart_failure_assumptions


def test_minimal_model_single_node():
    dot = export_dot(parse_model("model m\nroot R"))
    assert dot.startswith('digraph "m" {')
    assert dot.count("->") == 0
    assert '"R" [label="R"];' in dot


def test_mandatory_and_optional_arrowheads():
    model = parse_model("model m\nroot R {\n  mandatory A\n  optional B\n}\n")
    dot = export_dot(model)
    assert '"R" -> "A" [arrowhead=dot];' in dot
    assert '"R" -> "B" [arrowhead=odot];' in dot


def test_xor_group_edges_labeled():
    model = parse_model(
        "model m\nroot R {\n  xor {\n    optional A\n    optional B\n    optional C\n  }\n}\n"
    )
    dot = export_dot(model)
    assert dot.count('label="xor"') == 3
    assert dot.count("// xor group under R") == 1


def test_highlight_fills_selected_nodes(kb):
    config = as_configuration(kb, heart_failure_assumptions(), "LinearSVC")
    dot = export_dot(kb.validation_model, config)
    assert '"LinearSVC" [label="LinearSVC", style="rounded,filled", fillcolor=lightblue];' in dot
    assert '"SGDRegressor" [label="SGDRegressor"];' in dot


def test_invalid_highlight_rejected():
    model = parse_model("model m\nroot R {\n  mandatory A\n}\n")
    with pytest.raises(InvalidHighlightError):
        export_dot(model, Configuration(frozenset({"R"})))


def test_output_deterministic(kb):
    assert export_dot(kb.model) == export_dot(kb.model)
    assert "Samplesize : int" in export_dot(kb.model)
