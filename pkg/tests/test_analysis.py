"""Validity, enumeration, and propagation, cross-checked three ways.

The package carries two independent implementations of the validity rules
(the scalar checker and the vectorized enumerator); tests here add a third,
deliberately naive transcription and require all of them to agree on
randomly generated models.
"""

import random

import pytest

from genmodels import all_selections, naive_valid, random_model, random_valuation
from varsel.analysis import (
    PartialConfiguration,
    TooLargeError,
    enumerate_configurations,
    is_valid_configuration,
    propagate,
    valid_selection_masks,
)
from varsel.formula import MissingAttributeError, AttrCompare
from varsel.model import (
    Configuration,
    Feature,
    FeatureModel,
    Group,
    NamedConstraint,
)


def car_model():
    # Root with a mandatory body, an optional camera, and an engine choice.
    return FeatureModel(
        "car",
        "Car",
        {
            "Car": Feature("Car", None, "mandatory", Group("xor", ("Electric", "Petrol"))),
            "Body": Feature("Body", "Car", "mandatory"),
            "Camera": Feature("Camera", "Car", "optional"),
            "Electric": Feature("Electric", "Car"),
            "Petrol": Feature("Petrol", "Car"),
        },
    )


def test_car_style_configuration_valid():
    config = Configuration(frozenset({"Car", "Body", "Electric"}))
    assert is_valid_configuration(car_model(), config).valid


def test_xor_with_two_selections_invalid():
    config = Configuration(frozenset({"Car", "Body", "Electric", "Petrol"}))
    verdict = is_valid_configuration(car_model(), config)
    assert not verdict.valid
    assert any(v.kind == "XorViolation" for v in verdict.violations)


def test_missing_mandatory_child_invalid():
    config = Configuration(frozenset({"Car", "Electric"}))
    verdict = is_valid_configuration(car_model(), config)
    assert any(v.kind == "MandatoryChildNotSelected" for v in verdict.violations)


def test_unselected_root_invalid():
    verdict = is_valid_configuration(car_model(), Configuration(frozenset({"Body"})))
    assert any(v.kind == "RootNotSelected" for v in verdict.violations)
    assert any(v.kind == "ParentNotSelected" for v in verdict.violations)


def test_unknown_selected_feature_reported():
    verdict = is_valid_configuration(car_model(), Configuration(frozenset({"Car", "Body", "Electric", "Warp"})))
    assert any(v.kind == "UnknownFeature" and v.subject == "Warp" for v in verdict.violations)


def test_violated_constraint_lists_label():
    model = FeatureModel(
        "m",
        "R",
        {"R": Feature("R"), "A": Feature("A", "R")},
        constraints=(NamedConstraint("K9", AttrCompare("X", ">", 5)),),
        attributes=(),
    )
    # Constraint references an undeclared attribute: well-formedness would
    # flag it, but evaluation must raise, not silently pass.
    with pytest.raises(MissingAttributeError):
        is_valid_configuration(model, Configuration(frozenset({"R"})))


def count_models():
    base = {"R": Feature("R")}
    opt = dict(base, A=Feature("A", "R", "optional"))
    return FeatureModel("opt", "R", opt)


def test_enumeration_counts():
    assert len(enumerate_configurations(count_models(), {})) == 2

    xor3 = FeatureModel(
        "x",
        "R",
        {
            "R": Feature("R", None, "mandatory", Group("xor", ("A", "B", "C"))),
            "A": Feature("A", "R"),
            "B": Feature("B", "R"),
            "C": Feature("C", "R"),
        },
    )
    assert len(enumerate_configurations(xor3, {})) == 3

    or3 = FeatureModel(
        "o",
        "R",
        {
            "R": Feature("R", None, "mandatory", Group("or", ("A", "B", "C"))),
            "A": Feature("A", "R"),
            "B": Feature("B", "R"),
            "C": Feature("C", "R"),
        },
    )
    assert len(enumerate_configurations(or3, {})) == 7


def test_enumeration_is_deterministic_and_ordered():
    model = car_model()
    first = enumerate_configurations(model, {})
    second = enumerate_configurations(model, {})
    assert first == second
    masks = valid_selection_masks(model, {})
    assert list(masks) == sorted(masks)


def test_enumeration_limit():
    model = count_models()
    assert len(enumerate_configurations(model, {}, limit=1)) == 1


def test_enumeration_guard():
    feats = {"R": Feature("R")}
    for i in range(25):
        feats[f"F{i}"] = Feature(f"F{i}", "R", "optional")
    with pytest.raises(TooLargeError):
        enumerate_configurations(FeatureModel("big", "R", feats), {})


def test_propagate_mandatory_child_forced():
    model = FeatureModel("m", "R", {"R": Feature("R"), "A": Feature("A", "R", "mandatory")})
    result = propagate(model, PartialConfiguration(selected=frozenset({"R"})))
    assert not result.conflict
    assert "A" in result.forced_selected


def test_propagate_conflict():
    model = FeatureModel("m", "R", {"R": Feature("R"), "A": Feature("A", "R", "mandatory")})
    result = propagate(model, PartialConfiguration(excluded=frozenset({"A"})))
    assert result.conflict


def test_propagate_rejects_contradictory_partial():
    model = count_models()
    with pytest.raises(ValueError):
        propagate(model, PartialConfiguration(frozenset({"A"}), frozenset({"A"})))


# ---------------------------------------------------------------------------
# Oracle agreement properties


def _assert_model_agrees(model, attrs, rng):
    order = model.feature_order()
    naive_masks = []
    for mask, selected in all_selections(model):
        expected = naive_valid(model, selected, attrs)
        verdict = is_valid_configuration(model, Configuration(selected, attrs))
        assert verdict.valid == expected, f"scalar checker disagrees on mask {mask:#x}"
        if expected:
            naive_masks.append(mask)
    assert list(valid_selection_masks(model, attrs)) == naive_masks

    # Propagation against the enumeration, from a random partial.
    fixed = {name: rng.choice((True, False, None)) for name in order}
    partial = PartialConfiguration(
        frozenset(n for n, v in fixed.items() if v is True),
        frozenset(n for n, v in fixed.items() if v is False),
        attrs,
    )
    completions = [
        set(sel)
        for mask, sel in all_selections(model)
        if mask in set(naive_masks)
        and partial.selected <= sel
        and not (partial.excluded & sel)
    ]
    result = propagate(model, partial)
    if not completions:
        assert result.conflict
    else:
        assert not result.conflict
        expected_sel = frozenset.intersection(*[frozenset(c) for c in completions])
        expected_exc = frozenset(order) - frozenset.union(*[frozenset(c) for c in completions])
        assert result.forced_selected == expected_sel
        assert result.forced_excluded == expected_exc


def test_random_models_three_way_agreement():
    rng = random.Random(20240)
    for i in range(200):
        model = random_model(rng, max_features=10)
        attrs = random_valuation(rng, model)
        _assert_model_agrees(model, attrs, rng)


def test_larger_random_models_agreement():
    rng = random.Random(999)
    for _ in range(8):
        model = random_model(rng, max_features=16, min_features=13)
        attrs = random_valuation(rng, model)
        masks = set(valid_selection_masks(model, attrs).tolist())
        order = model.feature_order()
        # Spot-check the scalar route on every valid mask and on a sample of
        # invalid ones.
        for mask in sorted(masks)[:500]:
            selected = frozenset(order[i] for i in range(len(order)) if mask >> i & 1)
            assert is_valid_configuration(model, Configuration(selected, attrs)).valid
        for _ in range(300):
            mask = rng.randrange(1 << len(order))
            selected = frozenset(order[i] for i in range(len(order)) if mask >> i & 1)
            assert is_valid_configuration(model, Configuration(selected, attrs)).valid == (mask in masks)


def test_validity_ignores_attribute_values_without_comparisons():
    rng = random.Random(5)
    for _ in range(40):
        model = random_model(rng, max_features=8)
        no_attr_constraints = tuple(
            c for c in model.constraints if not list(_attr_names(c.formula))
        )
        model = model.with_constraints(no_attr_constraints)
        for mask, selected in all_selections(model):
            a = is_valid_configuration(model, Configuration(selected, {"A0": 0, "A1": 0})).valid
            b = is_valid_configuration(model, Configuration(selected, {"A0": 60, "A1": 60})).valid
            assert a == b


def _attr_names(formula):
    from varsel.formula import attribute_names

    return attribute_names(formula)
