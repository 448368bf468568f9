"""Well-formedness checking of feature models."""

from varsel.formula import AttrCompare, FeatureLiteral
from varsel.model import (
    AttributeDecl,
    Feature,
    FeatureModel,
    Group,
    NamedConstraint,
    validate_model,
)


def kinds(report):
    return {v.kind for v in report}


def test_minimal_model_is_well_formed():
    model = FeatureModel("m", "R", {"R": Feature("R")})
    assert validate_model(model).ok


def test_constraint_referencing_missing_feature():
    model = FeatureModel(
        "m",
        "R",
        {"R": Feature("R")},
        constraints=(NamedConstraint("K1", FeatureLiteral("Foo")),),
    )
    report = validate_model(model)
    assert not report.ok
    [violation] = list(report)
    assert violation.kind == "UnknownSymbol"
    assert violation.subject == "Foo"


def test_undersized_group():
    model = FeatureModel(
        "m",
        "R",
        {
            "R": Feature("R", None, "mandatory", Group("xor", ("A",))),
            "A": Feature("A", "R"),
        },
    )
    assert "UndersizedGroup" in kinds(validate_model(model))


def test_parent_cycle():
    model = FeatureModel(
        "m",
        "R",
        {
            "R": Feature("R"),
            "A": Feature("A", "B"),
            "B": Feature("B", "A"),
        },
    )
    assert "Cycle" in kinds(validate_model(model))


def test_dangling_parent():
    model = FeatureModel("m", "R", {"R": Feature("R"), "A": Feature("A", "Ghost")})
    assert "DanglingParent" in kinds(validate_model(model))


def test_second_parentless_feature():
    model = FeatureModel("m", "R", {"R": Feature("R"), "S": Feature("S")})
    assert "MultipleRoots" in kinds(validate_model(model))


def test_attribute_name_collides_with_feature():
    model = FeatureModel("m", "R", {"R": Feature("R")}, attributes=(AttributeDecl("R"),))
    assert "AttributeNameClash" in kinds(validate_model(model))


def test_group_member_not_a_child():
    model = FeatureModel(
        "m",
        "R",
        {
            "R": Feature("R", None, "mandatory", Group("or", ("A", "B"))),
            "A": Feature("A", "R"),
            "B": Feature("B", "A"),  # grandchild, not child
        },
    )
    assert "GroupMemberNotChild" in kinds(validate_model(model))


def test_unknown_attribute_in_comparison():
    model = FeatureModel(
        "m",
        "R",
        {"R": Feature("R")},
        constraints=(NamedConstraint("K1", AttrCompare("Nope", "<", 3)),),
    )
    report = validate_model(model)
    assert "UnknownSymbol" in kinds(report)


def test_feature_used_as_attribute_is_reported():
    model = FeatureModel(
        "m",
        "R",
        {"R": Feature("R")},
        constraints=(NamedConstraint("K1", AttrCompare("R", ">", 1)),),
    )
    assert "UnknownSymbol" in kinds(validate_model(model))
