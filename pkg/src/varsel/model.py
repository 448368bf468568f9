"""Feature models: trees of features with groups, attributes, and constraints.

A feature model is a named tree. Every feature except the root has exactly
one parent. A feature may own one group (xor or or) over a subset of its
children; group members are individually optional regardless of their
declared variation flag, which is kept only so that parsing and printing
round-trip faithfully. Cross-tree constraints are named propositional
formulas over feature literals and integer attribute comparisons.

Values here are immutable after construction and safe to share across
threads. Construction is deliberately permissive: :func:`validate_model`
reports structural problems as data instead of raising, so diagnostics can
be accumulated and shown together.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .formula import (
    Formula,
    attribute_names,
    evaluate,
    feature_names,
)

MANDATORY = "mandatory"
OPTIONAL = "optional"
XOR = "xor"
OR = "or"

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Group:
    """A group over some of a feature's children: exactly-one or at-least-one."""

    kind: str  # XOR or OR
    members: tuple[str, ...]


@dataclass(frozen=True)
class Feature:
    name: str
    parent: Optional[str] = None
    variation: str = OPTIONAL  # MANDATORY or OPTIONAL
    group: Optional[Group] = None


@dataclass(frozen=True)
class AttributeDecl:
    """An integer-valued model attribute, e.g. a sample size."""

    name: str


@dataclass(frozen=True)
class NamedConstraint:
    label: str
    formula: Formula


@dataclass(frozen=True)
class FeatureModel:
    name: str
    root: str
    features: Mapping[str, Feature]  # insertion order = declaration order
    attributes: tuple[AttributeDecl, ...] = ()
    constraints: tuple[NamedConstraint, ...] = ()

    def children(self, name: str) -> list[Feature]:
        return [f for f in self.features.values() if f.parent == name]

    def feature_order(self) -> list[str]:
        """Feature names in declaration order."""
        return list(self.features)

    def attribute_set(self) -> frozenset[str]:
        return frozenset(a.name for a in self.attributes)

    def constraint(self, label: str) -> NamedConstraint:
        for c in self.constraints:
            if c.label == label:
                return c
        raise KeyError(label)

    def with_constraints(self, constraints: tuple[NamedConstraint, ...]) -> "FeatureModel":
        return FeatureModel(self.name, self.root, self.features, self.attributes, constraints)


@dataclass(frozen=True)
class Configuration:
    """A selection of features plus attribute values.

    A feature not in ``selected`` is unselected; an attribute missing from
    ``attribute_values`` is explicitly unvalued, and evaluating a comparison
    on it is an error rather than false.
    """

    selected: frozenset[str]
    attribute_values: Mapping[str, int] = field(default_factory=dict)

    def select(self, *names: str) -> "Configuration":
        return Configuration(self.selected | set(names), self.attribute_values)


def eval_formula(formula: Formula, config: Configuration) -> bool:
    """Two-valued evaluation of a constraint formula under a configuration.

    Raises :class:`varsel.formula.MissingAttributeError` when the formula
    compares an attribute the configuration leaves unvalued.
    """
    return evaluate(formula, config.selected, config.attribute_values)


@dataclass(frozen=True)
class ModelViolation:
    kind: str
    subject: str
    detail: str

    def __str__(self):
        return f"{self.kind}({self.subject}): {self.detail}"


@dataclass(frozen=True)
class WellFormednessReport:
    violations: tuple[ModelViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __iter__(self):
        return iter(self.violations)


def validate_model(model: FeatureModel) -> WellFormednessReport:
    """Check the structural invariants of a feature model.

    Detects: missing/multiple roots, dangling parents, parent cycles,
    invalid or duplicate names, attribute/feature name clashes, group
    members that are not children of the owning feature, undersized groups,
    children claimed by more than one group, and constraint symbols that
    resolve to neither a feature nor an attribute.
    """
    out: list[ModelViolation] = []
    names = set(model.features)

    for key, feat in model.features.items():
        if key != feat.name:
            out.append(ModelViolation("DuplicateName", key, f"feature keyed {key!r} is named {feat.name!r}"))
        if not _IDENT_RE.match(feat.name):
            out.append(ModelViolation("InvalidName", feat.name, "not a valid identifier"))

    roots = [f.name for f in model.features.values() if f.parent is None]
    if model.root not in names:
        out.append(ModelViolation("MissingRoot", model.root, "declared root is not a feature"))
    elif model.features[model.root].parent is not None:
        out.append(ModelViolation("MissingRoot", model.root, "declared root has a parent"))
    for extra in roots:
        if extra != model.root:
            out.append(ModelViolation("MultipleRoots", extra, "feature has no parent but is not the root"))

    for feat in model.features.values():
        if feat.parent is not None and feat.parent not in names:
            out.append(ModelViolation("DanglingParent", feat.name, f"parent {feat.parent!r} does not exist"))

    out.extend(_find_cycles(model))

    attr_names = [a.name for a in model.attributes]
    seen_attrs: set[str] = set()
    for a in attr_names:
        if a in seen_attrs:
            out.append(ModelViolation("DuplicateName", a, "attribute declared twice"))
        seen_attrs.add(a)
        if a in names:
            out.append(ModelViolation("AttributeNameClash", a, "attribute name collides with a feature"))
        if not _IDENT_RE.match(a):
            out.append(ModelViolation("InvalidName", a, "not a valid identifier"))

    for feat in model.features.values():
        group = feat.group
        if group is None:
            continue
        if group.kind not in (XOR, OR):
            out.append(ModelViolation("InvalidName", feat.name, f"unknown group kind {group.kind!r}"))
        if len(group.members) < 2:
            out.append(ModelViolation("UndersizedGroup", feat.name, f"{group.kind} group needs at least 2 children, has {len(group.members)}"))
        seen_members: set[str] = set()
        for m in group.members:
            if m in seen_members:
                out.append(ModelViolation("DuplicateName", m, f"listed twice in the group of {feat.name!r}"))
            seen_members.add(m)
            child = model.features.get(m)
            if child is None or child.parent != feat.name:
                out.append(ModelViolation("GroupMemberNotChild", m, f"not a child of {feat.name!r}"))

    known = names | set(attr_names)
    for c in model.constraints:
        for sym in feature_names(c.formula):
            if sym not in names:
                kind = "UnknownSymbol"
                detail = f"constraint {c.label}: no feature named {sym!r}"
                if sym in attr_names:
                    detail = f"constraint {c.label}: {sym!r} is an attribute, used as a feature"
                out.append(ModelViolation(kind, sym, detail))
        for sym in attribute_names(c.formula):
            if sym not in known or sym in names:
                out.append(ModelViolation("UnknownSymbol", sym, f"constraint {c.label}: no attribute named {sym!r}"))

    return WellFormednessReport(tuple(out))


def _find_cycles(model: FeatureModel) -> list[ModelViolation]:
    out = []
    state: dict[str, int] = {}  # 1 = in progress, 2 = done
    for start in model.features:
        if state.get(start):
            continue
        path = []
        node: Optional[str] = start
        while node is not None and node in model.features and state.get(node) is None:
            state[node] = 1
            path.append(node)
            node = model.features[node].parent
        if node is not None and state.get(node) == 1:
            out.append(ModelViolation("Cycle", node, "feature is its own ancestor"))
        for n in path:
            state[n] = 2
    return out
