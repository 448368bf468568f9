"""Configuration validity, exhaustive enumeration, and propagation.

Three entry points over a well-formed :class:`~varsel.model.FeatureModel`:

* :func:`is_valid_configuration` checks one configuration directly against
  the tree relations and the cross-tree constraints, reporting each violated
  clause.
* :func:`enumerate_configurations` produces every valid configuration under
  a fixed attribute valuation by filtering all 2**n selections with
  vectorized bitmask arithmetic. It is deliberately a second, independent
  implementation of the validity rules so the two can cross-check each other.
* :func:`propagate` computes the exact sets of forced selections and
  exclusions of a partial configuration with a backtracking search, which
  also handles models too large to enumerate.

Enumeration is guarded at 24 features; the search is guarded by a node
budget. Both raise :class:`TooLargeError` when exceeded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .formula import (
    AttrCompare,
    And,
    FeatureLiteral,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    evaluate_partial,
    feature_names,
)
from .model import (
    MANDATORY,
    XOR,
    Configuration,
    FeatureModel,
    eval_formula,
)

ENUMERATION_LIMIT = 24


class TooLargeError(Exception):
    """The model is beyond the exhaustive-analysis guard."""


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    detail: str = ""

    def __str__(self):
        return f"{self.kind}({self.subject})" + (f": {self.detail}" if self.detail else "")


@dataclass(frozen=True)
class Verdict:
    valid: bool
    violations: tuple[Violation, ...] = ()

    def __bool__(self):
        return self.valid


def is_valid_configuration(model: FeatureModel, config: Configuration) -> Verdict:
    """Decide whether a configuration is a valid instance of the model.

    A configuration is valid iff the root is selected, every selected
    feature's parent is selected, mandatory non-group children of selected
    parents are selected, selected xor groups have exactly one member
    selected and or groups at least one, and every model constraint
    evaluates to true. Attribute comparisons on unvalued attributes raise
    :class:`~varsel.formula.MissingAttributeError`.
    """
    violations: list[Violation] = []
    selected = config.selected

    for name in sorted(selected - set(model.features)):
        violations.append(Violation("UnknownFeature", name, "selected feature is not in the model"))

    if model.root not in selected:
        violations.append(Violation("RootNotSelected", model.root))

    group_members = _group_membership(model)

    for name in model.features:
        feat = model.features[name]
        if name in selected and feat.parent is not None and feat.parent not in selected:
            violations.append(Violation("ParentNotSelected", name, f"parent {feat.parent!r} is unselected"))
        if name not in selected:
            continue
        for child in model.children(name):
            in_group = group_members.get(child.name) == name
            if child.variation == MANDATORY and not in_group and child.name not in selected:
                violations.append(Violation("MandatoryChildNotSelected", child.name, f"under selected {name!r}"))
        if feat.group is not None:
            count = sum(1 for m in feat.group.members if m in selected)
            if feat.group.kind == XOR and count != 1:
                violations.append(Violation("XorViolation", name, f"{count} of {len(feat.group.members)} members selected"))
            if feat.group.kind != XOR and count < 1:
                violations.append(Violation("OrViolation", name, "no group member selected"))

    for constraint in model.constraints:
        if not eval_formula(constraint.formula, config):
            violations.append(Violation("ConstraintViolated", constraint.label))

    return Verdict(not violations, tuple(violations))


def _group_membership(model: FeatureModel) -> dict[str, str]:
    """Map each grouped child to the feature owning the group."""
    out: dict[str, str] = {}
    for feat in model.features.values():
        if feat.group is not None:
            for m in feat.group.members:
                out[m] = feat.name
    return out


# ---------------------------------------------------------------------------
# Exhaustive enumeration (bitmask route)


def valid_selection_masks(model: FeatureModel, attribute_values: Mapping[str, int]) -> np.ndarray:
    """All valid selections as sorted bitmasks; bit i = i-th declared feature.

    This is the brute-force oracle: every one of the 2**n selections is
    generated and filtered clause by clause with numpy bit arithmetic,
    independently of :func:`is_valid_configuration`.
    """
    order = model.feature_order()
    n = len(order)
    if n > ENUMERATION_LIMIT:
        raise TooLargeError(f"{n} features exceeds the enumeration guard of {ENUMERATION_LIMIT}")
    index = {name: i for i, name in enumerate(order)}

    masks = np.arange(1 << n, dtype=np.uint32)

    def bit(name: str) -> np.ndarray:
        return ((masks >> np.uint32(index[name])) & np.uint32(1)).astype(bool)

    ok = bit(model.root).copy()
    group_members = _group_membership(model)

    for feat in model.features.values():
        if feat.parent is not None:
            np.logical_and(ok, ~bit(feat.name) | bit(feat.parent), out=ok)
        for child in model.children(feat.name):
            if child.variation == MANDATORY and group_members.get(child.name) != feat.name:
                np.logical_and(ok, ~bit(feat.name) | bit(child.name), out=ok)
        if feat.group is not None:
            count = np.zeros(masks.shape, dtype=np.uint8)
            for m in feat.group.members:
                count += bit(m)
            need = count == 1 if feat.group.kind == XOR else count >= 1
            np.logical_and(ok, ~bit(feat.name) | need, out=ok)

    for constraint in model.constraints:
        value = _vector_eval(constraint.formula, bit, attribute_values)
        if isinstance(value, bool):
            if not value:
                ok = np.zeros(masks.shape, dtype=bool)
        else:
            np.logical_and(ok, value, out=ok)

    return masks[ok]


def _vector_eval(formula: Formula, bit, attribute_values: Mapping[str, int]):
    """Evaluate a formula to a bool or a bool array over all masks."""
    if isinstance(formula, FeatureLiteral):
        return bit(formula.name)
    if isinstance(formula, AttrCompare):
        # Attribute values are fixed across the enumeration.
        return eval_formula(formula, Configuration(frozenset(), attribute_values))
    if isinstance(formula, Not):
        return _vnot(_vector_eval(formula.operand, bit, attribute_values))
    a = _vector_eval(formula.left, bit, attribute_values)
    b = _vector_eval(formula.right, bit, attribute_values)
    if isinstance(formula, And):
        return a & b if not (isinstance(a, bool) and isinstance(b, bool)) else (a and b)
    if isinstance(formula, Or):
        return a | b if not (isinstance(a, bool) and isinstance(b, bool)) else (a or b)
    if isinstance(formula, Implies):
        return _vor(_vnot(a), b)
    if isinstance(formula, Iff):
        return a == b  # elementwise when either side is an array
    raise TypeError(f"not a formula: {formula!r}")


def _vnot(v):
    return ~v if isinstance(v, np.ndarray) else (not v)


def _vor(a, b):
    if isinstance(a, bool) and isinstance(b, bool):
        return a or b
    return a | b


def enumerate_configurations(
    model: FeatureModel,
    attribute_values: Mapping[str, int],
    limit: Optional[int] = None,
) -> list[Configuration]:
    """Every valid configuration under a fixed attribute valuation.

    Deterministic: ascending by selection bitmask, where bit i corresponds
    to the i-th declared feature. ``limit`` truncates the result.
    """
    order = model.feature_order()
    masks = valid_selection_masks(model, attribute_values)
    if limit is not None:
        masks = masks[:limit]
    attrs = dict(attribute_values)
    out = []
    for mask in masks.tolist():
        selected = frozenset(order[i] for i in range(len(order)) if mask >> i & 1)
        out.append(Configuration(selected, attrs))
    return out


# ---------------------------------------------------------------------------
# Propagation (search route)


@dataclass(frozen=True)
class PartialConfiguration:
    """A three-state assignment: selected, excluded, or unknown features."""

    selected: frozenset[str] = frozenset()
    excluded: frozenset[str] = frozenset()
    attribute_values: Mapping[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class PropagationResult:
    conflict: bool
    forced_selected: frozenset[str] = frozenset()
    forced_excluded: frozenset[str] = frozenset()


def propagate(
    model: FeatureModel,
    partial: PartialConfiguration,
    node_budget: int = 2_000_000,
) -> PropagationResult:
    """Exact propagation of a partial configuration.

    Returns a conflict when the partial has no valid completion; otherwise
    the sets of features selected (resp. unselected) in *every* valid
    completion. Implemented as a backtracking search over the tree with
    three-valued constraint pruning, so it copes with models beyond the
    enumeration guard; ``node_budget`` bounds the total search effort and
    overrunning it raises :class:`TooLargeError`.
    """
    overlap = partial.selected & partial.excluded
    if overlap:
        raise ValueError(f"features both selected and excluded: {sorted(overlap)}")
    solver = _Solver(model, partial.attribute_values, node_budget)

    seed = {name: True for name in partial.selected}
    seed.update({name: False for name in partial.excluded})

    witness = solver.find_completion(seed)
    if witness is None:
        return PropagationResult(conflict=True)

    # Every completion found along the way also answers later probes: a
    # feature seen both selected and unselected is certainly not forced.
    witnesses = [witness]

    def exists_with(name: str, value: bool) -> bool:
        for seen in witnesses:
            if (name in seen) == value:
                return True
        found = solver.find_completion({**seed, name: value})
        if found is not None:
            witnesses.append(found)
            return True
        return False

    forced_sel: set[str] = set()
    forced_exc: set[str] = set()
    for name in model.features:
        if name in witness:
            if name in partial.selected or not exists_with(name, False):
                forced_sel.add(name)
        else:
            if name in partial.excluded or not exists_with(name, True):
                forced_exc.add(name)
    return PropagationResult(False, frozenset(forced_sel), frozenset(forced_exc))


class _Solver:
    """Backtracking completion search shared by the propagation probes."""

    def __init__(self, model: FeatureModel, attribute_values: Mapping[str, int], node_budget: int):
        self.model = model
        self.attribute_values = attribute_values
        self.budget = node_budget
        self.order = self._topological_order()
        self.position = {name: i for i, name in enumerate(self.order)}
        self.group_members = _group_membership(model)
        # For group checks: the group owner plus the search position of its
        # last member, at which point the cardinality becomes final.
        self.group_checks = []
        for feat in model.features.values():
            if feat.group is not None:
                last = max(self.position[m] for m in feat.group.members)
                self.group_checks.append((feat, last))
        # Only re-evaluate the constraints that mention the feature that was
        # just assigned; the rest cannot have changed truth value.
        self.relevant: dict[str, list] = {name: [] for name in model.features}
        for constraint in model.constraints:
            for name in set(feature_names(constraint.formula)):
                if name in self.relevant:
                    self.relevant[name].append(constraint)

    def _topological_order(self) -> list[str]:
        order = []
        seen = set()
        stack = [self.model.root]
        children = {name: [c.name for c in self.model.children(name)] for name in self.model.features}
        while stack:
            name = stack.pop()
            if name in seen:
                continue
            seen.add(name)
            order.append(name)
            stack.extend(reversed(children[name]))
        # Well-formedness guarantees this covers everything reachable; any
        # leftover (unreachable) features would have failed validation.
        for name in self.model.features:
            if name not in seen:
                order.append(name)
        return order

    def find_completion(self, seed: dict[str, bool]) -> Optional[frozenset[str]]:
        """The first valid completion of ``seed``, or None."""
        assignment: dict[str, Optional[bool]] = {name: None for name in self.model.features}
        for name, value in seed.items():
            if name in assignment:
                assignment[name] = value
        self.assignment = assignment
        self.fixed = {name for name in seed if name in assignment}
        if self._search(0):
            return frozenset(n for n, v in self.assignment.items() if v)
        return None

    def _search(self, i: int) -> bool:
        self.budget -= 1
        if self.budget <= 0:
            raise TooLargeError("propagation search exceeded its node budget")
        if i == len(self.order):
            return self._all_constraints_true()
        name = self.order[i]
        feat = self.model.features[name]
        fixed = self.assignment[name] if name in self.fixed else None

        candidates = self._candidate_values(feat, fixed)
        for value in candidates:
            self.assignment[name] = value
            if self._locally_consistent(i, name, feat, value) and self._search(i + 1):
                return True
        self.assignment[name] = None if name not in self.fixed else fixed
        return False

    def _candidate_values(self, feat, fixed):
        if feat.parent is None:
            required: Optional[bool] = True  # clause (a): the root is selected
        else:
            parent_value = self.assignment.get(feat.parent)
            if parent_value is False:
                required = False
            elif (
                parent_value is True
                and feat.variation == MANDATORY
                and self.group_members.get(feat.name) != feat.parent
            ):
                required = True
            else:
                required = None
        if required is not None:
            return (required,) if fixed in (None, required) else ()
        if fixed is not None:
            return (fixed,)
        return (True, False)

    def _locally_consistent(self, i: int, name: str, feat, value: bool) -> bool:
        # Early xor overflow cut: a second selected member can never recover.
        owner = self.group_members.get(name)
        if value and owner is not None:
            group = self.model.features[owner].group
            if group.kind == XOR and self.assignment.get(owner) is not False:
                count = sum(1 for m in group.members if self.assignment.get(m))
                if count > 1:
                    return False
        for group_feat, last in self.group_checks:
            if last == i and self.assignment.get(group_feat.name):
                group = group_feat.group
                count = sum(1 for m in group.members if self.assignment.get(m))
                if group.kind == XOR and count != 1:
                    return False
                if group.kind != XOR and count < 1:
                    return False
        for constraint in self.relevant.get(name, ()):
            if evaluate_partial(constraint.formula, self.assignment, self.attribute_values) is False:
                return False
        return True

    def _all_constraints_true(self) -> bool:
        for constraint in self.model.constraints:
            if evaluate_partial(constraint.formula, self.assignment, self.attribute_values) is not True:
                return False
        return True
