"""Reaction to assumption changes: re-run selection and diff the outcome.

Adaptation here is recomputation plus comparison, not incremental
maintenance: the knowledge base is small, and determinism matters more than
speed. A delta carries old and new values for each changed field so a stale
snapshot of the assumptions is rejected instead of silently overwritten.

The report pairs the old and new chains with two views of what changed:
which knowledge-base rules flipped truth value between the two head
configurations, and which technique-side features (the category and the
recommended techniques) were selected or dropped. The feature diff is
deliberately restricted to the technique side so that it is empty exactly
when the recommendation itself is unchanged, however the assumption inputs
moved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .knowledge import KnowledgeBase
from .model import Configuration, eval_formula
from .recommend import (
    ModelingAssumptions,
    NoRecommendation,
    Recommendation,
    as_configuration,
    recommend,
)


class StaleDeltaError(Exception):
    """A delta's old values do not match the assumptions being changed."""


@dataclass(frozen=True)
class FieldChange:
    name: str
    old: object
    new: object


@dataclass(frozen=True)
class AssumptionDelta:
    """Old-to-new changes for a subset of the assumption fields."""

    changes: tuple[FieldChange, ...]

    def __post_init__(self):
        if not self.changes:
            raise ValueError("a delta must change at least one field")
        valid = set(ModelingAssumptions.field_names())
        seen = set()
        for change in self.changes:
            if change.name not in valid:
                raise ValueError(f"unknown assumption field {change.name!r}")
            if change.name in seen:
                raise ValueError(f"field {change.name!r} changed twice")
            seen.add(change.name)

    def as_dict(self) -> dict:
        return {c.name: {"old": c.old, "new": c.new} for c in self.changes}

    @staticmethod
    def from_dict(data: dict) -> "AssumptionDelta":
        changes = tuple(FieldChange(name, entry["old"], entry["new"]) for name, entry in data.items())
        return AssumptionDelta(changes)


def apply_delta(assumptions: ModelingAssumptions, delta: AssumptionDelta) -> ModelingAssumptions:
    """Apply a delta, checking its old values against the current assumptions.

    Raises:
        StaleDeltaError: an old value in the delta disagrees with the
            assumptions; the caller is holding an outdated snapshot.
        ValueError: the new values violate the assumption invariants.
    """
    current = assumptions.as_dict()
    for change in delta.changes:
        if current[change.name] != change.old:
            raise StaleDeltaError(
                f"delta expects {change.name}={change.old!r} but assumptions have "
                f"{current[change.name]!r}"
            )
    return assumptions.replace(**{c.name: c.new for c in delta.changes})


@dataclass(frozen=True)
class FeatureDiff:
    selected: tuple[str, ...]
    deselected: tuple[str, ...]

    @property
    def empty(self) -> bool:
        return not self.selected and not self.deselected

    def as_dict(self) -> dict:
        return {"selected": list(self.selected), "deselected": list(self.deselected)}


@dataclass(frozen=True)
class AdaptationReport:
    old_chain: Recommendation
    new_chain: Recommendation
    changed_constraints: tuple[str, ...]
    feature_diff: FeatureDiff

    def as_dict(self) -> dict:
        return {
            "old_chain": self.old_chain.as_dict(),
            "new_chain": self.new_chain.as_dict(),
            "changed_constraints": list(self.changed_constraints),
            "feature_diff": self.feature_diff.as_dict(),
        }


def reselect(kb: KnowledgeBase, assumptions: ModelingAssumptions, delta: AssumptionDelta) -> AdaptationReport:
    """Recompute the recommendation after a delta and report the differences.

    ``changed_constraints`` lists the knowledge-base rules whose truth value
    differs between the head-technique configurations before and after;
    it is empty when either side has no chain to instantiate.
    """
    updated = apply_delta(assumptions, delta)
    old_chain = recommend(kb, assumptions)
    new_chain = recommend(kb, updated)

    old_config = _head_configuration(kb, assumptions, old_chain)
    new_config = _head_configuration(kb, updated, new_chain)

    changed: tuple[str, ...] = ()
    if old_config is not None and new_config is not None:
        flipped = []
        for constraint in kb.model.constraints:
            before = eval_formula(constraint.formula, old_config)
            after = eval_formula(constraint.formula, new_config)
            if before != after:
                flipped.append(constraint.label)
        changed = tuple(sorted(flipped))

    diff = _technique_diff(kb, old_chain, new_chain)
    return AdaptationReport(old_chain, new_chain, changed, diff)


def _head_configuration(
    kb: KnowledgeBase, assumptions: ModelingAssumptions, chain: Recommendation
) -> Optional[Configuration]:
    if isinstance(chain, NoRecommendation):
        return None
    return as_configuration(kb, assumptions, chain.steps[0][0])


def _technique_selection(chain: Recommendation) -> frozenset[str]:
    if isinstance(chain, NoRecommendation):
        return frozenset()
    return frozenset((chain.category, *chain.techniques()))


def _technique_diff(kb: KnowledgeBase, old: Recommendation, new: Recommendation) -> FeatureDiff:
    before = _technique_selection(old)
    after = _technique_selection(new)
    order = kb.model.feature_order()
    selected = tuple(n for n in order if n in after - before)
    deselected = tuple(n for n in order if n in before - after)
    return FeatureDiff(selected, deselected)
