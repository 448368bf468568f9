"""Mapping modeling assumptions to an ordered technique recommendation.

Given declared facts about the problem (sample size, prediction type,
labeled/text flags, feature count), the recommender classifies the problem
into one technique category, builds the ordered fallback chain for it by
walking the knowledge base's entry rules and fallback edges, and records a
justification trace: every selection rule relevant to the decision together
with its truth value under the instantiated configuration.

Each step of a chain is a set of equally ranked alternatives; order within
a step follows the knowledge base. Dead ends (too little data, predicting a
structure, unknown categories on a large sample) come back as
:class:`NoRecommendation` values rather than exceptions, since they are
answers, not failures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .analysis import is_valid_configuration
from .formula import FeatureLiteral, Formula, Implies, Or, evaluate, formula_text
from .knowledge import (
    ASSUMPTIONS_ROOT,
    CATEGORY_FAMILY,
    CLASSIFICATION,
    CLUSTERING,
    DIMENSIONALITY_REDUCTION,
    REGRESSION,
    KnowledgeBase,
)
from .model import MANDATORY, Configuration, eval_formula

CATEGORY = "category"
QUANTITY = "quantity"
STRUCTURE = "structure"
NONE = "none"
PREDICTIONS = (CATEGORY, QUANTITY, STRUCTURE, NONE)

MORE_DATA_NEEDED = "MoreDataNeeded"
TOUGH_LUCK = "ToughLuck"
INDETERMINATE = "IndeterminateAssumptions"

_PREDICTION_FEATURE = {CATEGORY: "Category", QUANTITY: "Quantity", STRUCTURE: "Structure"}

_MIN_SAMPLES = 50  # the "more than 50 samples" gate shared by C2.1-C2.4


class NotRecommendedError(Exception):
    """A technique outside the recommendation chain was instantiated."""


class InstantiationError(Exception):
    """No valid configuration exists for the requested selection."""


@dataclass(frozen=True)
class ModelingAssumptions:
    """Declared facts driving selection.

    ``known_categories`` is a three-state flag: it only means something for
    unlabeled category prediction (clustering), and leaving it unset there
    yields an indeterminate recommendation instead of a guess.
    """

    sample_size: int
    num_features: int
    prediction: str
    labeled: bool = False
    text_data: bool = False
    known_categories: Optional[bool] = None
    few_features: bool = False

    def __post_init__(self):
        if self.sample_size < 0:
            raise ValueError("sample_size must be >= 0")
        if self.num_features < 0:
            raise ValueError("num_features must be >= 0")
        if self.prediction not in PREDICTIONS:
            raise ValueError(f"prediction must be one of {PREDICTIONS}, got {self.prediction!r}")

    def replace(self, **changes) -> "ModelingAssumptions":
        values = dict(self.as_dict())
        values.update(changes)
        return ModelingAssumptions(**values)

    def as_dict(self) -> dict:
        return {
            "sample_size": self.sample_size,
            "num_features": self.num_features,
            "prediction": self.prediction,
            "labeled": self.labeled,
            "text_data": self.text_data,
            "known_categories": self.known_categories,
            "few_features": self.few_features,
        }

    @staticmethod
    def from_dict(data: dict) -> "ModelingAssumptions":
        return ModelingAssumptions(**{k: data[k] for k in ModelingAssumptions.field_names() if k in data})

    @staticmethod
    def field_names() -> tuple[str, ...]:
        return (
            "sample_size",
            "num_features",
            "prediction",
            "labeled",
            "text_data",
            "known_categories",
            "few_features",
        )


def heart_failure_assumptions() -> ModelingAssumptions:
    """The heart-failure survival study: 299 labeled, non-text rows with 13 features."""
    return ModelingAssumptions(
        sample_size=299,
        num_features=13,
        prediction=CATEGORY,
        labeled=True,
        text_data=False,
        known_categories=None,
        few_features=True,
    )


@dataclass(frozen=True)
class NoRecommendation:
    reason: str  # MORE_DATA_NEEDED, TOUGH_LUCK, or INDETERMINATE
    detail: str

    def __post_init__(self):
        if not self.detail:
            raise ValueError("detail must not be empty")

    def as_dict(self) -> dict:
        return {"reason": self.reason, "detail": self.detail}


@dataclass(frozen=True)
class TraceEntry:
    label: str
    formula: str
    value: bool


@dataclass(frozen=True)
class RecommendationChain:
    category: str
    steps: tuple[tuple[str, ...], ...]
    trace: tuple[TraceEntry, ...] = ()

    def techniques(self) -> tuple[str, ...]:
        return tuple(t for step in self.steps for t in step)

    def as_dict(self) -> dict:
        return {
            "category": self.category,
            "steps": [list(step) for step in self.steps],
            "trace": [{"label": e.label, "formula": e.formula, "value": e.value} for e in self.trace],
        }

    @staticmethod
    def from_dict(data: dict) -> "RecommendationChain":
        steps = tuple(tuple(step) for step in data["steps"])
        trace = tuple(
            TraceEntry(e["label"], e["formula"], bool(e["value"])) for e in data.get("trace", ())
        )
        return RecommendationChain(data["category"], steps, trace)


Recommendation = Union[RecommendationChain, NoRecommendation]


def classify_problem(kb: KnowledgeBase, assumptions: ModelingAssumptions) -> Union[str, NoRecommendation]:
    """Apply the C2 family: pick the technique category or explain why none fits."""
    a = assumptions
    if a.sample_size <= _MIN_SAMPLES:
        return NoRecommendation(
            MORE_DATA_NEEDED,
            f"sample size {a.sample_size} does not clear the more-than-{_MIN_SAMPLES}-samples "
            "gate shared by C2.1-C2.4; get more data",
        )
    if a.prediction == QUANTITY:
        return REGRESSION
    if a.prediction == CATEGORY:
        return CLASSIFICATION if a.labeled else CLUSTERING
    if a.prediction == NONE:
        return DIMENSIONALITY_REDUCTION
    return NoRecommendation(
        TOUGH_LUCK,
        "predicting a structure leads off the selection flowchart: none of C2.1-C2.4 "
        "derives a category for it",
    )


def assumption_selection(kb: KnowledgeBase, assumptions: ModelingAssumptions) -> tuple[set[str], dict]:
    """The assumption-side feature selection and attribute valuation."""
    a = assumptions
    selected = {kb.model.root, ASSUMPTIONS_ROOT, "DatasetRequirements"}
    if a.prediction != NONE:
        selected.update(("FunctionalRequirements", "Predictiontype", _PREDICTION_FEATURE[a.prediction]))
    if a.labeled:
        selected.add("LabeledData")
    if a.text_data:
        selected.add("Textdata")
    if a.known_categories:
        selected.add("Knowncategories")
    if a.few_features:
        selected.add("Fewfeatures")
    return selected, {"Samplesize": a.sample_size, "NumFeatures": a.num_features}


def recommend(kb: KnowledgeBase, assumptions: ModelingAssumptions) -> Recommendation:
    """The ordered fallback chain for the assumptions, with a justification trace.

    Pure and deterministic: equal assumptions produce identical chains.
    """
    category = classify_problem(kb, assumptions)
    if isinstance(category, NoRecommendation):
        return category
    if category == CLUSTERING and assumptions.known_categories is None:
        return NoRecommendation(
            INDETERMINATE,
            "clustering needs the Knowncategories assumption: C6.1, C6.2, C6.4 and C6.5 "
            "all branch on it, and it was not declared",
        )

    selected, attrs = assumption_selection(kb, assumptions)

    entry = None
    for rule in kb.entry_rules_for(category):
        if rule.guard is None or evaluate(rule.guard, selected, attrs):
            entry = rule
            break
    if entry is None:
        # Only the clustering branch can fall through: unknown categories on
        # a large sample violate C6.4.
        return NoRecommendation(
            TOUGH_LUCK,
            f"no {category} rule applies: C6.4 requires Samplesize < 10000 when "
            f"categories are unknown, but the sample has {assumptions.sample_size} rows",
        )

    steps: list[tuple[str, ...]] = [entry.step]
    seen = set(entry.step)
    current = entry.step
    while True:
        nxt: list[str] = []
        for technique in current:
            for edge in kb.edges_from(technique):
                if not evaluate(edge.guard, selected, attrs):
                    continue
                for target in edge.targets:
                    if target not in seen and target not in nxt:
                        nxt.append(target)
        if not nxt:
            break
        steps.append(tuple(nxt))
        seen.update(nxt)
        current = tuple(nxt)

    config = _instantiate(kb, assumptions, category, steps[0][0])
    trace = _trace(kb, category, config)
    return RecommendationChain(category, tuple(steps), trace)


def _trace(kb: KnowledgeBase, category: str, config: Configuration) -> tuple[TraceEntry, ...]:
    prefixes = ("C1.", "C2.", CATEGORY_FAMILY[category])
    entries = []
    for constraint in sorted(kb.model.constraints, key=lambda c: c.label):
        if any(constraint.label.startswith(p) for p in prefixes):
            value = eval_formula(constraint.formula, config)
            entries.append(TraceEntry(constraint.label, formula_text(constraint.formula), value))
    return tuple(entries)


def as_configuration(kb: KnowledgeBase, assumptions: ModelingAssumptions, technique: str) -> Configuration:
    """A valid configuration selecting the assumptions plus one recommended technique.

    Raises:
        NotRecommendedError: the technique is not in the chain for these
            assumptions (or there is no chain at all).
    """
    chain = recommend(kb, assumptions)
    if isinstance(chain, NoRecommendation):
        raise NotRecommendedError(f"no recommendation for these assumptions: {chain.detail}")
    if technique not in chain.techniques():
        raise NotRecommendedError(
            f"{technique!r} is not in the recommended chain {list(chain.techniques())}"
        )
    return _instantiate(kb, assumptions, chain.category, technique)


def _instantiate(
    kb: KnowledgeBase, assumptions: ModelingAssumptions, category: str, technique: str
) -> Configuration:
    """Build the configuration for one technique and repair it to validity.

    Selection starts from the assumption features plus the category and
    technique, closed under parents and mandatory children. Enforced
    implications whose consequent is a disjunction of features are repaired
    by selecting the leftmost unselected alternative; this is what pulls a
    category's constraint-mandated head technique (e.g. LinearSVC under
    C5.1) into configurations for later chain members.
    """
    model = kb.validation_model
    selected, attrs = assumption_selection(kb, assumptions)
    selected.update((category, technique))
    _close(kb, selected)

    for _ in range(len(model.features) + len(model.constraints)):
        config = Configuration(frozenset(selected), attrs)
        repaired = False
        for constraint in model.constraints:
            if eval_formula(constraint.formula, config):
                continue
            addition = _repair_candidate(constraint.formula, selected)
            if addition is None:
                raise InstantiationError(
                    f"constraint {constraint.label} cannot be satisfied for "
                    f"{technique} under these assumptions"
                )
            selected.add(addition)
            _close(kb, selected)
            repaired = True
            break
        if not repaired:
            break

    config = Configuration(frozenset(selected), attrs)
    verdict = is_valid_configuration(model, config)
    if not verdict.valid:
        raise InstantiationError(
            f"no valid configuration for {technique}: " + "; ".join(str(v) for v in verdict.violations)
        )
    return config


def _repair_candidate(formula: Formula, selected: set[str]) -> Optional[str]:
    """The leftmost selectable feature fixing a violated implication, if any."""
    if not isinstance(formula, Implies):
        return None
    for name in _positive_literals(formula.right):
        if name not in selected:
            return name
    return None


def _positive_literals(formula: Formula):
    if isinstance(formula, FeatureLiteral):
        yield formula.name
    elif isinstance(formula, Or):
        yield from _positive_literals(formula.left)
        yield from _positive_literals(formula.right)


def _close(kb: KnowledgeBase, selected: set[str]):
    """Close a selection under parents and mandatory non-group children."""
    model = kb.model
    grouped = {m for f in model.features.values() if f.group for m in f.group.members}
    changed = True
    while changed:
        changed = False
        for name in list(selected):
            feature = model.features.get(name)
            if feature is None:
                continue
            if feature.parent is not None and feature.parent not in selected:
                selected.add(feature.parent)
                changed = True
            for child in model.children(name):
                if child.variation == MANDATORY and child.name not in grouped and child.name not in selected:
                    selected.add(child.name)
                    changed = True
