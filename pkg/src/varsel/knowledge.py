"""The scikit-learn algorithm-selection knowledge base.

The knowledge lives in the packaged ``data/sklearn.fm`` asset: one merged
feature model holding the technique tree, the assumption tree, and the
selection rules C1.1 through C6.5. This module loads it, derives the
structures the recommender walks (per-category entry rules and directed
fallback edges), and provides a self check.

Two groups of shipped constraints are known to disagree with the decision
flowchart they were transcribed from, and are therefore kept for evaluation
and tracing but excluded from configuration-validity enforcement:

* ``C1.1`` contradicts the exactly-one reading of the prediction-type group
  (it forces ``Category`` whenever ``Quantity`` is selected alone).
* The rules containing ``not notWorking`` read as "if the model works,
  also adopt its fallback", inverting the flowchart's not-working branches.

The shipped text is authoritative and is not rewritten; the flowchart
behavior is carried by the explicit fallback edges instead. The self check
reports this split as standing notes.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from itertools import product
from typing import Optional

from .dsl import ParseError, parse_formula, parse_model
from .formula import Formula, attribute_names, evaluate, feature_names
from .model import FeatureModel, NamedConstraint, validate_model

ASSET = "data/sklearn.fm"

CLASSIFICATION = "Classification"
REGRESSION = "Regression"
CLUSTERING = "Clustering"
DIMENSIONALITY_REDUCTION = "DimensionalityReduction"
CATEGORIES = (CLASSIFICATION, REGRESSION, CLUSTERING, DIMENSIONALITY_REDUCTION)

TECHNIQUES_ROOT = "ModelingTechniques"
ASSUMPTIONS_ROOT = "ModelingAssumptions"

EXPECTED_LABELS = frozenset(
    ["C1.1"]
    + [f"C2.{i}" for i in range(1, 5)]
    + [f"C3.{i}" for i in range(1, 5)]
    + [f"C4.{i}" for i in range(1, 5)]
    + [f"C5.{i}" for i in range(1, 7)]
    + [f"C6.{i}" for i in range(1, 6)]
)

# Constraints preserved verbatim but not enforced as validity rules; see the
# module docstring.
DOCUMENTATION_ONLY = frozenset(
    ["C1.1", "C3.3", "C4.2", "C4.3", "C4.4", "C5.2", "C5.3", "C5.4", "C5.6", "C6.3"]
)

# Which constraint family describes each category's method selection.
CATEGORY_FAMILY = {
    CLASSIFICATION: "C5.",
    REGRESSION: "C3.",
    CLUSTERING: "C6.",
    DIMENSIONALITY_REDUCTION: "C4.",
}


class KnowledgeBaseError(Exception):
    """The shipped knowledge-base asset failed to load or is inconsistent."""


@dataclass(frozen=True)
class FallbackEdge:
    """On a not-working verdict for ``source``, try ``targets`` next (when the guard holds)."""

    source: str
    guard: Formula
    targets: tuple[str, ...]


@dataclass(frozen=True)
class EntryRule:
    """The first techniques to try for a category, guarded by assumptions."""

    category: str
    guard: Optional[Formula]  # None = unconditional
    step: tuple[str, ...]


@dataclass(frozen=True)
class KnowledgeBase:
    model: FeatureModel
    fallback_edges: tuple[FallbackEdge, ...]
    entry_rules: tuple[EntryRule, ...]
    documentation_only: frozenset[str]

    @property
    def constraints(self) -> tuple[NamedConstraint, ...]:
        return self.model.constraints

    @property
    def validation_model(self) -> FeatureModel:
        """The model with only the enforced (non-documentation) constraints."""
        kept = tuple(c for c in self.model.constraints if c.label not in self.documentation_only)
        return self.model.with_constraints(kept)

    def labels(self) -> frozenset[str]:
        return frozenset(c.label for c in self.model.constraints)

    def technique_leaves(self) -> tuple[str, ...]:
        """Leaf features under the technique tree, in declaration order."""
        under = self._descendants(TECHNIQUES_ROOT)
        return tuple(n for n in self.model.feature_order() if n in under and not self.model.children(n))

    def techniques(self, category: str) -> tuple[str, ...]:
        """Techniques selectable for a category per its constraint family.

        Collected from the category's C-family formulas, so a technique that
        several flowchart paths share (kernel approximation) is reported
        under every category that can reach it.
        """
        if category not in CATEGORY_FAMILY:
            raise KeyError(category)
        prefix = CATEGORY_FAMILY[category]
        leaves = set(self.technique_leaves())
        mentioned = set()
        for constraint in self.model.constraints:
            if constraint.label.startswith(prefix):
                mentioned.update(n for n in feature_names(constraint.formula) if n in leaves)
        return tuple(n for n in self.model.feature_order() if n in mentioned)

    def entry_rules_for(self, category: str) -> tuple[EntryRule, ...]:
        return tuple(r for r in self.entry_rules if r.category == category)

    def edges_from(self, source: str) -> tuple[FallbackEdge, ...]:
        return tuple(e for e in self.fallback_edges if e.source == source)

    def _descendants(self, name: str) -> set[str]:
        out = set()
        frontier = [name]
        while frontier:
            cur = frontier.pop()
            for child in self.model.children(cur):
                out.add(child.name)
                frontier.append(child.name)
        return out


_EDGES = (
    ("LinearSVC", "Textdata", ("NaiveBayes",)),
    ("LinearSVC", "not Textdata", ("KNeighborsClassifier",)),
    ("KNeighborsClassifier", "not Textdata", ("SVC", "EnsembleClassifiers")),
    ("SGDClassifier", "Samplesize >= 100000", ("KernelApproximation",)),
    ("RidgeRegression", "Samplesize < 100000 and not Fewfeatures", ("SVRRbf", "EnsembleRegressors")),
    ("SVRLinear", "Samplesize < 100000 and not Fewfeatures", ("SVRRbf", "EnsembleRegressors")),
    ("KMeans", "Knowncategories and Samplesize < 10000", ("SpectralClustering", "GMM")),
    ("RandomizedPCA", "Samplesize < 10000", ("Isomap", "SpectralEmbedding")),
    ("Isomap", "Samplesize < 10000", ("LLE",)),
    ("SpectralEmbedding", "Samplesize < 10000", ("LLE",)),
    ("RandomizedPCA", "Samplesize >= 10000", ("KernelApproximation",)),
)

_ENTRIES = (
    (CLASSIFICATION, "Samplesize < 100000", ("LinearSVC",)),
    (CLASSIFICATION, "Samplesize >= 100000", ("SGDClassifier",)),
    (REGRESSION, "Samplesize < 100000 and Fewfeatures", ("Lasso", "ElasticNet")),
    (REGRESSION, "Samplesize < 100000 and not Fewfeatures", ("RidgeRegression", "SVRLinear")),
    (REGRESSION, "Samplesize >= 100000", ("SGDRegressor",)),
    (CLUSTERING, "Knowncategories and Samplesize >= 10000", ("MiniBatchKMeans",)),
    (CLUSTERING, "Knowncategories and Samplesize < 10000", ("KMeans",)),
    (CLUSTERING, "not Knowncategories and Samplesize < 10000", ("MeanShift", "VBGMM")),
    (DIMENSIONALITY_REDUCTION, None, ("RandomizedPCA",)),
)


def asset_text() -> str:
    """The raw text of the packaged knowledge-base asset."""
    return resources.files("varsel").joinpath(ASSET).read_text(encoding="utf-8")


def load_knowledge_base() -> KnowledgeBase:
    """Parse and cross-check the shipped knowledge base.

    Raises:
        KnowledgeBaseError: the asset is corrupt or violates a structural
            expectation (label set, category group, technique references).
    """
    try:
        model = parse_model(asset_text())
    except ParseError as err:
        raise KnowledgeBaseError(f"knowledge-base asset does not parse: {err}") from err

    problems = list(validate_model(model))
    if problems:
        raise KnowledgeBaseError(f"knowledge-base model is ill-formed: {problems}")

    kb = KnowledgeBase(
        model=model,
        fallback_edges=tuple(FallbackEdge(s, parse_formula(g), t) for s, g, t in _EDGES),
        entry_rules=tuple(
            EntryRule(c, None if g is None else parse_formula(g), step) for c, g, step in _ENTRIES
        ),
        documentation_only=DOCUMENTATION_ONLY,
    )
    _check_shape(kb)
    return kb


def _check_shape(kb: KnowledgeBase):
    model = kb.model
    for name in (TECHNIQUES_ROOT, ASSUMPTIONS_ROOT):
        feat = model.features.get(name)
        if feat is None or feat.parent != model.root:
            raise KnowledgeBaseError(f"{name} must be a child of the root")
    techniques_feature = model.features[TECHNIQUES_ROOT]
    if techniques_feature.group is None or techniques_feature.group.members != CATEGORIES:
        raise KnowledgeBaseError(f"{TECHNIQUES_ROOT} must carry an xor group over {CATEGORIES}")
    if kb.labels() != EXPECTED_LABELS:
        missing = sorted(EXPECTED_LABELS - kb.labels())
        extra = sorted(kb.labels() - EXPECTED_LABELS)
        raise KnowledgeBaseError(f"constraint labels differ from the listing: missing {missing}, extra {extra}")
    leaves = set(kb.technique_leaves())
    for edge in kb.fallback_edges:
        for name in (edge.source, *edge.targets):
            if name not in leaves:
                raise KnowledgeBaseError(f"fallback edge references non-technique {name!r}")
    for rule in kb.entry_rules:
        for name in rule.step:
            if name not in leaves:
                raise KnowledgeBaseError(f"entry rule references non-technique {name!r}")


# ---------------------------------------------------------------------------
# Self check


@dataclass(frozen=True)
class CheckReport:
    failures: tuple[str, ...]
    notes: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


STANDING_NOTES = (
    "C1.1 as printed conflicts with the prediction-type xor group (it fails whenever "
    "Quantity or neither is selected); it is shipped verbatim but excluded from "
    "validity enforcement.",
    "The 'not notWorking' rules (C3.3, C4.2-C4.4, C5.2-C5.4, C5.6, C6.3) invert the "
    "flowchart's not-working branches; fallback edges carry the flowchart behavior and "
    "these rules are documentation only.",
)

_GRID_SAMPLE_SIZES = (60, 5000, 20000, 150000)


def self_check(kb: KnowledgeBase) -> CheckReport:
    """Consistency report for a knowledge base.

    Verifies that (a) every constraint, entry rule, and fallback edge resolves
    against the model, (b) each category is derivable from its C2 rule under
    at least one representative assumption valuation, and (c) the fallback
    graph restricted to each category is acyclic.
    """
    failures: list[str] = []

    for violation in validate_model(kb.model):
        failures.append(f"symbol check: {violation}")
    feature_set = set(kb.model.features)
    attr_set = kb.model.attribute_set()
    leaves = set(kb.technique_leaves())
    for edge in kb.fallback_edges:
        for name in (edge.source, *edge.targets):
            if name not in leaves:
                failures.append(f"symbol check: fallback technique {name!r} is not a technique leaf")
        failures.extend(_guard_problems(edge.guard, feature_set, attr_set, f"edge {edge.source}"))
    for rule in kb.entry_rules:
        for name in rule.step:
            if name not in leaves:
                failures.append(f"symbol check: entry technique {name!r} is not a technique leaf")
        if rule.guard is not None:
            failures.extend(_guard_problems(rule.guard, feature_set, attr_set, f"entry {rule.category}"))

    for category in CATEGORIES:
        if not _category_derivable(kb, category):
            failures.append(
                f"derivability: no C2 rule selects {category} under any representative valuation"
            )

    for category in CATEGORIES:
        cycle = _find_cycle(kb, category)
        if cycle is not None:
            failures.append(f"fallback graph for {category} has a cycle: {' -> '.join(cycle)}")

    return CheckReport(tuple(failures), STANDING_NOTES)


def _guard_problems(guard: Formula, features: set, attrs: frozenset, where: str) -> list[str]:
    out = []
    for name in feature_names(guard):
        if name not in features:
            out.append(f"symbol check: guard of {where} references unknown feature {name!r}")
    for name in attribute_names(guard):
        if name not in attrs:
            out.append(f"symbol check: guard of {where} references unknown attribute {name!r}")
    return out


def _category_derivable(kb: KnowledgeBase, category: str) -> bool:
    condition = None
    from .formula import FeatureLiteral, Iff

    for constraint in kb.model.constraints:
        if not constraint.label.startswith("C2."):
            continue
        formula = constraint.formula
        if isinstance(formula, Iff):
            if formula.right == FeatureLiteral(category):
                condition = formula.left
            elif formula.left == FeatureLiteral(category):
                condition = formula.right
        if condition is not None:
            break
    if condition is None:
        return False

    predictions = (None, "Category", "Quantity", "Structure")
    for size, prediction, labeled, known, few, text in product(
        _GRID_SAMPLE_SIZES, predictions, (False, True), (False, True), (False, True), (False, True)
    ):
        selected = set()
        if prediction is not None:
            selected.update(("FunctionalRequirements", "Predictiontype", prediction))
        if labeled:
            selected.add("LabeledData")
        if known:
            selected.add("Knowncategories")
        if few:
            selected.add("Fewfeatures")
        if text:
            selected.add("Textdata")
        if evaluate(condition, selected, {"Samplesize": size, "NumFeatures": 13}):
            return True
    return False


def _find_cycle(kb: KnowledgeBase, category: str) -> Optional[list[str]]:
    nodes = set(kb.techniques(category))
    adjacency = {n: [] for n in nodes}
    for edge in kb.fallback_edges:
        if edge.source in nodes:
            adjacency[edge.source].extend(t for t in edge.targets if t in nodes)

    state: dict[str, int] = {}
    path: list[str] = []

    def visit(node: str) -> Optional[list[str]]:
        state[node] = 1
        path.append(node)
        for nxt in adjacency[node]:
            if state.get(nxt) == 1:
                return path[path.index(nxt):] + [nxt]
            if state.get(nxt) is None:
                found = visit(nxt)
                if found is not None:
                    return found
        state[node] = 2
        path.pop()
        return None

    for node in sorted(nodes):
        if state.get(node) is None:
            found = visit(node)
            if found is not None:
                return found
    return None
