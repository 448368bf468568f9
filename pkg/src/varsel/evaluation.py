"""The not-working evaluation loop and baseline comparison.

A session walks a recommendation chain under a single-metric working
criterion: a submitted metrics report either meets the threshold (the
technique is accepted) or counts as not working, moving attention to the
remaining alternatives of the current step and then to the next step. All
five supported metrics travel with every report; only the criterion metric
gates the decision, inclusively (metric equal to the threshold passes).

Reports are plain JSON with fixed field names, so externally trained models
can feed the loop; the packaged fixtures carry the published reference
numbers for the heart-failure study, which makes the loop testable with no
training at all.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .recommend import RecommendationChain

F1 = "f1"
MCC = "mcc"
BACC = "bacc"
SENSITIVITY = "sensitivity"
SPECIFICITY = "specificity"
METRICS = (F1, MCC, BACC, SENSITIVITY, SPECIFICITY)

_RANGES = {F1: (0.0, 1.0), MCC: (-1.0, 1.0), BACC: (0.0, 1.0), SENSITIVITY: (0.0, 1.0), SPECIFICITY: (0.0, 1.0)}

ACCEPTED = "accepted"
NOT_WORKING = "not_working"
EXHAUSTED = "exhausted"

BASELINES_ASSET = "data/baselines.json"
REFERENCE_REPORT_ASSET = "data/linear_svc_report.json"


class EmptyChainError(Exception):
    """A session needs at least one step to evaluate."""


class WrongTechniqueError(Exception):
    """The submitted report does not name a currently evaluable technique."""


@dataclass(frozen=True)
class WorkingCriterion:
    """A metric threshold; at or above it, the model counts as working."""

    metric: str
    threshold: float

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        low, high = _RANGES[self.metric]
        if not low <= self.threshold <= high:
            raise ValueError(f"{self.metric} threshold must be within [{low}, {high}]")

    def passes(self, report: "MetricsReport") -> bool:
        return report.value(self.metric) >= self.threshold

    def __str__(self):
        return f"{self.metric}:{self.threshold:g}"


def parse_criterion(text: str) -> WorkingCriterion:
    """Parse the ``metric:threshold`` flag syntax, e.g. ``f1:0.77``."""
    metric, sep, threshold = text.partition(":")
    if not sep:
        raise ValueError(f"criterion must look like 'f1:0.77', got {text!r}")
    return WorkingCriterion(metric.strip().lower(), float(threshold))


@dataclass(frozen=True)
class MetricsReport:
    """One trained technique's held-out metrics."""

    technique: str
    f1: float
    mcc: float
    bacc: float
    sensitivity: float
    specificity: float
    provenance: str = ""

    def __post_init__(self):
        for metric in METRICS:
            low, high = _RANGES[metric]
            value = getattr(self, metric)
            if not low <= value <= high:
                raise ValueError(f"{metric}={value} outside [{low}, {high}]")

    def value(self, metric: str) -> float:
        if metric not in METRICS:
            raise ValueError(f"unknown metric {metric!r}")
        return getattr(self, metric)

    def as_dict(self) -> dict:
        return {
            "technique": self.technique,
            "f1": self.f1,
            "mcc": self.mcc,
            "bacc": self.bacc,
            "sensitivity": self.sensitivity,
            "specificity": self.specificity,
            "provenance": self.provenance,
        }

    @staticmethod
    def from_dict(data: dict) -> "MetricsReport":
        return MetricsReport(
            technique=data["technique"],
            f1=float(data["f1"]),
            mcc=float(data["mcc"]),
            bacc=float(data["bacc"]),
            sensitivity=float(data["sensitivity"]),
            specificity=float(data["specificity"]),
            provenance=str(data.get("provenance", "")),
        )


def load_report(path) -> MetricsReport:
    with open(path, encoding="utf-8") as handle:
        return MetricsReport.from_dict(json.load(handle))


def load_baselines(path) -> list[MetricsReport]:
    with open(path, encoding="utf-8") as handle:
        return [MetricsReport.from_dict(row) for row in json.load(handle)]


def packaged_baselines() -> list[MetricsReport]:
    """The published literature rows shipped with the package."""
    text = resources.files("varsel").joinpath(BASELINES_ASSET).read_text(encoding="utf-8")
    return [MetricsReport.from_dict(row) for row in json.loads(text)]


def packaged_reference_report() -> MetricsReport:
    """The published reference metrics for the recommended head technique."""
    text = resources.files("varsel").joinpath(REFERENCE_REPORT_ASSET).read_text(encoding="utf-8")
    return MetricsReport.from_dict(json.loads(text))


@dataclass(frozen=True)
class Decision:
    status: str  # ACCEPTED, NOT_WORKING, or EXHAUSTED
    technique: Optional[str] = None  # set when accepted
    candidates: tuple[str, ...] = ()  # what to try next when not working

    def as_dict(self) -> dict:
        out: dict = {"status": self.status}
        if self.technique is not None:
            out["technique"] = self.technique
        if self.status == NOT_WORKING:
            out["candidates"] = list(self.candidates)
        return out


@dataclass
class Session:
    """Single-owner mutable state for one walk down a chain."""

    chain: RecommendationChain
    criterion: WorkingCriterion
    cursor: int = 0
    history: list[tuple[MetricsReport, Decision]] = field(default_factory=list)
    accepted: Optional[str] = None
    _failed: set[str] = field(default_factory=set)

    def current_candidates(self) -> tuple[str, ...]:
        if self.accepted is not None or self.cursor >= len(self.chain.steps):
            return ()
        step = self.chain.steps[self.cursor]
        return tuple(t for t in step if t not in self._failed)


def new_session(chain: RecommendationChain, criterion: WorkingCriterion) -> Session:
    if not chain.steps or not all(chain.steps):
        raise EmptyChainError("the chain has no techniques to evaluate")
    return Session(chain=chain, criterion=criterion)


def submit_metrics(session: Session, report: MetricsReport) -> Decision:
    """Gate one report against the criterion and advance the session.

    The submitted technique must be one of the current step's untried
    alternatives. A failing report removes it; the step is exhausted only
    when every alternative has failed, and the session only after the last
    step. Deterministic given the same submissions in the same order.
    """
    candidates = session.current_candidates()
    if report.technique not in candidates:
        if session.accepted is not None:
            raise WrongTechniqueError(f"session already accepted {session.accepted!r}")
        if not candidates:
            raise WrongTechniqueError("session is exhausted; no candidates remain")
        raise WrongTechniqueError(
            f"report names {report.technique!r}; current candidates are {list(candidates)}"
        )

    if session.criterion.passes(report):
        session.accepted = report.technique
        decision = Decision(ACCEPTED, technique=report.technique)
    else:
        session._failed.add(report.technique)
        remaining = session.current_candidates()
        if remaining:
            decision = Decision(NOT_WORKING, candidates=remaining)
        else:
            session.cursor += 1
            session._failed.clear()
            nxt = session.current_candidates()
            decision = Decision(NOT_WORKING, candidates=nxt) if nxt else Decision(EXHAUSTED)
    session.history.append((report, decision))
    return decision


@dataclass(frozen=True)
class RankedRow:
    rank: int
    report: MetricsReport
    delta_f1: float
    submitted: bool

    def as_dict(self) -> dict:
        out = self.report.as_dict()
        out["rank"] = self.rank
        out["delta_f1"] = round(self.delta_f1, 3)
        out["submitted"] = self.submitted
        return out


@dataclass(frozen=True)
class Ranking:
    rows: tuple[RankedRow, ...]

    @property
    def submitted_rank(self) -> int:
        for row in self.rows:
            if row.submitted:
                return row.rank
        raise ValueError("no submitted row")

    def as_dict(self) -> dict:
        return {"rows": [row.as_dict() for row in self.rows]}


def compare_baselines(report: MetricsReport, baselines: list[MetricsReport]) -> Ranking:
    """Rank the report against baselines by F1 (ties: MCC, then BACC).

    The result is a permutation of the inputs plus the report; ties keep
    input order with the submitted report first. ``delta_f1`` is the
    submitted F1 minus the row's F1, so positive means the submitted model
    is ahead.
    """
    entries = [(report, True)] + [(b, False) for b in baselines]
    ordered = sorted(entries, key=lambda pair: (-pair[0].f1, -pair[0].mcc, -pair[0].bacc))
    rows = []
    for rank, (row_report, submitted) in enumerate(ordered, start=1):
        rows.append(RankedRow(rank, row_report, report.f1 - row_report.f1, submitted))
    return Ranking(tuple(rows))
