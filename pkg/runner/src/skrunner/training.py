"""Train one technique with the study protocol and score the holdout.

Protocol: stratified 80/20 split with a fixed seed, cross-validated grid
search on the training split (F1 as the search score), then F1, Matthews
correlation, balanced accuracy, sensitivity, and specificity on the
untouched 20%. The report is written in the selection engine's metrics
JSON format, field for field.

Technique names come from the recommendation chain; the estimator mapping
is deliberately explicit:

    LinearSVC             -> sklearn.svm.LinearSVC (scaled)
    KNeighborsClassifier  -> sklearn.neighbors.KNeighborsClassifier (scaled)
    SVC                   -> sklearn.svm.SVC, rbf kernel (scaled)
    NaiveBayes            -> sklearn.naive_bayes.GaussianNB
    EnsembleClassifiers   -> sklearn.ensemble.RandomForestClassifier

Random forests stand in for the ensemble family, matching the estimator
the baseline studies settled on. Grids stay small (at most 10 points) so a
full chain walk lands well under the two-minute budget.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from sklearn.ensemble import RandomForestClassifier
from sklearn.metrics import (
    balanced_accuracy_score,
    f1_score,
    matthews_corrcoef,
    recall_score,
)
from sklearn.model_selection import GridSearchCV, train_test_split
from sklearn.naive_bayes import GaussianNB
from sklearn.neighbors import KNeighborsClassifier
from sklearn.pipeline import Pipeline
from sklearn.preprocessing import StandardScaler
from sklearn.svm import SVC, LinearSVC

from .dataset import load_dataset


@dataclass(frozen=True)
class SplitSpec:
    """The study's split: stratified, 80% train."""

    train_fraction: float = 0.8
    stratified: bool = True
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must be in (0, 1)")


def supported_techniques() -> tuple[str, ...]:
    return tuple(_BUILDERS)


def _scaled(estimator) -> Pipeline:
    return Pipeline([("scale", StandardScaler()), ("model", estimator)])


def _build_linear_svc(seed):
    grid = {"model__C": [0.01, 0.1, 1.0, 10.0]}
    return _scaled(LinearSVC(random_state=seed, dual=False, max_iter=5000)), grid


def _build_kneighbors(seed):
    grid = {"model__n_neighbors": [3, 5, 7, 9, 11], "model__weights": ["uniform", "distance"]}
    return _scaled(KNeighborsClassifier()), grid


def _build_svc(seed):
    grid = {"model__C": [0.1, 1.0, 10.0], "model__gamma": ["scale", 0.01]}
    return _scaled(SVC(kernel="rbf", random_state=seed)), grid


def _build_naive_bayes(seed):
    grid = {"model__var_smoothing": [1e-9, 1e-8]}
    return _scaled(GaussianNB()), grid


def _build_random_forest(seed):
    grid = {"model__n_estimators": [100, 200], "model__max_depth": [None, 4, 8]}
    return _scaled(RandomForestClassifier(random_state=seed)), grid


_BUILDERS = {
    "LinearSVC": _build_linear_svc,
    "KNeighborsClassifier": _build_kneighbors,
    "SVC": _build_svc,
    "NaiveBayes": _build_naive_bayes,
    "EnsembleClassifiers": _build_random_forest,
}


def train_and_score(dataset_path, technique: str, split: SplitSpec) -> dict:
    """Run the protocol for one technique; returns the metrics report dict."""
    if technique not in _BUILDERS:
        raise ValueError(
            f"unsupported technique {technique!r}; supported: {', '.join(_BUILDERS)}"
        )
    features, target, _summary = load_dataset(dataset_path)

    x_train, x_test, y_train, y_test = train_test_split(
        features,
        target,
        train_size=split.train_fraction,
        stratify=target if split.stratified else None,
        random_state=split.seed,
    )

    pipeline, grid = _BUILDERS[technique](split.seed)
    search = GridSearchCV(pipeline, grid, scoring="f1", cv=5, n_jobs=None)
    search.fit(x_train, y_train)
    predictions = search.predict(x_test)

    report = {
        "technique": technique,
        "f1": float(f1_score(y_test, predictions)),
        "mcc": float(matthews_corrcoef(y_test, predictions)),
        "bacc": float(balanced_accuracy_score(y_test, predictions)),
        "sensitivity": float(recall_score(y_test, predictions, pos_label=1)),
        "specificity": float(recall_score(y_test, predictions, pos_label=0)),
        "provenance": (
            f"skrunner technique={technique} seed={split.seed} "
            f"split={split.train_fraction:g}/stratified "
            f"best={json.dumps(search.best_params_, sort_keys=True, default=str)} "
            f"dataset={Path(dataset_path).name}"
        ),
    }
    return report


def write_report(report: dict, path) -> None:
    Path(path).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
