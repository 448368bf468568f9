"""Loading and checking the heart-failure clinical-records table.

The expected file is the public heart-failure clinical-records CSV. Its 13
clinical columns are the 12 predictive measurements below plus the binary
``death_event`` outcome, which the study counts among the features while
using it as the classification target (the published copy spells it
``DEATH_EVENT``; matching is case-insensitive and names are normalized to
lower case).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import pandas as pd

TARGET = "death_event"

PREDICTIVE_COLUMNS = (
    "age",
    "anaemia",
    "creatinine_phosphokinase",
    "diabetes",
    "ejection_fraction",
    "high_blood_pressure",
    "platelets",
    "serum_creatinine",
    "serum_sodium",
    "sex",
    "smoking",
    "time",
)


class DatasetError(Exception):
    """The CSV does not look like the heart-failure clinical-records table."""


@dataclass(frozen=True)
class DatasetSummary:
    rows: int
    features: int  # clinical columns, target included, per the study's counting
    positives: int
    negatives: int
    target: str = TARGET

    def as_dict(self) -> dict:
        return {
            "rows": self.rows,
            "features": self.features,
            "positives": self.positives,
            "negatives": self.negatives,
            "target": self.target,
        }


def load_dataset(path) -> tuple[pd.DataFrame, pd.Series, DatasetSummary]:
    """Read the CSV and split it into features, target, and a summary.

    Raises:
        DatasetError: missing or unexpected columns, or a target that is
            not binary 0/1 with both classes present.
    """
    frame = pd.read_csv(path)
    frame.columns = [str(c).strip().lower() for c in frame.columns]

    missing = [c for c in PREDICTIVE_COLUMNS + (TARGET,) if c not in frame.columns]
    if missing:
        raise DatasetError(f"missing columns in {Path(path).name}: {', '.join(missing)}")
    extras = [c for c in frame.columns if c not in PREDICTIVE_COLUMNS + (TARGET,)]
    if extras:
        raise DatasetError(f"unexpected columns in {Path(path).name}: {', '.join(extras)}")

    target = frame[TARGET]
    features = frame[list(PREDICTIVE_COLUMNS)]

    values = set(target.unique().tolist())
    if not values <= {0, 1}:
        raise DatasetError(f"target must be binary 0/1, found values {sorted(values)}")
    if len(values) < 2:
        raise DatasetError("non-binary target: only one class present")

    positives = int((target == 1).sum())
    summary = DatasetSummary(
        rows=len(frame),
        features=len(PREDICTIVE_COLUMNS) + 1,
        positives=positives,
        negatives=len(frame) - positives,
    )
    return features, target, summary
