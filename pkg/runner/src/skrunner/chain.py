"""Walk a recommendation chain, training each step until one works.

The chain file is the selection engine's JSON document ({"category",
"steps", "trace"}); the criterion uses its ``metric:threshold`` flag
syntax. Decisions follow the engine's loop contract exactly: a report at or
above the threshold is accepted; below it, the alternative is struck from
the current step, the step fails once every alternative has failed, and the
walk is exhausted after the last step. Keeping the semantics identical is
what lets the engine replay the emitted report files and reach the same
decisions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .training import SplitSpec, train_and_score, write_report

METRICS = ("f1", "mcc", "bacc", "sensitivity", "specificity")

ACCEPTED = "accepted"
NOT_WORKING = "not_working"
EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class Criterion:
    metric: str
    threshold: float

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")

    def passes(self, report: dict) -> bool:
        return float(report[self.metric]) >= self.threshold

    def __str__(self):
        return f"{self.metric}:{self.threshold:g}"


def parse_criterion(text: str) -> Criterion:
    metric, sep, threshold = text.partition(":")
    if not sep:
        raise ValueError(f"criterion must look like 'f1:0.77', got {text!r}")
    return Criterion(metric.strip().lower(), float(threshold))


def load_chain(path) -> list[list[str]]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    steps = [list(step) for step in data["steps"]]
    if not steps or not all(steps):
        raise ValueError("chain has no techniques to evaluate")
    return steps


def run_chain(dataset_path, chain_path, criterion: Criterion, out_dir, seed: int = 0) -> dict:
    """Train down the chain until a technique meets the criterion.

    Writes one metrics report per trained technique into ``out_dir`` plus a
    ``decisions.json`` transcript, and returns that transcript.
    """
    steps = load_chain(chain_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    decisions = []
    report_paths = []
    final = {"status": EXHAUSTED}
    done = False
    counter = 0

    for step_index, step in enumerate(steps):
        remaining = list(step)
        for technique in step:
            report = train_and_score(dataset_path, technique, SplitSpec(seed=seed))
            path = out / f"report_{counter:02d}_{technique}.json"
            write_report(report, path)
            report_paths.append(str(path))
            counter += 1

            remaining.remove(technique)
            if criterion.passes(report):
                decision = {"status": ACCEPTED, "technique": technique}
                done = True
            elif remaining:
                decision = {"status": NOT_WORKING, "candidates": list(remaining)}
            else:
                nxt = steps[step_index + 1] if step_index + 1 < len(steps) else []
                decision = (
                    {"status": NOT_WORKING, "candidates": list(nxt)} if nxt else {"status": EXHAUSTED}
                )
            decision["report"] = path.name
            decision["metric_value"] = report[criterion.metric]
            decisions.append(decision)
            if done:
                final = decision
                break
        if done:
            break
        final = decisions[-1]

    transcript = {
        "criterion": str(criterion),
        "seed": seed,
        "dataset": Path(dataset_path).name,
        "decisions": decisions,
        "reports": report_paths,
        "final": {k: v for k, v in final.items() if k != "report"},
    }
    (out / "decisions.json").write_text(json.dumps(transcript, indent=2) + "\n", encoding="utf-8")
    return transcript
