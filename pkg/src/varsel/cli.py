"""Command-line interface.

Subcommands: ``validate`` a .fm file, ``export-kb`` the packaged knowledge
base, ``dot`` diagram export, ``recommend`` a technique chain from declared
assumptions, ``evaluate`` metric reports against a chain, and ``adapt`` a
what-if assumption change.

Exit codes: 0 on success, 1 when the engine answers "no" (no
recommendation, or an evaluation that exhausts the chain), 2 on usage or
input errors. Output is deterministic; ``--format json`` prints the
machine-readable documents other tools consume.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .adaptation import AssumptionDelta, StaleDeltaError, reselect
from .dot import InvalidHighlightError, export_dot
from .dsl import ParseError, parse_model
from .evaluation import (
    ACCEPTED,
    EXHAUSTED,
    EmptyChainError,
    WrongTechniqueError,
    compare_baselines,
    load_baselines,
    load_report,
    new_session,
    parse_criterion,
    submit_metrics,
)
from .formula import MissingAttributeError
from .knowledge import KnowledgeBaseError, asset_text, load_knowledge_base
from .model import Configuration
from .recommend import (
    PREDICTIONS,
    ModelingAssumptions,
    NoRecommendation,
    RecommendationChain,
    recommend,
)

OK = 0
NEGATIVE = 1
INPUT_ERROR = 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


def run(argv: list[str]) -> int:
    """Dispatch one invocation; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:  # argparse prints its own diagnostics
        return INPUT_ERROR if exit_.code else OK
    try:
        return args.handler(args)
    except (OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return INPUT_ERROR
    except (
        ParseError,
        KnowledgeBaseError,
        InvalidHighlightError,
        MissingAttributeError,
        StaleDeltaError,
        WrongTechniqueError,
        EmptyChainError,
        ValueError,
    ) as err:
        _print_error(err)
        return INPUT_ERROR


def _print_error(err: Exception) -> None:
    if isinstance(err, ParseError):
        for diagnostic in err.diagnostics:
            print(f"error: {diagnostic}", file=sys.stderr)
    else:
        print(f"error: {err}", file=sys.stderr)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varsel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a .fm file")
    p.add_argument("file", type=Path)
    _format_flag(p)
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("export-kb", help="write the packaged knowledge base to a directory")
    p.add_argument("directory", type=Path)
    p.set_defaults(handler=_cmd_export_kb)

    p = sub.add_parser("dot", help="render a .fm file as a Graphviz digraph")
    p.add_argument("file", type=Path)
    p.add_argument("--config", type=Path, help="JSON configuration to highlight")
    p.set_defaults(handler=_cmd_dot)

    p = sub.add_parser("recommend", help="derive a technique chain from assumptions")
    p.add_argument("--samples", type=int, required=True, help="dataset row count")
    p.add_argument("--features", type=int, default=0, help="dataset feature count")
    p.add_argument("--predict", choices=PREDICTIONS, required=True)
    p.add_argument("--labeled", action="store_true")
    p.add_argument("--text", action="store_true", help="the data is text")
    p.add_argument("--known-categories", type=_parse_bool, default=None, metavar="BOOL")
    p.add_argument("--few-features", action="store_true")
    _format_flag(p)
    p.set_defaults(handler=_cmd_recommend)

    p = sub.add_parser("evaluate", help="run metric reports through the not-working loop")
    p.add_argument("--chain", type=Path, required=True, help="chain JSON from 'recommend --format json'")
    p.add_argument("--criterion", required=True, help="metric:threshold, e.g. f1:0.77")
    p.add_argument("--report", type=Path, required=True, action="append", help="metrics report JSON (repeatable, submitted in order)")
    p.add_argument("--baselines", type=Path, help="baseline reports JSON for ranking")
    _format_flag(p)
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("adapt", help="what-if: apply an assumption delta and diff the outcome")
    p.add_argument("--assumptions", type=Path, required=True, help="assumptions JSON")
    p.add_argument("--delta", type=Path, required=True, help="delta JSON: {field: {old, new}}")
    _format_flag(p)
    p.set_defaults(handler=_cmd_adapt)

    return parser


def _format_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("text", "json"), default="text")


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _emit_json(payload) -> None:
    print(json.dumps(payload, indent=2))


# ---------------------------------------------------------------------------
# Handlers


def _cmd_validate(args) -> int:
    text = args.file.read_text(encoding="utf-8")
    try:
        model = parse_model(text)
    except ParseError as err:
        if args.format == "json":
            _emit_json({"ok": False, "diagnostics": [str(d) for d in err.diagnostics]})
        else:
            _print_error(err)
        return INPUT_ERROR
    if args.format == "json":
        _emit_json({"ok": True, "model": model.name, "features": len(model.features)})
    else:
        print(f"OK: model {model.name!r}, {len(model.features)} features, "
              f"{len(model.constraints)} constraints")
    return OK


def _cmd_export_kb(args) -> int:
    from .evaluation import BASELINES_ASSET, REFERENCE_REPORT_ASSET
    from importlib import resources

    args.directory.mkdir(parents=True, exist_ok=True)
    wrote = []
    (args.directory / "sklearn.fm").write_text(asset_text(), encoding="utf-8")
    wrote.append(args.directory / "sklearn.fm")
    for asset in (BASELINES_ASSET, REFERENCE_REPORT_ASSET):
        name = asset.rsplit("/", 1)[-1]
        text = resources.files("varsel").joinpath(asset).read_text(encoding="utf-8")
        (args.directory / name).write_text(text, encoding="utf-8")
        wrote.append(args.directory / name)
    for path in wrote:
        print(path)
    return OK


def _cmd_dot(args) -> int:
    model = parse_model(args.file.read_text(encoding="utf-8"))
    highlight = None
    if args.config is not None:
        data = json.loads(args.config.read_text(encoding="utf-8"))
        highlight = Configuration(
            frozenset(data.get("selected", ())),
            {k: int(v) for k, v in data.get("attributes", {}).items()},
        )
    print(export_dot(model, highlight), end="")
    return OK


def _assumptions_from_args(args) -> ModelingAssumptions:
    return ModelingAssumptions(
        sample_size=args.samples,
        num_features=args.features,
        prediction=args.predict,
        labeled=args.labeled,
        text_data=args.text,
        known_categories=args.known_categories,
        few_features=args.few_features,
    )


def _cmd_recommend(args) -> int:
    kb = load_knowledge_base()
    outcome = recommend(kb, _assumptions_from_args(args))
    if isinstance(outcome, NoRecommendation):
        if args.format == "json":
            _emit_json(outcome.as_dict())
        else:
            print(f"no recommendation ({outcome.reason}): {outcome.detail}")
        return NEGATIVE
    if args.format == "json":
        _emit_json(outcome.as_dict())
    else:
        print(f"category: {outcome.category}")
        print("chain: " + " -> ".join(" | ".join(step) for step in outcome.steps))
        print("trace:")
        for entry in outcome.trace:
            print(f"  {entry.label:6} {str(entry.value).lower():5} {entry.formula}")
    return OK


def _cmd_evaluate(args) -> int:
    chain = RecommendationChain.from_dict(json.loads(args.chain.read_text(encoding="utf-8")))
    criterion = parse_criterion(args.criterion)
    session = new_session(chain, criterion)
    decisions = []
    accepted_report = None
    for report_path in args.report:
        report = load_report(report_path)
        decision = submit_metrics(session, report)
        decisions.append(decision)
        if decision.status == ACCEPTED:
            accepted_report = report
            break

    ranking = None
    if args.baselines is not None and accepted_report is not None:
        ranking = compare_baselines(accepted_report, load_baselines(args.baselines))

    if args.format == "json":
        payload = {"criterion": str(criterion), "decisions": [d.as_dict() for d in decisions]}
        if ranking is not None:
            payload["ranking"] = ranking.as_dict()
        _emit_json(payload)
    else:
        for decision in decisions:
            if decision.status == ACCEPTED:
                line = f"Accepted {decision.technique}"
                if ranking is not None:
                    line += f"; rank {ranking.submitted_rank} of {len(ranking.rows)}"
                print(line)
                for row in ranking.rows if ranking is not None else ():
                    marker = "submitted" if row.submitted else f"delta {row.delta_f1:+.3f}"
                    print(f"  {row.rank}. {row.report.technique}: f1={row.report.f1:.3f} ({marker})")
            elif decision.status == EXHAUSTED:
                print("Exhausted: every recommended technique failed the criterion")
            else:
                print("Not working; next candidates: " + " | ".join(decision.candidates))
    return NEGATIVE if decisions and decisions[-1].status == EXHAUSTED else OK


def _cmd_adapt(args) -> int:
    kb = load_knowledge_base()
    assumptions = ModelingAssumptions.from_dict(json.loads(args.assumptions.read_text(encoding="utf-8")))
    delta = AssumptionDelta.from_dict(json.loads(args.delta.read_text(encoding="utf-8")))
    report = reselect(kb, assumptions, delta)
    if args.format == "json":
        _emit_json(report.as_dict())
    else:
        print("old: " + _chain_line(report.old_chain))
        print("new: " + _chain_line(report.new_chain))
        print("changed constraints: " + (", ".join(report.changed_constraints) or "(none)"))
        print("selected: " + (", ".join(report.feature_diff.selected) or "(none)"))
        print("deselected: " + (", ".join(report.feature_diff.deselected) or "(none)"))
    return NEGATIVE if isinstance(report.new_chain, NoRecommendation) else OK


def _chain_line(outcome) -> str:
    if isinstance(outcome, NoRecommendation):
        return f"no recommendation ({outcome.reason}): {outcome.detail}"
    return outcome.category + ": " + " -> ".join(" | ".join(step) for step in outcome.steps)
