"""Command-line entry points for the training runner.

``train`` fits one technique and writes its metrics report; ``run-chain``
walks a whole recommendation chain; ``summary`` prints the dataset shape.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .chain import parse_criterion, run_chain
from .dataset import DatasetError, load_dataset
from .training import SplitSpec, supported_techniques, train_and_score, write_report


def main() -> None:
    sys.exit(run(sys.argv[1:]))


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return 2 if exit_.code else 0
    try:
        return args.handler(args)
    except (DatasetError, ValueError, OSError, json.JSONDecodeError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skrunner", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train one technique and write its metrics report")
    p.add_argument("--dataset", type=Path, required=True)
    p.add_argument("--technique", required=True, choices=supported_techniques())
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(handler=_cmd_train)

    p = sub.add_parser("run-chain", help="walk a recommendation chain until a technique works")
    p.add_argument("--dataset", type=Path, required=True)
    p.add_argument("--chain", type=Path, required=True)
    p.add_argument("--criterion", required=True, help="metric:threshold, e.g. f1:0.77")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", type=Path, required=True)
    p.set_defaults(handler=_cmd_run_chain)

    p = sub.add_parser("summary", help="print the dataset summary")
    p.add_argument("--dataset", type=Path, required=True)
    p.set_defaults(handler=_cmd_summary)

    return parser


def _cmd_train(args) -> int:
    report = train_and_score(args.dataset, args.technique, SplitSpec(seed=args.seed))
    write_report(report, args.out)
    print(f"{args.technique}: f1={report['f1']:.3f} mcc={report['mcc']:.3f} "
          f"bacc={report['bacc']:.3f} -> {args.out}")
    return 0


def _cmd_run_chain(args) -> int:
    transcript = run_chain(args.dataset, args.chain, parse_criterion(args.criterion), args.out_dir, args.seed)
    for decision in transcript["decisions"]:
        value = decision["metric_value"]
        if decision["status"] == "accepted":
            print(f"accepted {decision['technique']} ({value:.3f})")
        elif decision["status"] == "not_working":
            print(f"not working ({value:.3f}); next: {' | '.join(decision['candidates'])}")
        else:
            print(f"exhausted ({value:.3f})")
    return 0 if transcript["final"]["status"] == "accepted" else 1


def _cmd_summary(args) -> int:
    _, _, summary = load_dataset(args.dataset)
    print(json.dumps(summary.as_dict(), indent=2))
    return 0
