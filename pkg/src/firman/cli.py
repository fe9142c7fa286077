"""Command line entry point: ``firman sweep | single | validate``.

Exit codes: 0 success, 1 validation failure, 2 config or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import harness
from .core import IdentitySpace, StructureError
from .dynamics import SchedulerPolicy
from .metrics import TrialRecord

EXIT_OK, EXIT_INVALID, EXIT_CONFIG = 0, 1, 2


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < harness.U64:
        raise argparse.ArgumentTypeError(f"{text} is not an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="firman", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run every case x scenario x trial")
    sweep.add_argument("--config", type=Path, help="JSON file overriding preset keys")
    sweep.add_argument("--preset", default="paper", choices=sorted(harness.PRESETS))
    sweep.add_argument("--seed", type=_u64, help="base seed")
    sweep.add_argument("--out", type=Path, help="output directory")
    sweep.add_argument("--workers", type=int)
    sweep.add_argument("--trials", type=int)
    sweep.add_argument("--policy", choices=[p.value for p in SchedulerPolicy])
    sweep.add_argument("--export-edges", action="store_true", default=None)

    single = sub.add_parser("single", help="run one simulation")
    single.add_argument("--case", type=int, required=True, choices=[1, 2, 3])
    single.add_argument("--scenario", required=True, choices=list(harness.SCENARIOS))
    single.add_argument("--seed", type=_u64, required=True)
    single.add_argument("--export-edges", action="store_true")
    single.add_argument("--out", type=Path, default=Path("."))
    single.add_argument("--config", type=Path)
    single.add_argument("--policy", choices=[p.value for p in SchedulerPolicy])

    val = sub.add_parser("validate", help="audit an exported network")
    val.add_argument("--edges", type=Path, required=True)
    val.add_argument("--agents", type=Path, required=True)
    val.add_argument("--weights", type=float, nargs="+", default=[1.0])
    return parser


def _cmd_sweep(args) -> int:
    config = harness.load_config(
        args.config,
        args.preset,
        base_seed=args.seed,
        out=str(args.out) if args.out else None,
        workers=args.workers,
        trials=args.trials,
        policy=args.policy,
        export_edges=args.export_edges,
    )
    result = harness.run_sweep(config)
    for s in result.summaries:
        print(
            f"case {s.case_id} {s.scenario:<8} similarity {s.mean('mean_similarity'):7.3f} "
            f"({s.sd('mean_similarity'):.3f})  hetero {s.hetero_pct_pooled:5.2f}%  "
            f"dyads {s.mean('n_edges'):8.1f}  satisfied {s.mean('pct_satisfied'):6.2f}%"
        )
    for r in result.ratios:
        print(f"case {r['case_id']} ratio {r['ratio']:.3f} (reference {r['reference_ratio']}, delta {r['delta']:+.3f})")
    print(f"wrote {config.out}/trials.csv, summary.csv, ratios.csv")
    return EXIT_OK


def _cmd_single(args) -> int:
    overrides = {"policy": args.policy} if args.policy else {}
    config = harness.load_config(args.config, **overrides)
    record, edges = harness.run_single(
        args.case, args.scenario, args.seed, export_edges=args.export_edges, config=config, out_dir=args.out
    )
    writer = csv.DictWriter(sys.stdout, fieldnames=TrialRecord.columns(), lineterminator="\n")
    writer.writeheader()
    writer.writerow(harness._fmt_row(record.as_dict()))
    if edges is not None:
        print(f"edges written to {edges}", file=sys.stderr)
    return EXIT_OK


def _cmd_validate(args) -> int:
    space = IdentitySpace(len(args.weights), tuple(args.weights))
    report = harness.validate_files(args.agents, args.edges, space)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.ok else EXIT_INVALID


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    handler = {"sweep": _cmd_sweep, "single": _cmd_single, "validate": _cmd_validate}[args.command]
    try:
        return handler(args)
    except harness.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, StructureError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
