"""Command-line entry points: scripted runs and the streaming service.

Exit codes: 0 success, 1 validation or I/O failure, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import HeightFieldError, ScenarioError, ShadowSimError
from .protocol import record_to_line
from .scenario import load_scenario
from .service import BIND_ENV_VAR, DEFAULT_BIND, run_server
from .sim import compare_modes, run_scenario


def _write_log(path: Path, records, frame) -> None:
    with path.open("w", encoding="utf-8") as f:
        for rec in records:
            f.write(record_to_line(rec, frame))
            f.write("\n")


def _with_suffix(path: Path, tag: str) -> Path:
    return path.with_name(f"{path.stem}.{tag}{path.suffix or '.jsonl'}")


def cmd_run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    out = Path(args.out) if args.out else None

    if args.compare:
        comparison = compare_modes(scenario)
        if out is not None:
            direct_records, _ = run_scenario(scenario.with_control_mode("direct"))
            pid_records, _ = run_scenario(scenario.with_control_mode("pid"))
            _write_log(_with_suffix(out, "direct"), direct_records, scenario.frame)
            _write_log(_with_suffix(out, "pid"), pid_records, scenario.frame)
        summary = {
            "scenario": str(args.scenario),
            "direct": comparison.direct.to_dict(),
            "pid": comparison.pid.to_dict(),
        }
    else:
        records, metrics = run_scenario(scenario)
        if out is not None:
            _write_log(out, records, scenario.frame)
        summary = {
            "scenario": str(args.scenario),
            "mode": scenario.control_mode,
            "ticks": len(records),
            "metrics": metrics.to_dict(),
        }

    print(json.dumps(summary, sort_keys=True, indent=2))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    run_server(bind=args.bind, tick_rate=args.tick_rate)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shadowsim",
        description="Virtual-shadow projection simulator: scripted runs and a live steering service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario file and write its tick log")
    run_p.add_argument("scenario", help="path to a scenario JSON file")
    run_p.add_argument("--out", help="tick log path (one JSON record per line)")
    run_p.add_argument(
        "--compare", action="store_true",
        help="run both direct and pid modes and report paired metrics",
    )
    run_p.set_defaults(func=cmd_run)

    serve_p = sub.add_parser("serve", help="start the streaming session service")
    serve_p.add_argument(
        "--bind", default=None,
        help=f"host:port to listen on (default ${BIND_ENV_VAR} or {DEFAULT_BIND})",
    )
    serve_p.add_argument(
        "--tick-rate", type=float, default=None,
        help="override the tick rate of every session scenario",
    )
    serve_p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, HeightFieldError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ShadowSimError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
