"""Command line: run, matrix, validate and replay.

Exit codes: 0 success, 1 configuration error, 2 invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import sys
from pathlib import Path

from .experiments import parse_matrix, run_matrix
from .replay import replay_file
from .scenario import ALGORITHMS, ConfigError, dump_scenario, parse_scenario
from .simkernel import InvariantViolation, run

EXIT_OK, EXIT_CONFIG, EXIT_INVARIANT = 0, 1, 2

log = logging.getLogger("rcasim")

FLOW_COLUMNS = ["flow", "src", "dst", "sent", "delivered", "collided", "dropped", "in_flight",
                "delivery_rate", "throughput_kbps"]


def _write_metrics(metrics, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(FLOW_COLUMNS)
    for f in metrics.flows:
        w.writerow([f.flow_id, f.src, f.dst, f.sent, f.delivered, f.collided, f.dropped, f.in_flight,
                    f"{f.delivery_rate:.6f}", f"{f.throughput_kbps:.6f}"])
    w.writerow(["mean", "", "", metrics.sent, metrics.delivered, metrics.collided, metrics.dropped,
                metrics.total("in_flight"), f"{metrics.delivery_rate:.6f}", f"{metrics.throughput_kbps:.6f}"])


def cmd_run(args) -> int:
    scenario = parse_scenario(args.scenario)
    if args.algorithm:
        scenario = scenario.replace(algorithm=args.algorithm)
    seed = scenario.seed if args.seed is None else args.seed
    metrics, lines = run(scenario, seed, trace=args.trace is not None)
    if args.trace:
        try:
            Path(args.trace).write_text("\n".join(lines) + "\n")
        except OSError as exc:
            raise ConfigError(f"cannot write trace {args.trace}: {exc.strerror}") from None
    _write_metrics(metrics, sys.stdout)
    log.info("digest %s", metrics.digest())
    return EXIT_OK


def cmd_matrix(args) -> int:
    matrix = parse_matrix(args.config)
    if args.jobs:
        matrix = dataclasses.replace(matrix, jobs=args.jobs).validate()
    out, summary = run_matrix(matrix, args.out)
    print(f"wrote {out} and {summary}")
    return EXIT_OK


def cmd_validate(args) -> int:
    scenario = parse_scenario(args.scenario)
    sys.stdout.write(dump_scenario(scenario))
    return EXIT_OK


def cmd_replay(args) -> int:
    report = replay_file(args.trace)
    for v in report.violations:
        print(v, file=sys.stderr)
    print(f"{report.events} events, {report.transmissions} transmissions, "
          f"{len(report.violations)} violations")
    return EXIT_OK if report.ok else EXIT_INVARIANT


class _Parser(argparse.ArgumentParser):
    # usage mistakes are configuration errors, not argparse's default exit 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rcasim", description="Multi-radio channel assignment simulator.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one scenario and print per-flow metrics as CSV")
    r.add_argument("--scenario", required=True)
    r.add_argument("--seed", type=int)
    r.add_argument("--trace", help="write the event trace here")
    r.add_argument("--algorithm", choices=ALGORITHMS, help="override the scenario's algorithm")
    r.set_defaults(func=cmd_run)

    m = sub.add_parser("matrix", help="run a sweep and write per-seed and summary CSVs")
    m.add_argument("--config", required=True)
    m.add_argument("--out", required=True)
    m.add_argument("--jobs", type=int, help="worker processes (overrides the file)")
    m.set_defaults(func=cmd_matrix)

    v = sub.add_parser("validate", help="check a scenario file and print it with defaults filled in")
    v.add_argument("--scenario", required=True)
    v.set_defaults(func=cmd_validate)

    t = sub.add_parser("replay", help="re-check every invariant over a recorded trace")
    t.add_argument("--trace", required=True)
    t.set_defaults(func=cmd_replay)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
