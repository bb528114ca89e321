"""``greedybase`` command line.

Exit status: 0 when every check passes, 1 when one fails, 2 when a cap or
node budget stopped the computation (argparse usage errors also exit 2).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from greedybase.errors import CapExceeded, HypothesisError
from greedybase.experiments.commands import cmd_min_array, cmd_oracle, cmd_partitions, cmd_ravenous_table, cmd_subsets
from greedybase.experiments.report import EXIT_CAP, EXIT_FAIL, RunReport
from greedybase.experiments.verify import VERIFIERS, cmd_verify

log = logging.getLogger("greedybase")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    p.add_argument("--budget", type=int, default=None, help="node budget for searches")
    p.add_argument("--format", choices=("json", "csv", "text"), default=None, help="output format (default text)")
    p.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    p.add_argument("--config", type=Path, default=None, help="JSON file of default flag values")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in JSON output")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="greedybase", description=__doc__.split("\n\n")[0])
    verbs = parser.add_subparsers(dest="verb", required=True)

    p = verbs.add_parser("subsets", parents=[common], help="S_n / A_n on r-subsets")
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--group", choices=("sym", "alt"))
    p.add_argument("--mode", choices=("single", "exhaustive", "diagnostics"))
    p.add_argument("--runs", type=int, help="random runs in diagnostics mode (default 10)")

    p = verbs.add_parser("partitions", parents=[common], help="S_{k x l} / A_{k x l} on (k,l)-partitions")
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--group", choices=("sym", "alt"))
    p.add_argument("--mode", choices=("auto", "exhaustive", "bound"))

    p = verbs.add_parser("ravenous-table", parents=[common], help="bound ratios over all (k,l) families")
    p.add_argument("--k-max", type=int)
    p.add_argument("--l-max", type=int)

    p = verbs.add_parser("verify", parents=[common], help="run a property suite")
    p.add_argument("id", choices=sorted(VERIFIERS))

    p = verbs.add_parser("min-array", parents=[common], help="least-stabiliser intersection arrays")
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)

    p = verbs.add_parser("oracle", parents=[common], help="explicit-group computation at tiny degree")
    p.add_argument("--action", choices=("subsets", "partitions"))
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--group", choices=("sym", "alt"))
    return parser


DEFAULTS = {
    "seed": 0,
    "format": "text",
    "group": "sym",
    "runs": 10,
    "k_max": 40,
    "l_max": 600,
}
MODE_DEFAULTS = {"subsets": "exhaustive", "partitions": "auto"}


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset flags from --config, then from built-in defaults."""
    config = {}
    if args.config is not None:
        config = json.loads(args.config.read_text())
        if not isinstance(config, dict):
            raise ValueError("config file must hold a JSON object")
    for key, value in vars(args).items():
        if value is not None:
            continue
        if key in config:
            setattr(args, key, config[key])
        elif key == "mode" and args.verb in MODE_DEFAULTS:
            args.mode = MODE_DEFAULTS[args.verb]
        elif key in DEFAULTS:
            setattr(args, key, DEFAULTS[key])
    return args


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise ValueError(f"{args.verb} needs {', '.join(missing)}")


def run(args: argparse.Namespace) -> RunReport:
    if args.verb == "subsets":
        _need(args, "n", "r")
        return cmd_subsets(args.n, args.r, args.group, args.mode, args.budget, args.seed, args.runs)
    if args.verb == "partitions":
        _need(args, "k", "l")
        return cmd_partitions(args.k, args.l, args.group, args.mode, args.budget)
    if args.verb == "ravenous-table":
        return cmd_ravenous_table(args.k_max, args.l_max)
    if args.verb == "verify":
        return cmd_verify(args.id, seed=args.seed)
    if args.verb == "min-array":
        _need(args, "k", "l")
        return cmd_min_array(args.k, args.l, args.budget)
    if args.verb == "oracle":
        _need(args, "action")
        if args.action == "subsets":
            _need(args, "n", "r")
        else:
            _need(args, "k", "l")
        return cmd_oracle(args.action, args.n, args.r, args.k, args.l, args.group)
    raise ValueError(f"unknown verb {args.verb!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        args = _resolve(args)
        report = run(args)
    except (ValueError, HypothesisError) as exc:
        parser.error(str(exc))
    except CapExceeded as exc:
        print(f"greedybase: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    text = report.dumps(args.format, timing=args.timing)
    if args.out is not None:
        args.out.write_text(text)
        log.info("report written to %s", args.out)
    else:
        sys.stdout.write(text)
    if report.exit_code == EXIT_FAIL:
        log.warning("%d check(s) failed", sum(not c.passed for c in report.checks))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
