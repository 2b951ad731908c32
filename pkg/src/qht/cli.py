"""Command-line interface.

Subcommands cover the full workflow: `simulate` draws homodyne data from a
state, `estimate` reconstructs the Wigner function on a grid, `truth` writes
the oracle grid, `risk` runs the Monte Carlo benchmark, `hardest` reports
the lower-bound diagnostics and `verify` runs the invariant suites.

Exit codes: 0 success, 1 usage error, 2 validation error, 3 numeric
non-convergence.  `--seed` is mandatory where randomness is involved; every
output file gets a JSON sidecar recording the full configuration.
"""

import argparse
import json
import os
import sys
import time

from . import __version__
from .errors import (
    DomainError,
    InvalidSpec,
    NonConvergence,
    PositivityViolation,
    TruncationTooSmall,
)
from .estimator import Bandwidth, SmoothnessClass, bandwidth_rule, estimate_grid
from .experiments import mc_risk
from .homodyne import read_samples_csv, sample_state, write_samples_csv
from .minimax import hardest_report
from .states import StateSpec, build
from .verify import run_suite
from .wigner import GridSpec, WignerField, write_wigner_csv

USAGE_ERROR, VALIDATION_ERROR, NUMERIC_ERROR = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(USAGE_ERROR)


def _state_spec(text):
    text = text.strip()
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    return StateSpec.from_json(text)


def _grid_spec(text):
    parts = text.split(",")
    if len(parts) != 5:
        raise DomainError("grid must be qmin,qmax,pmin,pmax,steps")
    return GridSpec(
        float(parts[0]), float(parts[1]), float(parts[2]), float(parts[3]),
        int(parts[4]),
    )


def _threads(args):
    if args.threads is not None:
        n = args.threads
    else:
        n = int(os.environ.get("QHT_THREADS", "1"))
    return os.cpu_count() if n == 0 else max(1, n)


def _write_sidecar(path, payload):
    with open(str(path) + ".json", "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _manifest(command, config, seed=None):
    out = {"command": command, "config": config, "version": __version__}
    if seed is not None:
        out["seed"] = seed
    return out


def _cmd_simulate(args):
    spec = _state_spec(args.state)
    data = sample_state(spec, args.n, args.seed)
    write_samples_csv(args.out, data)
    return 0


def _cmd_estimate(args):
    data = read_samples_csv(args.samples)
    grid = _grid_spec(args.grid)
    if args.delta is not None:
        bw = Bandwidth(delta=args.delta)
    else:
        bw = bandwidth_rule(data.n, SmoothnessClass(beta=args.beta, L=args.L))
    t0 = time.perf_counter()
    values = estimate_grid(data, bw, grid, workers=_threads(args))
    runtime_ms = 1000.0 * (time.perf_counter() - t0)
    write_wigner_csv(args.out, grid, values, value_name="w_est")
    _write_sidecar(
        args.out,
        _manifest(
            "estimate",
            {
                "samples": args.samples,
                "n": data.n,
                "delta": bw.delta,
                "beta": args.beta,
                "grid": args.grid,
                "runtime_ms": runtime_ms,
            },
        ),
    )
    return 0


def _cmd_truth(args):
    spec = _state_spec(args.state)
    grid = _grid_spec(args.grid)
    field = WignerField(build(spec))
    write_wigner_csv(args.out, grid, field.grid(grid), value_name="w")
    _write_sidecar(
        args.out,
        _manifest("truth", {"state": json.loads(spec.to_json()), "grid": args.grid}),
    )
    return 0


def _cmd_risk(args):
    spec = _state_spec(args.state)
    z = tuple(float(v) for v in args.z.split(","))
    if len(z) != 2:
        raise DomainError("z must be q,p")
    n_values = [int(float(v)) for v in args.n_values.split(",")]
    report = mc_risk(
        spec,
        z,
        SmoothnessClass(beta=args.beta, L=args.L),
        n_values,
        args.reps,
        args.seed,
        workers=_threads(args),
    )
    report.write_json(args.out)
    if args.plot_data:
        report.write_plot_csv(args.plot_data)
    return 0


def _cmd_hardest(args):
    report = hardest_report(
        alpha=args.alpha,
        beta=args.beta,
        n=args.n,
        eta=args.eta,
        q_small=args.q_small,
        dim=args.dim,
        c=args.c,
    )
    with open(args.out, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0


def _cmd_verify(args):
    failures = run_suite([s.strip() for s in args.suite.split(",")])
    return 0 if failures == 0 else VALIDATION_ERROR


def _build_parser():
    parser = _Parser(prog="qht", description=__doc__)
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker cap for parallel sections (0 = auto; env QHT_THREADS)",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("simulate", help="draw homodyne samples from a state")
    p.add_argument("--state", required=True, help="state JSON or @file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("estimate", help="kernel-estimate a Wigner grid from samples")
    p.add_argument("--samples", required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=None, help="manual bandwidth")
    p.add_argument("--grid", required=True, help="qmin,qmax,pmin,pmax,steps")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_estimate)

    p = sub.add_parser("truth", help="write the oracle Wigner grid of a state")
    p.add_argument("--state", required=True)
    p.add_argument("--grid", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_truth)

    p = sub.add_parser("risk", help="Monte Carlo pointwise-risk benchmark")
    p.add_argument("--state", required=True)
    p.add_argument("--z", default="0,0")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--n-values", default="1000,10000,100000")
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--plot-data", default=None, help="also write n,mse,stderr CSV")
    p.set_defaults(fn=_cmd_risk)

    p = sub.add_parser("hardest", help="lower-bound family diagnostics")
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--n", type=int, default=10**6)
    p.add_argument("--eta", type=float, default=0.9)
    p.add_argument("--q-small", type=float, default=0.1)
    p.add_argument("--dim", type=int, default=512)
    p.add_argument("--c", type=float, default=None, help="default: C_a")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_hardest)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", default="all", help="comma list or 'all'")
    p.set_defaults(fn=_cmd_verify)
    return parser


_DASH_VALUE_FLAGS = {"--grid", "--z", "--n-values", "--c"}


def _normalize_argv(argv):
    """Join flag/value pairs whose values may start with a dash."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _DASH_VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None):
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _normalize_argv(list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else USAGE_ERROR
    try:
        return args.fn(args)
    except (InvalidSpec, DomainError, TruncationTooSmall, PositivityViolation) as exc:
        sys.stderr.write(f"validation error in '{args.cmd}': {exc}\n")
        return VALIDATION_ERROR
    except NonConvergence as exc:
        sys.stderr.write(f"numeric error in '{args.cmd}': {exc}\n")
        return NUMERIC_ERROR
    except FileNotFoundError as exc:
        sys.stderr.write(f"validation error in '{args.cmd}': {exc}\n")
        return VALIDATION_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
