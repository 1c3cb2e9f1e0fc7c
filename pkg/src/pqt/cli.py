"""
Command-line driver: concurrence sweeps, single runs and the self-checks.

Settings come from, in decreasing priority, command-line flags, a
``key = value`` config file given with ``--config``, and built-in defaults.
Config keys are the long flag names, with dashes or underscores.

Exit status is 0 on success, 1 if a verification suite fails and 2 on
invalid input.
"""

import argparse
import json
import math
import os
import sys

from . import __version__
from .errors import PQTError
from .protocol import (
    MAX_REPETITIONS,
    ProtocolConfig,
    Termination,
    run_enumeration,
    run_sampled,
    walk_outcomes,
)
from .statevector import GhzResource, InfoQubit, max_qubits
from .sweeps import MAF_COLUMNS, SWEEP_COLUMNS, SweepSpec, maf_rows, sweep_rows, write_rows

__all__ = ["main"]

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2

STRATEGIES = [t.value for t in Termination]

DEFAULTS = {
    "c_min": 0.0,
    "c_max": 1.0,
    "points": 101,
    "depths": "0,1,2,3",
    "strategy": None,  # per-command, see _strategies
    "seed": 0,
    "trials": 100_000,
    "jobs": None,  # all available cores
    "format": None,
    "out": None,
    "a": "1",
    "b": "0",
    "chi": None,
    "c": None,
    "depth": 1,
    "mode": "enumerate",
    "streams": 1,
}


class InputError(Exception):
    pass


def load_config(path):
    """Parse a ``key = value`` file; ``#`` starts a comment, values may be quoted."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}")
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise InputError(f"{path}:{lineno}: unknown key {key!r}")
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "'\"":
            value = value[1:-1]
        if value.startswith("[") and value.endswith("]"):
            value = ",".join(v.strip().strip("'\"") for v in value[1:-1].split(","))
        out[key] = value
    return out


def _setting(args, config, key, cast=str):
    value = getattr(args, key, None)
    if value is None:
        value = config.get(key, DEFAULTS[key])
    if value is None:
        return None
    try:
        return cast(value)
    except (TypeError, ValueError):
        raise InputError(f"invalid value for {key}: {value!r}")


def parse_depths(text):
    """``"0,1,3"`` or ``"0-3"`` (inclusive) or a mix of both."""
    depths = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            depths.extend(range(int(lo), int(hi) + 1))
        else:
            depths.append(int(part))
    if not depths:
        raise ValueError("no depths given")
    return tuple(depths)


def _strategies(args, config, default):
    raw = args.strategy if args.strategy else config.get("strategy")
    if raw is None:
        return default
    if isinstance(raw, str):
        raw = [raw]
    names = [s.strip() for item in raw for s in item.split(",") if s.strip()]
    bad = [s for s in names if s not in STRATEGIES]
    if bad:
        raise InputError(f"unknown strategy {bad[0]!r}; choose from {', '.join(STRATEGIES)}")
    return tuple(dict.fromkeys(names))


def _jobs(args, config):
    jobs = _setting(args, config, "jobs", int)
    if jobs is not None and jobs < 1:
        raise InputError(f"--jobs must be >= 1, got {jobs}")
    return jobs


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _spec(args, config, default_strategies):
    fmt = _setting(args, config, "format") or "csv"
    return SweepSpec(
        c_min=_setting(args, config, "c_min", float),
        c_max=_setting(args, config, "c_max", float),
        points=_setting(args, config, "points", int),
        depths=_setting(args, config, "depths", parse_depths),
        strategies=_strategies(args, config, default_strategies),
        output_path=_setting(args, config, "out"),
        format=fmt,
    )


def cmd_sweep(args, config):
    spec = _spec(args, config, ("continue",))
    rows = sweep_rows(spec, jobs=_jobs(args, config))
    text = write_rows(rows, SWEEP_COLUMNS, spec.format, spec.output_path)
    if spec.output_path in (None, "-"):
        sys.stdout.write(text)
    return EXIT_OK


def cmd_maf(args, config):
    spec = _spec(args, config, ("plain-vnm", "matched-vnm"))
    rows = maf_rows(spec, jobs=_jobs(args, config))
    text = write_rows(rows, MAF_COLUMNS, spec.format, spec.output_path)
    if spec.output_path in (None, "-"):
        sys.stdout.write(text)
    return EXIT_OK


def _channel(args, config):
    chi = _setting(args, config, "chi", float)
    c = _setting(args, config, "c", float)
    if chi is not None and c is not None:
        raise InputError("give either --chi or --c, not both")
    if c is not None:
        return GhzResource.from_concurrence(c)
    return GhzResource(math.pi / 4 if chi is None else chi)


def _complex(text):
    return complex(str(text).replace(" ", "").replace("i", "j"))


def _run_report(args, config):
    info = InfoQubit(_setting(args, config, "a", _complex), _setting(args, config, "b", _complex))
    resource = _channel(args, config)
    depth = _setting(args, config, "depth", int)
    strategies = _strategies(args, config, ("continue",))
    if len(strategies) != 1:
        raise InputError("run takes a single --strategy")
    seed = _setting(args, config, "seed", int)
    pqt_config = ProtocolConfig(depth, strategies[0], seed)
    mode = _setting(args, config, "mode")
    if mode not in ("enumerate", "sample"):
        raise InputError(f"--mode must be enumerate or sample, got {mode!r}")

    trace = run_enumeration(info, resource, pqt_config)
    report = trace.to_dict()
    counts = {}
    for o in walk_outcomes(resource.chi, depth, pqt_config.termination):
        counts[o.attempt] = counts.get(o.attempt, 0) + 1
    report["pair_outcomes_per_attempt"] = [counts[t] for t in sorted(counts)]
    report["mode"] = mode
    if mode == "sample":
        trials = _setting(args, config, "trials", int)
        streams = _setting(args, config, "streams", int)
        res = run_sampled(info, resource, pqt_config, trials, streams=streams,
                          jobs=_jobs(args, config) or 1)
        report["sample"] = {
            "seed": res.seed,
            "streams": streams,
            "trials": res.trials,
            "successes": res.successes,
            "success_frequency": res.success_frequency,
            "standard_error": res.standard_error,
            "mean_fidelity": res.mean_fidelity,
            "expected_success": trace.total_success,
        }
    return report


def _fmt(x):
    return f"{x:.17g}"


def render_report(report):
    """Plain-text version of a run report."""
    a, b = complex(*report["a"]), complex(*report["b"])
    lines = [
        f"input a={a:.6g} b={b:.6g}  chi={report['chi']:.6g}  C={report['concurrence']:.6g}",
        f"repetitions={report['max_repetitions']}  termination={report['termination']}",
        "",
        f"{'path':<22} {'probability':>24} {'status':<11} {'corr':<4} {'fidelity':>20}",
    ]
    for br in report["branches"]:
        path = "".join(str(k) for k in br["path"])
        lines.append(
            f"{path:<22} {_fmt(br['probability']):>24} {br['status']:<11} "
            f"{br['correction'] or '-':<4} {br['fidelity']:>20.15f}"
        )
    lines.append("")
    for t, p in enumerate(report["per_attempt_success"]):
        lines.append(f"success after attempt {t + 1}: {_fmt(p)}")
    if report["terminal_success"]:
        lines.append(f"matched final measurement adds: {_fmt(report['terminal_success'])}")
    lines.append(f"total success: {_fmt(report['total_success'])}")
    if "sample" in report:
        s = report["sample"]
        lines.append(
            f"sampled: {s['successes']}/{s['trials']} = {_fmt(s['success_frequency'])} "
            f"(+/- {s['standard_error']:.3g}), mean fidelity {_fmt(s['mean_fidelity'])}, "
            f"seed {s['seed']}"
        )
    return "\n".join(lines) + "\n"


def cmd_run(args, config):
    report = _run_report(args, config)
    fmt = _setting(args, config, "format") or "text"
    out = _setting(args, config, "out")
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        lines = ["path,attempts,probability,status,correction,fidelity"]
        for br in report["branches"]:
            lines.append(",".join([
                "".join(str(k) for k in br["path"]), str(br["attempts"]),
                _fmt(br["probability"]), br["status"], br["correction"] or "",
                _fmt(br["fidelity"])]))
        text = "\n".join(lines) + "\n"
    else:
        text = render_report(report)
    _emit(text, out)
    return EXIT_OK


def cmd_verify(args, config):
    from .verification import run_all

    results = run_all(echo=print)
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} suites passed")
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pqt",
        description="Repeated generalized Bell measurement teleportation over a GHZ channel",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value settings file (flags override it)")
    common.add_argument("--jobs", type=int, help="worker count (default: all cores)")
    common.add_argument("--out", help="output file (default: stdout)")
    sweepish = argparse.ArgumentParser(add_help=False)
    sweepish.add_argument("--c-min", type=float, help="smallest concurrence (default 0)")
    sweepish.add_argument("--c-max", type=float, help="largest concurrence (default 1)")
    sweepish.add_argument("--points", type=int, help="grid points (default 101)")
    sweepish.add_argument("--depths", help="repetition depths, e.g. 0,1,2 or 0-3")
    sweepish.add_argument("--strategy", action="append", choices=STRATEGIES,
                          help="termination strategy; repeat for several")
    sweepish.add_argument("--format", choices=("csv", "json"))
    sweepish.add_argument("--seed", type=int, help=argparse.SUPPRESS)
    sweepish.add_argument("--trials", type=int, help=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("sweep", parents=[common, sweepish],
                       help="success probability versus concurrence")
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("maf", parents=[common, sweepish],
                       help="maximal average fidelity versus concurrence")
    p.set_defaults(func=cmd_maf)

    p = sub.add_parser("run", parents=[common], help="branch table for one input and channel")
    p.add_argument("--a", help="amplitude of |0> (complex, e.g. 0.6 or 0.6+0.1j)")
    p.add_argument("--b", help="amplitude of |1>")
    p.add_argument("--chi", type=float, help="channel angle in [0, pi/4] (default pi/4)")
    p.add_argument("--c", type=float, help="channel concurrence instead of --chi")
    p.add_argument("--depth", type=int, help=f"repetitions after the first attempt, 0..{MAX_REPETITIONS}")
    p.add_argument("--strategy", action="append", choices=STRATEGIES)
    p.add_argument("--mode", choices=("enumerate", "sample"))
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--streams", type=int, help="independent RNG streams for sampling")
    p.add_argument("--format", choices=("text", "csv", "json"))
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", parents=[common], help="run the verification suites")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        max_qubits()
        config = load_config(args.config) if args.config else {}
        return args.func(args, config)
    except (InputError, PQTError, ValueError, OSError) as exc:
        print(f"pqt {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
