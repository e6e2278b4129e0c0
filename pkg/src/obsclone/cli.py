"""Command-line front end: build, verify, scan, search, compare.

Exit codes follow one triad everywhere: 0 when the requested check
passed or the computation completed, 1 when a verification or search
came back negative, 2 for input or usage errors. All floats are printed
with 17 significant digits so output re-parses to the exact binary64
values; CSV rows use LF line endings.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .classes import class_from_dict
from .jointmeas import (
    REFERENCE_UNIVERSAL_PRODUCT,
    UNIVERSAL_SHRINK,
    uncertainty_product,
    uncertainty_to_dict,
    universal_clone_product,
)
from .linalg import QubitState
from .machines import (
    SingularAngleError,
    cnot_machine,
    commuting_machine,
    machine_from_dict,
    machine_to_dict,
    one_param_machine,
    phase_covariant_machine,
    report_to_dict,
    t_machine,
    verify_approximate,
    verify_exact,
)
from .pauli import Observable
from .search import SearchConfig, result_to_dict, search_machine

OBSERVABLE_SHRINK = 1.0 / np.sqrt(2.0)


def _fmt(x: float) -> str:
    if not np.isfinite(x):
        raise ValueError("refusing to serialize a non-finite float")
    return format(float(x), ".17g")


def dumps(obj) -> str:
    """Minimal JSON emitter with reproducible 17-significant-digit floats."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    if isinstance(obj, dict):
        items = ", ".join(f"{dumps(str(k))}: {dumps(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _parse_floats(text: str, n: int, what: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != n:
        raise ValueError(f"{what} needs {n} comma-separated reals, got {len(parts)}")
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise ValueError(f"{what}: {exc}") from exc


def _load_json(path: str) -> dict:
    import json

    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise ValueError(f"{path} is not valid JSON: {exc}") from exc


def cmd_build(args) -> int:
    if args.family == "cnot":
        machine = cnot_machine()
    elif args.family == "one-param":
        machine = one_param_machine(Observable(_parse_floats(args.obs, 4, "--obs")))
    elif args.family == "commuting":
        machine = commuting_machine(
            Observable(_parse_floats(args.obs, 4, "--obs")), args.b0, args.b3
        )
    elif args.family == "t":
        machine = t_machine(args.theta)
    else:
        machine = phase_covariant_machine(args.theta)
    _write(dumps(machine_to_dict(machine)), args.out)
    return 0


def cmd_verify(args) -> int:
    machine = machine_from_dict(_load_json(args.machine))
    if machine.gains is None:
        report = verify_exact(machine, tol=args.tol)
    else:
        report = verify_approximate(machine, tol=args.tol)
    _write(dumps(report_to_dict(report)), args.out)
    return 0 if report.passed else 1


def cmd_scan(args) -> int:
    state = QubitState(_parse_floats(args.state, 3, "--state"))
    if args.steps < 1:
        raise ValueError("--steps must be at least 1")
    if args.theta_max < args.theta_min:
        raise ValueError("--theta-max must not be below --theta-min")
    thetas = np.linspace(args.theta_min, args.theta_max, args.steps)
    lines = ["theta,di1,di2,dm1,dm2,product,bound"]
    for theta in thetas:
        try:
            report = uncertainty_product(t_machine(theta), state)
        except SingularAngleError:
            sys.stderr.write(f"warning: skipping singular angle theta={_fmt(theta)}\n")
            continue
        row = [
            theta,
            report.delta_i1,
            report.delta_i2,
            report.delta_m1,
            report.delta_m2,
            report.product,
            report.lower_bound,
        ]
        lines.append(",".join(_fmt(v) for v in row))
    _write("\n".join(lines) + "\n", args.out)
    return 0


def cmd_search(args) -> int:
    cls = class_from_dict(_load_json(args.klass))
    config = SearchConfig(
        restarts=args.restarts, max_evals=args.max_evals, seed=args.seed, tol=args.tol
    )
    result = search_machine(cls, args.mode, config)
    _write(dumps(result_to_dict(result)), args.out)
    return 0 if result.converged else 1


def cmd_compare(args) -> int:
    state = QubitState(_parse_floats(args.state, 3, "--state"))
    universal = universal_clone_product(state)
    # Evaluate the tailored machine at its own balancing angle, kept away
    # from the singular endpoints where a gain diverges.
    theta = float(np.clip(universal.optimal_theta, 1e-3, np.pi / 2 - 1e-3))
    tailored = uncertainty_product(t_machine(theta), state)
    phase_cov = uncertainty_product(phase_covariant_machine(theta), state)
    payload = {
        "state": [float(v) for v in state.bloch],
        "optimal_theta": theta,
        "observable_product": tailored.product,
        "phase_covariant_product": phase_cov.product,
        "universal_product": universal.product,
        "observable_shrink_factor": OBSERVABLE_SHRINK,
        "universal_shrink_factor": UNIVERSAL_SHRINK,
        "paper_reference_value": REFERENCE_UNIVERSAL_PRODUCT,
        "observable_report": uncertainty_to_dict(tailored),
        "universal_report": uncertainty_to_dict(universal),
    }
    _write(dumps(payload), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="obsclone",
        description="Build, verify, and search cloning machines for qubit observable classes.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", default=None, help="write output here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", parents=[common], help="construct a machine and emit its JSON")
    p_build.add_argument(
        "family", choices=["cnot", "one-param", "commuting", "t", "phase-covariant"]
    )
    p_build.add_argument("--obs", default="0,0,0,1", help="observable as a0,a1,a2,a3")
    p_build.add_argument("--b0", type=float, default=1.0, help="identity part of the commuting partner")
    p_build.add_argument("--b3", type=float, default=1.0, help="axis part of the commuting partner")
    p_build.add_argument("--theta", type=float, default=np.pi / 4, help="interaction angle")
    p_build.set_defaults(func=cmd_build)

    p_verify = sub.add_parser("verify", parents=[common], help="verify a machine JSON document")
    p_verify.add_argument("machine", help="path to a machine JSON file")
    p_verify.add_argument("--tol", type=float, default=1e-10)
    p_verify.set_defaults(func=cmd_verify)

    p_scan = sub.add_parser("scan", parents=[common], help="CSV scan of joint-measurement noise over theta")
    p_scan.add_argument("--state", default="0,0,1", help="input Bloch vector s1,s2,s3")
    p_scan.add_argument("--theta-min", type=float, default=0.1)
    p_scan.add_argument("--theta-max", type=float, default=float(np.pi / 2) - 0.1)
    p_scan.add_argument("--steps", type=int, default=50)
    p_scan.set_defaults(func=cmd_scan)

    p_search = sub.add_parser("search", parents=[common], help="search for a machine cloning a class")
    p_search.add_argument("klass", metavar="class", help="path to a class JSON file")
    p_search.add_argument("--mode", choices=["exact", "approximate"], default="exact")
    p_search.add_argument("--restarts", type=int, default=50)
    p_search.add_argument("--max-evals", type=int, default=4000)
    p_search.add_argument("--seed", type=int, default=0)
    p_search.add_argument("--tol", type=float, default=1e-6)
    p_search.set_defaults(func=cmd_search)

    p_compare = sub.add_parser(
        "compare", parents=[common], help="tailored vs universal joint-measurement noise"
    )
    p_compare.add_argument("--state", default="0,0,1", help="input Bloch vector s1,s2,s3")
    p_compare.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
