"""``pstchains`` command line: spectrum, coeffs, fidelity, reconstruct, verify.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
JSON goes to stdout with a leading ``"schema"`` key; fidelity data is CSV.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import verify as verify_mod
from ._jsonio import dumps
from .bilattice import (
    BiLatticeSpec,
    closed_form_weights,
    make_spectrum,
    parse_gamma,
    pst_admissibility,
    pst_weights,
)
from .dynamics import JacobiMatrix, fidelity_rows, write_fidelity_csv
from .inverse import mirror_residual, reconstruct_euclidean, reconstruct_stieltjes
from .orthopoly import DiscreteMeasure
from .parakrawtchouk import odd_chain_coefficients, para_coefficients


class InputError(Exception):
    """Bad flag values or input files; mapped to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _gamma(text: str):
    try:
        return parse_gamma(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"invalid gamma {text!r}: {exc}") from exc


def _spec(args) -> BiLatticeSpec:
    return BiLatticeSpec(args.n, args.gamma, getattr(args, "scale", 1.0), getattr(args, "shift", 0.0))


def _chain_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True, help="odd chain index N (N+1 sites)")
    p.add_argument("--gamma", type=_gamma, required=True, help="rational gamma, e.g. 1/3")


def cmd_spectrum(args) -> int:
    spec = _spec(args)
    base = BiLatticeSpec(spec.n_top, spec.gamma)
    points = make_spectrum(spec)
    weights = closed_form_weights(base).weights
    adm = pst_admissibility(base)
    t_min = adm.minimal_time / spec.scale if adm.admissible else None
    sys.stdout.write(dumps({
        "n": spec.n_top,
        "gamma": str(spec.gamma),
        "points": points,
        "weights": weights,
        "admissible": adm.admissible,
        "t_min": t_min,
    }))
    return 0


def _rc_payload(rc, **extra) -> dict:
    rc = rc.to_float()
    return {"b": rc.b, "j": np.sqrt(rc.u), **extra}


def cmd_coeffs(args) -> int:
    spec = _spec(args)
    if args.odd_chain:
        rc = odd_chain_coefficients(spec.n_top, spec.gamma)
    else:
        rc = para_coefficients(spec.n_top, spec.gamma)
    sys.stdout.write(dumps(_rc_payload(rc, odd_chain=bool(args.odd_chain))))
    return 0


def _scan(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"--scan expects t0:t1:steps, got {text!r}")
    try:
        t0, t1, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise InputError(f"bad --scan value {text!r}") from exc
    if steps < 1 or not (math.isfinite(t0) and math.isfinite(t1)) or t1 < t0:
        raise InputError(f"bad --scan range {text!r}")
    return np.linspace(t0, t1, steps)


def cmd_fidelity(args) -> int:
    spec = _spec(args)
    rc = odd_chain_coefficients(spec.n_top, spec.gamma) if args.odd_chain else para_coefficients(
        spec.n_top, spec.gamma
    )
    J = JacobiMatrix.from_coefficients(rc)
    if args.time is not None:
        if not math.isfinite(args.time):
            raise InputError("--time must be finite")
        times = np.array([args.time])
    else:
        times = _scan(args.scan)
    target = len(J) - 1 if args.target is None else args.target
    for idx in (args.source, target):
        if not 0 <= idx < len(J):
            raise InputError(f"site {idx} outside 0..{len(J) - 1}")
    write_fidelity_csv(fidelity_rows(J, times, args.source, target), sys.stdout)
    return 0


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict) or "points" not in data:
        raise InputError(f"{path}: expected an object with a 'points' array")
    return data


def cmd_reconstruct(args) -> int:
    data = _load_json(args.spectrum)
    points = np.asarray(data["points"], dtype=float)
    weights = data.get("weights")
    if args.method == "euclidean":
        if weights is not None:
            raise InputError("the euclidean method takes points only; drop 'weights' or use stieltjes")
        rc = reconstruct_euclidean(points)
    else:
        m = DiscreteMeasure(points, weights) if weights is not None else pst_weights(points)
        rc = reconstruct_stieltjes(m)
    sys.stdout.write(dumps(_rc_payload(rc, method=args.method, mirror_residual=mirror_residual(rc))))
    return 0


def cmd_verify(args) -> int:
    fixture = None
    if args.fixture:
        fixture = _load_json(args.fixture)
        for key in ("b", "j"):
            if key not in fixture:
                raise InputError(f"{args.fixture}: fixture needs '{key}'")
    report = verify_mod.run(args.suite, args.n_max, fixture)
    sys.stdout.write(dumps(report))
    if not report["passed"]:
        print("failed checks: " + ", ".join(report["failed"]), file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pstchains", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="bi-lattice points, weights and PST time")
    _chain_flags(p)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--shift", type=float, default=0.0)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("coeffs", help="recurrence coefficients b and couplings j")
    _chain_flags(p)
    p.add_argument("--odd-chain", action="store_true", help="chain with x_N removed")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("fidelity", help="transfer amplitude as CSV")
    _chain_flags(p)
    p.add_argument("--odd-chain", action="store_true")
    when = p.add_mutually_exclusive_group(required=True)
    when.add_argument("--time", type=float)
    when.add_argument("--scan", metavar="T0:T1:STEPS")
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--target", type=int, default=None, help="defaults to the last site")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("reconstruct", help="Jacobi data from a spectrum file")
    p.add_argument("--spectrum", required=True, help='JSON {"points": [...], "weights": [...]?}')
    p.add_argument("--method", choices=("stieltjes", "euclidean"), default="stieltjes")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", choices=("all",) + verify_mod.SUITES, default="all")
    p.add_argument("--n-max", type=int, default=31)
    p.add_argument("--fixture", help="JSON {points, weights?, b, j} checked by the ortho suite")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except InputError as exc:
        print(f"pstchains: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, IndexError, KeyError, TypeError) as exc:
        print(f"pstchains: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
