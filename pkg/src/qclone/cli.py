"""Command-line driver.

Usage:
    qclone fidelity --n 1 --m 2..6            fidelity table
    qclone ccm --m 2,8,16,32,64,128 [--mc]    QCM -> CCM convergence sweep
    qclone bound --n 1..7 --m 2..12           optimality-bound audit
    qclone clone --theta 0.3 --phi 1.2 --n 1 --m 4

Reports go to stdout (or ``--out-file``), diagnostics to stderr. Exit codes:
0 success, 1 failed check, 2 usage error, 3 validation error.
"""

from __future__ import annotations

import argparse
import platform
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .bloch import GENERATOR_NAME, Qubit, amplitudes
from .ccm import (
    ccm_density_montecarlo,
    qcm_ccm_distance,
    qcm_ccm_distance_exact,
    qcm_ccm_trace_distance_exact,
    scaling_study,
)
from .errors import DomainError, ValidationError
from .optimality import QUAD_PHI_NODES, QUAD_THETA_NODES, build_A_general, lambda_max
from .qcm import (
    alpha,
    average_fidelity_mc,
    bloch_vector,
    clone_density,
    error_distribution,
    fidelity_formula,
    fidelity_limit,
    single_clone_density,
    single_clone_fidelity,
)
from .report import Check, ExperimentReport, fraction_str, to_csv, to_json

#: Above this many clones the dense-matrix columns are skipped.
NUMERIC_MAX_M = 256
#: Above this many clones Monte Carlo columns are skipped.
MC_MAX_M = 64

TOL_EXACT = 1e-12
TOL_BOUND = 1e-10
SLOPE_RANGE = (-3.4, -2.6)


def parse_range(text: str) -> list[int]:
    """``"5"``, ``"2..6"`` (inclusive) or ``"8,16,32"``."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        values = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}") from None
    if sorted(set(values)) != values:
        raise argparse.ArgumentTypeError(f"list must be strictly increasing: {text!r}")
    return values


def _metadata(args, **extra) -> dict:
    meta = {
        "package_version": __version__,
        "numpy_version": np.__version__,
        "python_version": platform.python_version(),
        "seed": getattr(args, "seed", None),
        "generator": GENERATOR_NAME,
        "tolerances": {"exact": TOL_EXACT, "bound": TOL_BOUND},
    }
    meta.update(extra)
    return meta


# -- commands -------------------------------------------------------------------

def cmd_fidelity(args) -> ExperimentReport:
    rows, checks = [], []
    for n in args.n:
        prev = None
        for m in args.m:
            if m < n:
                continue
            exact = fidelity_formula(n, m)
            row = {
                "n": n,
                "m": m,
                "F_exact": fraction_str(exact),
                "F_float": float(exact),
                "F_numeric": None,
                "F_mc": None,
                "F_mc_stderr": None,
                "limit_exact": fraction_str(fidelity_limit(n)),
                "limit": float(fidelity_limit(n)),
            }
            if n < m <= NUMERIC_MAX_M:
                numeric = single_clone_fidelity(Qubit.up(), n, m)
                row["F_numeric"] = numeric
                checks.append(Check(f"numeric_vs_formula[n={n},m={m}]",
                                    abs(numeric - float(exact)) < TOL_EXACT,
                                    abs(numeric - float(exact)), TOL_EXACT))
            if args.trials > 0 and n < m <= MC_MAX_M:
                est = average_fidelity_mc(n, m, args.trials, args.seed)
                row["F_mc"], row["F_mc_stderr"] = est.mean, est.stderr
            if prev is not None:
                checks.append(Check(f"decreasing_in_m[n={n},m={m}]", exact < prev, kind="acceptance"))
            prev = exact
            rows.append(row)
    if not rows:
        raise DomainError("no (n, m) pairs with n <= m in the requested ranges")
    return ExperimentReport(
        "fidelity", {"n": args.n, "m": args.m, "trials": args.trials, "seed": args.seed},
        rows, _metadata(args), checks=checks,
    )


def cmd_ccm(args) -> ExperimentReport:
    if min(args.m) < 2:
        raise DomainError("ccm sweep needs m >= 2")
    psi = Qubit(args.theta, args.phi)
    rows = []
    checks = []
    for m in args.m:
        exact = qcm_ccm_distance_exact(m)
        row = {
            "m": m,
            "distance_exact": fraction_str(exact),
            "distance": float(exact),
            "distance_matrix": None,
            "trace_distance": float(qcm_ccm_trace_distance_exact(m)),
            "distance_times_m3": float(exact * m**3),
        }
        if m <= NUMERIC_MAX_M:
            d = qcm_ccm_distance(m, psi)
            row["distance_matrix"] = d
            checks.append(Check(f"matrix_vs_exact[m={m}]", abs(d - float(exact)) < TOL_EXACT,
                                abs(d - float(exact)), TOL_EXACT))
        if args.mc:
            row["distance_mc"] = None
            if m <= MC_MAX_M:
                est = ccm_density_montecarlo(psi, m, args.trials, args.seed + m)
                delta = clone_density(psi, 1, m) - est.rho
                row["distance_mc"] = float(np.real(np.trace(delta @ delta)))
        rows.append(row)
    summary = {}
    fit_points = [m for m in args.m if m >= args.fit_min]
    if len(fit_points) >= 3:
        fit = scaling_study(args.m, m_min=args.fit_min)
        summary = {
            "fitted_slope": fit.fitted_slope,
            "fit_residual": fit.fit_residual,
            "fit_intercept": fit.intercept,
            "fit_m_values": fit.m_values,
            "fit_excluded": fit.excluded,
            "fit_m_min": fit.m_min,
        }
        lo, hi = SLOPE_RANGE
        checks.append(Check("slope_in_range", lo <= fit.fitted_slope <= hi,
                            fit.fitted_slope, list(SLOPE_RANGE), kind="acceptance"))
    params = {"m": args.m, "theta": args.theta, "phi": args.phi, "mc": args.mc,
              "trials": args.trials, "seed": args.seed, "fit_min": args.fit_min}
    return ExperimentReport("ccm", params, rows, _metadata(args), summary, checks)


def cmd_bound(args) -> ExperimentReport:
    rows, checks = [], []
    for n in args.n:
        for m in args.m:
            if m <= n:
                continue
            a = build_A_general(n, m).entries
            if args.perturb:
                a = a.copy()
                a[0, -1] += args.perturb
            lam = lambda_max(a)
            bound = (n + 1) * lam
            achieved = fidelity_formula(n, m)
            gap = bound - float(achieved)
            rows.append({
                "n": n, "m": m, "lambda_max": lam, "bound": bound,
                "F_formula": fraction_str(achieved), "F_float": float(achieved), "gap": gap,
            })
            checks.append(Check(f"gap[n={n},m={m}]", abs(gap) < TOL_BOUND, gap, TOL_BOUND,
                                kind="acceptance"))
    if not rows:
        raise DomainError("no (n, m) pairs with n < m in the requested ranges")
    quad = {"theta_nodes": QUAD_THETA_NODES, "theta_rule": "gauss-legendre in cos(theta)",
            "phi_nodes": QUAD_PHI_NODES, "phi_rule": "trapezoid"}
    params = {"n": args.n, "m": args.m, "perturb": args.perturb}
    return ExperimentReport("bound", params, rows, _metadata(args, quadrature=quad), checks=checks)


def cmd_clone(args) -> ExperimentReport:
    if args.out == "csv":
        raise DomainError("clone reports are JSON only")
    n, m = args.n, args.m
    psi = Qubit(args.theta, args.phi)
    coeffs = alpha(n, m)
    errs = error_distribution(n, m)
    rho1 = single_clone_density(psi, n, m)
    fid = single_clone_fidelity(psi, n, m)
    exact = fidelity_formula(n, m)
    amps = amplitudes(psi)
    rows = [{
        "n": n, "m": m,
        "theta": psi.theta, "phi": psi.phi,
        "input_amplitudes": [[amps.up.real, amps.up.imag], [amps.down.real, amps.down.imag]],
        "alpha": coeffs.alpha.tolist(),
        "alpha_squared": [fraction_str(w) for w in coeffs.weights],
        "error_distribution": [float(p) for p in errs],
        "error_distribution_exact": [fraction_str(p) for p in errs],
        "bloch_vector": bloch_vector(rho1).tolist(),
        "fidelity": fid,
        "fidelity_exact": fraction_str(exact),
    }]
    checks = [
        Check("fidelity_matches_formula", abs(fid - float(exact)) < TOL_EXACT,
              abs(fid - float(exact)), TOL_EXACT),
        Check("error_distribution_sums_to_one", sum(errs, Fraction(0)) == 1),
    ]
    params = {"theta": args.theta, "phi": args.phi, "n": n, "m": m}
    return ExperimentReport("clone", params, rows, _metadata(args), checks=checks)


# -- parser -----------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, seed: bool = True) -> None:
    p.add_argument("--out", choices=("json", "csv"), default="json")
    p.add_argument("--out-file", default=None)
    p.add_argument("--strict", action="store_true",
                   help="turn acceptance checks into exit-code failures")
    p.add_argument("--timing", action="store_true",
                   help="record wall time in the metadata (breaks byte-identical reruns)")
    if seed:
        p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qclone", description="Optimal universal quantum cloning machines.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fidelity", help="clone fidelity table")
    p.add_argument("--n", type=parse_range, default=[1])
    p.add_argument("--m", type=parse_range, default=[2])
    p.add_argument("--trials", type=int, default=200, help="Monte Carlo samples (0 disables)")
    _common(p)
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("ccm", help="QCM vs classical copying machine sweep (one input qubit)")
    p.add_argument("--m", type=parse_range, default=[2, 4, 8, 16, 32, 64, 128])
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--mc", action="store_true", help="add a Monte Carlo CCM distance column")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--fit-min", type=int, default=8, help="smallest m used in the slope fit")
    _common(p)
    p.set_defaults(func=cmd_ccm)

    p = sub.add_parser("bound", help="eigenvalue bound audit")
    p.add_argument("--n", type=parse_range, default=[1])
    p.add_argument("--m", type=parse_range, default=[2])
    p.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    _common(p, seed=False)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("clone", help="apply the cloner to one input state (JSON only)")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m", type=int, required=True)
    _common(p, seed=False)
    p.set_defaults(func=cmd_clone)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) < 0:
        parser.error("--trials must be non-negative")
    if getattr(args, "command", None) == "ccm" and args.mc and args.trials < 1:
        parser.error("--mc needs --trials >= 1")
    start = time.perf_counter()
    try:
        report = args.func(args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, IndexError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    if args.timing:
        report.metadata["wall_time_s"] = time.perf_counter() - start
    text = to_csv(report) if args.out == "csv" else to_json(report)
    if args.out_file:
        with open(args.out_file, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failed = report.failed(strict=args.strict)
    for c in failed:
        print(f"check failed: {c.name} (value={c.value}, tolerance={c.tolerance})", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
