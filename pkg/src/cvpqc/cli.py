"""Command-line front end: sweeps, figure-data reproduction, verification.

Outputs are plot-ready CSV (or JSON validating against the shipped
schema); no plotting dependency.  Exit codes: 0 success, 1 verification
failure, 2 input validation, 3 internal consistency / oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .distances import (
    ConsistencyError,
    exact_key_bits,
    hs2_exact,
    hs2_guess,
    hs2_simplified,
    key_bits,
    trace_cross,
    trace_phi_sq,
    trace_unit_sq,
)
from .ensembles import ChannelSpec, maximally_mixed, phi_n, circle_mixture
from .fockspace import CutoffPolicy, hs_distance_numeric
from .holevo import (
    DEFAULT_QUAD,
    QuadratureConvergenceError,
    QuadratureSettings,
    holevo_curve,
    off_diagonal_check,
)
from .optimizer import find_rmin, saturation_sweep
from .specialfns import (
    DEFAULT_TOL,
    ArgumentRangeError,
    SeriesTolerance,
    bessel_i,
    bessel_sum,
)

ORACLE_TOL = 1e-8
ORACLE_TAIL_BUDGET = 1e-12

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_BAD_INPUT = 2
EXIT_INCONSISTENT = 3


def default_tolerance() -> SeriesTolerance:
    """Package default, overridable through the CVPQC_EPS env var."""
    eps = os.environ.get("CVPQC_EPS")
    if eps is None:
        return DEFAULT_TOL
    return SeriesTolerance(eps_abs=float(eps))


def parse_grid(text: str) -> list[float]:
    """Accepts 'start:stop:step' or a comma list of values."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError(f"grid step must be positive, got {step}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    return [float(p) for p in text.split(",") if p.strip()]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_rows(columns, rows, out, fmt, command):
    if fmt == "csv":
        lines = [",".join(columns)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        out.write("\n".join(lines) + "\n")
    else:
        doc = {
            "command": command,
            "rows": [dict(zip(columns, row)) for row in rows],
        }
        json.dump(doc, out, indent=2, default=_fmt)
        out.write("\n")


def write_json_log(path, args, tol, extra=None):
    log = {
        "package_version": __version__,
        "numpy_version": np.__version__,
        "eps_abs": tol.eps_abs,
        "max_terms": tol.max_terms,
        "argv": {k: v for k, v in vars(args).items() if k != "func"},
    }
    if extra:
        log.update(extra)
    with open(path, "w") as fh:
        json.dump(log, fh, indent=2, default=str)
        fh.write("\n")


def numeric_d2(b: float, n_circles: int) -> float:
    """Matrix-oracle squared distance at the tight oracle tail budget."""
    cutoff = CutoffPolicy(max_radius=b, tail_budget=ORACLE_TAIL_BUDGET)
    unit = maximally_mixed(b, cutoff)
    mix = phi_n(ChannelSpec(b=b, n_circles=n_circles), cutoff)
    return hs_distance_numeric(unit, mix) ** 2


# ---------------------------------------------------------------------------
# commands


def cmd_distance(args, tol, out) -> int:
    rows = []
    mismatch = False
    for b in args.b:
        for n in args.N:
            rep = hs2_exact(b, n, tol)
            d2_num = None
            if args.with_oracle:
                d2_num = numeric_d2(b, n)
                if abs(rep.d2_exact - d2_num) > ORACLE_TOL:
                    mismatch = True
            rows.append(
                (b, n, rep.d2_exact, rep.d2_guess, d2_num,
                 rep.tr_unit2, rep.tr_cross, rep.tr_phi2)
            )
    write_rows(
        ["b", "N", "d2_exact", "d2_guess", "d2_numeric",
         "tr_unit2", "tr_cross", "tr_phi2"],
        rows, out, args.format, "distance",
    )
    if mismatch:
        print("oracle mismatch beyond tolerance", file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_keybits(args, tol, out) -> int:
    exact = exact_key_bits(args.N) if args.N else None
    rows = [(args.d_hs, key_bits(args.d_hs), args.N, exact)]
    write_rows(
        ["d_hs", "approx_bits", "N", "exact_bits"], rows, out, args.format, "keybits"
    )
    return EXIT_OK


def cmd_simplified(args, tol, out) -> int:
    d2 = hs2_simplified(args.b, args.p, args.r, tol)
    d2_num = None
    mismatch = False
    if args.with_oracle:
        cutoff = CutoffPolicy(max_radius=args.b, tail_budget=ORACLE_TAIL_BUDGET)
        unit = maximally_mixed(args.b, cutoff)
        circ = circle_mixture(args.p, args.r, cutoff)
        d2_num = hs_distance_numeric(unit, circ) ** 2
        mismatch = abs(d2 - d2_num) > ORACLE_TOL
    write_rows(
        ["b", "p", "r", "d2_simplified", "d2_numeric"],
        [(args.b, args.p, args.r, d2, d2_num)],
        out, args.format, "simplified",
    )
    if mismatch:
        print("oracle mismatch beyond tolerance", file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_rmin(args, tol, out) -> int:
    rows = []
    for b in args.b:
        res = find_rmin(b, tol)
        rows.append((b, res.r_min, res.residual, res.method))
    write_rows(["b", "r_min", "residual", "method"], rows, out, args.format, "rmin")
    return EXIT_OK


def cmd_saturation(args, tol, out) -> int:
    res = saturation_sweep(args.b, args.p_max, tol, args.saturation_tol)
    rows = [(args.b, p, r, d2, res.p_sat) for p, r, d2 in res.curve]
    write_rows(
        ["b", "p", "r_at_min", "d2_min", "p_sat"], rows, out, args.format, "saturation"
    )
    return EXIT_OK


def cmd_holevo(args, tol, out) -> int:
    quad = QuadratureSettings(order_xy=args.order, phi_points=args.phi_points)
    curve = holevo_curve(args.b_grid, quad, tol=tol)
    rows = [
        (b, chi, spec.quad_error, spec.dim)
        for (b, chi), spec in zip(curve.samples, curve.spectra)
    ]
    write_rows(
        ["b", "chi_bits", "quad_error", "dim"], rows, out, args.format, "holevo"
    )
    for b, msg in curve.failures:
        print(f"b={b}: {msg}", file=sys.stderr)
    return EXIT_INCONSISTENT if curve.failures else EXIT_OK


def cmd_figures(args, tol, out) -> int:
    if args.which == "fig1a":
        res = saturation_sweep(args.b, args.p_max, tol)
        rows = [(p, r, d2) for p, r, d2 in res.curve]
        write_rows(["p", "r_min", "d2_min"], rows, out, args.format, "fig1a")
    elif args.which == "fig1b":
        grid = args.b_grid or parse_grid("0.5:7:0.5")
        rows = [(b, find_rmin(b, tol).r_min) for b in grid]
        write_rows(["b", "r_min"], rows, out, args.format, "fig1b")
    else:  # fig2
        grid = args.b_grid or parse_grid("0.5:4:0.5")
        quad = QuadratureSettings(order_xy=args.order, phi_points=args.phi_points)
        curve = holevo_curve(grid, quad, tol=tol)
        rows = [
            (b, chi, spec.quad_error, spec.dim)
            for (b, chi), spec in zip(curve.samples, curve.spectra)
        ]
        write_rows(["b", "chi_bits", "quad_error", "dim"], rows, out, args.format, "fig2")
        if curve.failures:
            for b, msg in curve.failures:
                print(f"b={b}: {msg}", file=sys.stderr)
            return EXIT_INCONSISTENT
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suites


def _check(out, results, name, ok, detail=""):
    results.append(ok)
    status = "PASS" if ok else "FAIL"
    suffix = f": {detail}" if (detail and not ok) else ""
    out.write(f"{status} {name}{suffix}\n")


def verify_identities(out, tol, results):
    for x in (0.5, 1.0, 2.0, 4.0, 8.0):
        lhs = math.exp(-x) * (bessel_i(0, x, tol) + 2.0 * bessel_sum(1, x, tol))
        _check(out, results, f"bessel-identity x={x}", abs(lhs - 1.0) < 1e-12,
               f"deviation {abs(lhs - 1.0):.3e}")
    # two-variable form: I_0(2xy) + 2 sum_k I_k(2xy) = e^(2xy)
    for x in (0.6, 1.2, 1.8, 2.4, 3.0):
        for y in (0.6, 1.2, 1.8, 2.4, 3.0):
            arg = 2.0 * x * y
            lhs = math.exp(-arg) * (
                bessel_i(0, arg, tol) + 2.0 * bessel_sum(1, arg, tol)
            )
            _check(out, results, f"bessel-identity-2 x={x} y={y}",
                   abs(lhs - 1.0) < 1e-12, f"deviation {abs(lhs - 1.0):.3e}")


def verify_oracles(out, tol, results, quick=False):
    bs = (1.0, 2.0) if quick else (0.5, 1.0, 2.0)
    ns = (1, 3) if quick else (1, 2, 3, 4, 5, 6)
    for b in bs:
        cutoff = CutoffPolicy(max_radius=b, tail_budget=ORACLE_TAIL_BUDGET)
        unit = maximally_mixed(b, cutoff)
        tu_num = float(np.trace(unit.mat @ unit.mat).real)
        tu = trace_unit_sq(b, tol)
        _check(out, results, f"trace-unit-sq b={b}", abs(tu - tu_num) < 1e-9,
               f"analytic {tu} vs matrix {tu_num}")
        for n in ns:
            mix = phi_n(ChannelSpec(b=b, n_circles=n), cutoff)
            tc_num = float(np.trace(unit.mat @ mix.mat).real)
            tp_num = float(np.trace(mix.mat @ mix.mat).real)
            tc = trace_cross(b, n, tol)
            tp = trace_phi_sq(b, n, tol)
            _check(out, results, f"trace-cross b={b} N={n}",
                   abs(tc - tc_num) < 1e-9, f"analytic {tc} vs matrix {tc_num}")
            _check(out, results, f"trace-phi-sq b={b} N={n}",
                   abs(tp - tp_num) < 1e-9, f"analytic {tp} vs matrix {tp_num}")
            d2 = hs2_exact(b, n, tol).d2_exact
            d2_num = hs_distance_numeric(unit, mix) ** 2
            _check(out, results, f"hs2-exact b={b} N={n}",
                   abs(d2 - d2_num) < ORACLE_TOL,
                   f"analytic {d2} vs matrix {d2_num}")
    b, p, r = 2.0, 4, 1.0
    cutoff = CutoffPolicy(max_radius=b, tail_budget=ORACLE_TAIL_BUDGET)
    d2 = hs2_simplified(b, p, r, tol)
    d2_num = hs_distance_numeric(
        maximally_mixed(b, cutoff), circle_mixture(p, r, cutoff)
    ) ** 2
    _check(out, results, f"hs2-simplified b={b} p={p} r={r}",
           abs(d2 - d2_num) < ORACLE_TOL, f"analytic {d2} vs matrix {d2_num}")


def verify_limits(out, tol, results):
    b = 1.0
    cutoff = CutoffPolicy(max_radius=b, tail_budget=1e-12)
    unit_diag = np.diag(maximally_mixed(b, cutoff).mat).real
    n_keep = min(21, cutoff.dim)
    prev = None
    out.write("# convergence of the N-circle mixture diagonal to the disk state\n")
    out.write("# N, max |Phi_N(n,n) - unit(n,n)| over n <= 20\n")
    final = None
    monotone = True
    for n_circ in (5, 10, 20, 40, 80):
        mix_diag = np.diag(phi_n(ChannelSpec(b=b, n_circles=n_circ), cutoff).mat).real
        dev = float(np.abs(mix_diag[:n_keep] - unit_diag[:n_keep]).max())
        out.write(f"# {n_circ}, {dev!r}\n")
        if prev is not None and dev > prev:
            monotone = False
        prev = dev
        final = dev
    _check(out, results, "diagonal-limit monotone", monotone)
    _check(out, results, "diagonal-limit N=80 below 5e-3", final < 5e-3,
           f"deviation {final:.3e}")
    first = (1.0 - math.exp(-b * b)) / (b * b)
    _check(out, results, "disk-state first diagonal closed form",
           abs(unit_diag[0] - first) < 1e-13)
    _check(out, results, "purity b->0 limit",
           abs(trace_unit_sq(1e-3, tol) - 1.0) < 1e-5)


def verify_diagonality(out, tol, results, samples, seed):
    est = off_diagonal_check(0.5, samples, seed=seed)
    _check(out, results, f"lambda-diagonality b=0.5 samples={samples}",
           est.max_abs < 5.0 * est.stderr,
           f"max off-diagonal {est.max_abs:.3e}, stderr {est.stderr:.3e}")


def cmd_verify(args, tol, out) -> int:
    results = []
    if args.suite in ("identities", "all"):
        verify_identities(out, tol, results)
    if args.suite in ("oracles", "all"):
        verify_oracles(out, tol, results, quick=args.quick)
    if args.suite in ("limits", "all"):
        verify_limits(out, tol, results)
    if args.suite == "all":
        samples = 20_000 if args.quick else args.mc_samples
        verify_diagonality(out, tol, results, samples, args.seed)
    passed = sum(results)
    out.write(f"# {passed}/{len(results)} checks passed\n")
    return EXIT_OK if all(results) else EXIT_VERIFY_FAIL


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvpqc",
        description="Continuous-variable private-channel numerics: "
        "distances, optimal radii, Holevo bounds.",
    )
    parser.add_argument("--out", default="-", help="output path ('-' for stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--json-log", default=None, metavar="PATH",
                        help="write per-run provenance JSON to PATH")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", help="exact/approximate squared HS distance")
    p.add_argument("--b", type=parse_grid, required=True)
    p.add_argument("--N", type=lambda s: [int(x) for x in parse_grid(s)], required=True)
    p.add_argument("--with-oracle", action="store_true")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("keybits", help="key-length estimate from a distance")
    p.add_argument("--d-hs", type=float, required=True)
    p.add_argument("--N", type=int, default=None)
    p.set_defaults(func=cmd_keybits)

    p = sub.add_parser("simplified", help="simplified-protocol distance")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--with-oracle", action="store_true")
    p.set_defaults(func=cmd_simplified)

    p = sub.add_parser("rmin", help="optimal displacement radius")
    p.add_argument("--b", type=parse_grid, required=True)
    p.set_defaults(func=cmd_rmin)

    p = sub.add_parser("saturation", help="phase-shift saturation sweep")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--p-max", type=int, default=20)
    p.add_argument("--saturation-tol", type=float, default=1e-4)
    p.set_defaults(func=cmd_saturation)

    p = sub.add_parser("holevo", help="Holevo bound over a b grid")
    p.add_argument("--b-grid", type=parse_grid, required=True)
    p.add_argument("--order", type=int, default=DEFAULT_QUAD.order_xy)
    p.add_argument("--phi-points", type=int, default=DEFAULT_QUAD.phi_points)
    p.set_defaults(func=cmd_holevo)

    p = sub.add_parser("figures", help="figure-data reproduction")
    p.add_argument("which", choices=("fig1a", "fig1b", "fig2"))
    p.add_argument("--b", type=float, default=2.0)
    p.add_argument("--p-max", type=int, default=20)
    p.add_argument("--b-grid", type=parse_grid, default=None)
    p.add_argument("--order", type=int, default=DEFAULT_QUAD.order_xy)
    p.add_argument("--phi-points", type=int, default=DEFAULT_QUAD.phi_points)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("verify", help="invariant and oracle suites")
    p.add_argument("suite", choices=("identities", "oracles", "limits", "all"))
    p.add_argument("--quick", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mc-samples", type=int, default=100_000)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        tol = default_tolerance()
    except ValueError as exc:
        print(f"bad CVPQC_EPS: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    close_out = args.out != "-"
    out = open(args.out, "w") if close_out else sys.stdout
    try:
        code = args.func(args, tol, out)
    except (ValueError, ArgumentRangeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        code = EXIT_BAD_INPUT
    except (ConsistencyError, QuadratureConvergenceError) as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        code = EXIT_INCONSISTENT
    finally:
        if close_out:
            out.close()
    if args.json_log:
        write_json_log(args.json_log, args, tol)
    return code


if __name__ == "__main__":
    sys.exit(main())
