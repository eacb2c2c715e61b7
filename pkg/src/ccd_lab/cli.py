"""Command-line front end.

Exit codes: 0 success, 1 bad input, 2 a numerical residual above tolerance,
3 a violated theorem check (which indicates a bug, not bad input).
"""
from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np
from scipy.optimize import linear_sum_assignment

from .capacity import (
    capacity,
    capacity_monotonicity_check,
    concurrence_spectrum,
    half_plane_probability,
    hull_contains_zero,
    maximal_capacity_fraction,
    witness_defects,
)
from .ccd import a_form_defect, ccd, polar_time_reversal
from .errors import CcdLabError
from .examples import STATES, UNITARIES, chain_spec
from .io import complex_list, dumps_csv, dumps_report, matrix_to_json, read_matrix
from .linalg import DEFAULT_TOL, Tolerances, dagger, num_qubits, random_special_unitary
from .spinchain import (
    build_hamiltonian,
    crossing_field,
    ground_state_concurrence_sweep,
    kramers_report,
    tmin_sweep,
)
from .spinflip import cartan_involution, concurrence, concurrence_symmetry_defect
from .symplectic import (
    block_structure_defect,
    random_j_skew_hermitian,
    symplectic_eig,
)

EXIT_OK, EXIT_INPUT, EXIT_RESIDUAL, EXIT_THEOREM = 0, 1, 2, 3


class CommandFailure(Exception):
    def __init__(self, code: int, message: str, report: dict | None = None):
        super().__init__(message)
        self.code = code
        self.report = report


def parse_range(text: str) -> list[float]:
    """'start:step:stop' (inclusive stop) or a comma-separated list of values."""
    if ":" in text:
        try:
            start, step, stop = (float(x) for x in text.split(":"))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad range {text!r}; expected start:step:stop") from None
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError("range needs step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        # round away the accumulated binary noise of start + k*step
        return [round(start + k * step, 12) for k in range(count)]
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad value list {text!r}") from None


def _tolerances(args) -> Tolerances:
    return Tolerances(
        herm=DEFAULT_TOL.herm,
        unitary=args.tol_unitary,
        cluster=args.tol_cluster,
        hull=args.tol_hull,
    )


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("CCD_LAB_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def _load_unitary(args) -> np.ndarray:
    sources = [args.input is not None, args.random, args.example is not None]
    if sum(sources) != 1:
        raise CommandFailure(EXIT_INPUT, "give exactly one of --input, --random, --example")
    if args.input is not None:
        v = read_matrix(args.input)
        if args.n is not None and num_qubits(v.shape[0]) != args.n:
            raise CommandFailure(EXIT_INPUT, f"--n {args.n} does not match a {v.shape[0]}x{v.shape[0]} matrix")
        return v
    if args.n is None:
        raise CommandFailure(EXIT_INPUT, "--n is required with --random or --example")
    if args.random:
        return random_special_unitary(1 << args.n, args.seed)
    if args.example not in UNITARIES:
        raise CommandFailure(EXIT_INPUT, f"unknown example {args.example!r}; choose from {sorted(UNITARIES)}")
    t = args.t if args.t is not None else math.pi / 4
    return UNITARIES[args.example](args.n, t)


# --- commands ------------------------------------------------------------------

def cmd_ccd(args) -> dict:
    tol = _tolerances(args)
    v = _load_unitary(args)
    f = ccd(v, tol=tol)
    bound = 1e-9 * 2 ** (f.n / 2)
    report = {
        "command": "ccd",
        "n": f.n,
        "parity": f.parity,
        "residual": f.residual,
        "phase": f.phase,
        "spec_a2": complex_list(f.a_squared_spectrum()),
        "k1_defect": concurrence_symmetry_defect(f.k1),
        "k2_defect": concurrence_symmetry_defect(f.k2),
        "a_form_defect": a_form_defect(f),
    }
    if args.factors:
        report["k1"] = matrix_to_json(f.k1)
        report["a"] = matrix_to_json(f.a)
        report["k2"] = matrix_to_json(f.k2)
    if f.residual > bound:
        raise CommandFailure(EXIT_RESIDUAL, f"reconstruction residual {f.residual:.3e} exceeds {bound:.3e}", report)
    if args.verify:
        worst = max(report["k1_defect"], report["k2_defect"], report["a_form_defect"])
        if worst > 1e-9:
            raise CommandFailure(EXIT_RESIDUAL, f"factor structure defect {worst:.3e}", report)
        spec = concurrence_spectrum(v, tol=tol)
        gap = _multiset_gap(spec.points, f.a_squared_spectrum())
        report["verify"] = {"spectrum_vs_a2": gap}
        if gap > 1e-8:
            raise CommandFailure(EXIT_RESIDUAL, f"spec(a^2) differs from the concurrence spectrum by {gap:.3e}", report)
    return report


def _multiset_gap(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def _spectrum_report(spec) -> dict:
    out = {"n": spec.n, "parity": spec.parity, "points": complex_list(spec.points)}
    if spec.reduced_points is not None:
        out["reduced"] = complex_list(spec.reduced_points)
    return out


def cmd_spectrum(args) -> dict:
    tol = _tolerances(args)
    v = _load_unitary(args)
    spec = concurrence_spectrum(v, tol=tol)
    report = {"command": "spectrum", **_spectrum_report(spec)}
    if args.verify:
        gap = _multiset_gap(spec.points, ccd(v, tol=tol).a_squared_spectrum())
        report["verify"] = {"spectrum_vs_a2": gap}
        if gap > 1e-8:
            raise CommandFailure(EXIT_RESIDUAL, f"spectrum differs from spec(a^2) by {gap:.3e}", report)
    return report


def cmd_capacity(args) -> dict:
    tol = _tolerances(args)
    v = _load_unitary(args)
    spec = concurrence_spectrum(v, tol=tol)
    value, w = capacity(v, tol=tol)
    maximal = hull_contains_zero(spec.hull_points, tol.hull)
    report = {
        "command": "capacity",
        **_spectrum_report(spec),
        "capacity": value,
        "maximal": maximal,
        "witness": {
            "beta": complex_list(w.beta),
            "lambdas": complex_list(w.lambdas),
            "value": w.value,
            "phi": complex_list(w.phi),
            "psi": complex_list(w.psi),
        },
    }
    if maximal != (value >= 1 - 1e-7):
        raise CommandFailure(EXIT_THEOREM, f"hull test says {maximal} but capacity is {value:.12g}", report)
    if args.verify:
        norm, ortho, gap = witness_defects(v, w)
        report["verify"] = {"norm": norm, "form_orthogonality": ortho, "achieved_gap": gap,
                            "value_vs_witness": abs(value - w.value)}
        if norm > 1e-9 or ortho > 1e-9 or abs(gap) > 1e-6 or abs(value - w.value) > 1e-6:
            raise CommandFailure(EXIT_RESIDUAL, "capacity witness failed its checks", report)
        mono = capacity_monotonicity_check(v, tol=tol)
        report["verify"]["kappa_with_ancilla"] = mono.kappa_n_plus_1
        if mono.violation:
            raise CommandFailure(EXIT_THEOREM, "capacity decreased after appending a qubit", report)
    return report


def cmd_polar(args) -> dict:
    tol = _tolerances(args)
    v = _load_unitary(args)
    pf = polar_time_reversal(v, tol)
    xp, xk = 1j * pf.Hp, 1j * pf.Hk
    p_defect = float(np.linalg.norm(cartan_involution(xp, check=False) + xp))
    k_defect = float(np.linalg.norm(cartan_involution(xk, check=False) - xk))
    report = {"command": "polar", "n": num_qubits(v.shape[0]), "residual": pf.residual,
              "p_defect": p_defect, "k_defect": k_defect}
    if args.factors:
        report["Hp"] = matrix_to_json(pf.Hp)
        report["Hk"] = matrix_to_json(pf.Hk)
    worst = max(pf.residual, p_defect, k_defect)
    if worst > 1e-9:
        raise CommandFailure(EXIT_RESIDUAL, f"polar factors off by {worst:.3e}", report)
    return report


def cmd_symeig(args) -> dict:
    tol = _tolerances(args)
    if (args.input is None) == (not args.random):
        raise CommandFailure(EXIT_INPUT, "give exactly one of --input, --random")
    if args.input is not None:
        h = read_matrix(args.input)
    else:
        if args.ell is None or args.ell < 1:
            raise CommandFailure(EXIT_INPUT, "--ell (>= 1) is required with --random")
        h = random_j_skew_hermitian(args.ell, args.seed).full()
    res = symplectic_eig(h, tol)
    w = res.W
    scale = max(1.0, float(np.linalg.norm(h)))
    report = {
        "command": "symeig",
        "ell": h.shape[0] // 2,
        "eigenvalues": res.eigenvalues.tolist(),
        "residual": res.residual,
        "relative_residual": res.residual / scale,
        "unitarity_defect": float(np.linalg.norm(dagger(w) @ w - np.eye(w.shape[0]))),
        "block_defect": block_structure_defect(w),
        "clusters": [list(c) for c in res.clusters],
    }
    if report["relative_residual"] > 1e-10 or report["unitarity_defect"] > 1e-10:
        raise CommandFailure(EXIT_RESIDUAL, "eigen-decomposition residual above tolerance", report)
    if args.verify:
        ref = np.linalg.eigvalsh(h)
        gap = float(np.max(np.abs(np.repeat(res.eigenvalues, 2) - ref)))
        report["verify"] = {"vs_generic_solver": gap}
        if gap > 1e-10 * scale:
            raise CommandFailure(EXIT_RESIDUAL, f"eigenvalues differ from a generic solver by {gap:.3e}", report)
    return report


def cmd_concurrence(args) -> dict:
    if args.example not in STATES:
        raise CommandFailure(EXIT_INPUT, f"unknown state {args.example!r}; choose from {sorted(STATES)}")
    if args.n is None and args.example != "w4":
        raise CommandFailure(EXIT_INPUT, "--n is required")
    psi = STATES[args.example](args.n or 4)
    return {"command": "concurrence", "state": args.example, "n": num_qubits(psi.size),
            "concurrence": concurrence(psi)}


def cmd_mc_capacity(args) -> dict:
    est = maximal_capacity_fraction(args.n, args.samples, args.seed, _threads(args), args.tol_hull)
    m = 1 << (args.n - 1)
    expected = 1 - half_plane_probability(m)
    report = {"command": "mc-capacity", "n": args.n, "samples": args.samples, "seed": args.seed,
              "reduced_points": m, "fraction": est.fraction, "stderr": est.stderr}
    if args.verify:
        sigma = max(math.sqrt(expected * (1 - expected) / args.samples), 1 / args.samples)
        report["verify"] = {"half_plane_oracle": expected, "z": (est.fraction - expected) / sigma}
        if abs(est.fraction - expected) > 3 * sigma:
            raise CommandFailure(EXIT_RESIDUAL, "estimate is more than 3 sigma from the half-plane oracle", report)
    return report


def _chain(args, h=None):
    return chain_spec(args.family, args.n, args.jx, args.jy, args.jz, args.g,
                      args.h_field if h is None else h, args.boundary)


def cmd_spinchain(args):
    tol = _tolerances(args)
    if args.action == "kramers":
        h_field = args.h[0] if args.h else 0.0
        ham = build_hamiltonian(_chain(args, h_field))
        rep = kramers_report(ham, tol=tol)
        report = {"command": "spinchain kramers", "family": args.family, **rep.to_dict()}
        if not rep.holds:
            raise CommandFailure(EXIT_THEOREM, "; ".join(rep.violations), report)
        return report
    if args.action == "tmin":
        jz = args.jz if args.jz else 1.0
        sw = tmin_sweep(args.n, jz, grid=args.grid, verify=args.verify, tol=tol)
        if args.format == "csv":
            return ("t", "maximal"), [(t, bool(m)) for t, m in zip(sw.times, sw.maximal)]
        report = {"command": "spinchain tmin", "n": args.n, "Jz": jz, "t_min": sw.t_min,
                  "first_maximal": sw.first_maximal, "step": sw.step, "consistent": sw.consistent}
        if not sw.consistent:
            raise CommandFailure(EXIT_THEOREM, "sweep does not flip at t_min", report)
        return report
    # sweep
    hs = args.h if args.h else parse_range("0:0.1:3")
    rows = ground_state_concurrence_sweep(args.n, args.g, hs, J=args.jx, boundary=args.boundary,
                                          threads=_threads(args), tol=tol)
    table = [(r.h, r.energy, r.degeneracy, r.sz_sector, r.concurrence) for r in rows]
    if args.format == "csv":
        return ("parameter", "ground_energy", "degeneracy", "sz_sector", "concurrence"), table
    report = {"command": "spinchain sweep", "n": args.n, "g": args.g, "J": args.jx,
              "rows": [dict(zip(("h", "ground_energy", "degeneracy", "sz_sector", "concurrence"), r))
                       for r in table]}
    try:
        report["crossing_field"] = crossing_field(args.n, args.g, args.jx, args.boundary, tol=tol)
    except CcdLabError as exc:
        report["crossing_field"] = None
        report["crossing_note"] = str(exc)
    return report


# --- parser --------------------------------------------------------------------

def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol-unitary", type=float, default=DEFAULT_TOL.unitary)
    parser.add_argument("--tol-cluster", type=float, default=DEFAULT_TOL.cluster)
    parser.add_argument("--tol-hull", type=float, default=DEFAULT_TOL.hull)
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $CCD_LAB_THREADS or 1)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--output", "-o", default=None, help="write here instead of stdout")
    parser.add_argument("--verify", action="store_true", help="run cross-checks and fail on mismatch")


def _unitary_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=None, help="qubit count")
    parser.add_argument("--input", default=None, help="matrix JSON file")
    parser.add_argument("--random", action="store_true", help="Haar-random element of SU(2^n)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--example", default=None, help=f"named unitary: {', '.join(sorted(UNITARIES))}")
    parser.add_argument("--t", type=float, default=None, help="parameter of the cphase example")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ccd-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, helptext in (
        ("ccd", cmd_ccd, "concurrence canonical decomposition v = k1 a k2"),
        ("capacity", cmd_capacity, "pairwise concurrence capacity with a witness"),
        ("spectrum", cmd_spectrum, "concurrence spectrum (and reduced spectrum)"),
        ("polar", cmd_polar, "v = exp(i Hp) exp(i Hk) time-reversal polar form"),
    ):
        p = sub.add_parser(name, help=helptext)
        _unitary_source(p)
        _common(p)
        if name in ("ccd", "polar"):
            p.add_argument("--factors", action="store_true", help="include factor matrices")
        p.set_defaults(func=func)

    p = sub.add_parser("symeig", help="structured eigensolver for J-skew-symmetric Hermitian matrices")
    p.add_argument("--input", default=None)
    p.add_argument("--random", action="store_true")
    p.add_argument("--ell", type=int, default=None, help="half dimension for --random")
    p.add_argument("--seed", type=int, default=0)
    _common(p)
    p.set_defaults(func=cmd_symeig)

    p = sub.add_parser("concurrence", help="concurrence of a named state")
    p.add_argument("--example", required=True, help=f"one of {', '.join(sorted(STATES))}")
    p.add_argument("--n", type=int, default=None)
    _common(p)
    p.set_defaults(func=cmd_concurrence)

    p = sub.add_parser("mc-capacity", help="Monte Carlo fraction of maximal-capacity a (odd n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    _common(p)
    p.set_defaults(func=cmd_mc_capacity)

    p = sub.add_parser("spinchain", help="spin-chain analyses")
    p.add_argument("action", choices=("kramers", "tmin", "sweep"))
    p.add_argument("--family", default="xy_field",
                   choices=("xxx", "xy", "xyz", "ising", "xy_field"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--jx", type=float, default=1.0)
    p.add_argument("--jy", type=float, default=1.0)
    p.add_argument("--jz", type=float, default=1.0)
    p.add_argument("--g", type=float, default=0.0)
    p.add_argument("--h", type=parse_range, default=None,
                   help="field value(s): start:step:stop or a comma list")
    p.add_argument("--boundary", choices=("periodic", "open"), default="periodic")
    p.add_argument("--grid", type=int, default=400, help="time grid size for tmin")
    _common(p)
    p.set_defaults(func=cmd_spinchain, h_field=0.0)
    return parser


def _to_csv(result) -> str:
    if isinstance(result, tuple):
        header, rows = result
        return dumps_csv(header, rows)
    flat = {k: v for k, v in result.items() if not isinstance(v, (dict, list))}
    return dumps_csv(list(flat), [list(flat.values())])


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
        code, message = EXIT_OK, None
    except CommandFailure as exc:
        result, code, message = exc.report, exc.code, str(exc)
    except (CcdLabError, ValueError, OSError) as exc:
        result, code, message = None, EXIT_INPUT, f"{type(exc).__name__}: {exc}"
    if message:
        print(f"ccd-lab: error: {message}", file=sys.stderr)
    if result is not None:
        if args.format == "csv":
            text = _to_csv(result)
        else:
            if isinstance(result, tuple):
                header, rows = result
                result = {"columns": list(header), "rows": [list(r) for r in rows]}
            text = dumps_report(result)
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
