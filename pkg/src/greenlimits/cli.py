"""Command line: ``greenlimits <group> <command> [options]``.

Exit codes: 0 success, 1 input error, 2 not certified, 3 mathematical violation.
Reports are JSON on stdout; grid and sandwich rows are CSV.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings

import numpy as np

from . import disks, io
from .errors import (
    CertificationError,
    ConvergenceError,
    DegenerateConfigurationError,
    DomainError,
    NotCertifiedError,
    RegionError,
)
from .green import (
    GreenBound,
    classify_region,
    limit_L,
    lower_bound_L,
    model_F,
    model_F_check,
    model_H,
    region_F_check,
    two_point_limit,
    two_point_model,
)
from .ideals import IdealSpec, hilbert_samuel_multiplicity, is_complete_intersection, local_length
from .limits import (
    PointFamily,
    builtin_family,
    family_limit,
    limit_ideal_from_report,
    predict_green_convergence,
)
from .numcore import MultiPoly
from .residues import PolyMap2, local_residue, membership_residues, simple_residue_sum
from .sandwich import run_sandwich, sample_torus, summarize, upper_bound
from .validation import check_eps, check_samples, check_schedule

EXIT_OK, EXIT_INPUT, EXIT_NOT_CERTIFIED, EXIT_VIOLATION = 0, 1, 2, 3


class InputError(Exception):
    pass


class Violation(Exception):
    def __init__(self, report):
        super().__init__("violation")
        self.report = report


def _complex(text) -> complex:
    if isinstance(text, (int, float, complex)):
        return complex(text)
    s = str(text).strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _load(path, what):
    try:
        return io.load_json(path)
    except OSError as exc:
        raise InputError(f"cannot read {what} file {path}: {exc.strerror}") from None
    except ValueError as exc:
        raise InputError(f"{what} file {path} is not valid JSON: {exc}") from None


def _emit(report, stream=None):
    io.write_json(report, stream=stream or sys.stdout)


# ---------------------------------------------------------------------------
# ideal


def cmd_ideal(args) -> int:
    I = IdealSpec.from_json(_load(args.file, "ideal"))
    if args.command == "length":
        r = local_length(I, D_max=args.d_max)
        _emit({"l": r.value, "stabilized_at": r.stabilized_at, "certified": r.certified,
               "codims": {str(k): v for k, v in sorted(r.codims.items())}})
        return EXIT_OK if r.certified else EXIT_NOT_CERTIFIED
    if args.command == "mult":
        r = hilbert_samuel_multiplicity(I, k_max=args.k_max)
        _emit({"e": r.value, "k_used": r.k_used, "differences": list(r.difference_table)})
        return EXIT_OK
    r = is_complete_intersection(I, k_max=args.k_max)
    _emit({"l": r.length, "e": r.multiplicity, "ci": r.ci})
    return EXIT_OK


# ---------------------------------------------------------------------------
# family


def _family(args) -> PointFamily:
    if bool(args.builtin) == bool(args.file):
        raise InputError("give exactly one of --builtin and --file")
    if args.file:
        F = PointFamily.from_json(_load(args.file, "family"))
    else:
        params = {}
        if args.alpha is not None:
            params["alpha"] = args.alpha
        if args.v is not None:
            params["v"] = tuple(args.v)
        try:
            F = builtin_family(args.builtin, **params)
        except TypeError:
            raise InputError(f"family {args.builtin!r} does not take {sorted(params)}") from None
    if args.schedule:
        F = F.with_schedule(check_schedule(args.schedule))
    return F


def _limit_json(R) -> dict:
    return {
        "degree": R.degree,
        "converged": R.converged,
        "schedule": list(R.schedule),
        "gaps": list(R.gaps),
        "step_gaps": list(R.step_gaps),
        "codims": list(R.codims),
        "limit_rank": R.limit_subspace.rank,
        "limsup_rank": R.limsup_rank,
        "liminf_rank": R.liminf_rank,
        "tolerance": R.tolerance,
        "final_estimate": R.extra.get("final_estimate"),
        "gap_to_target": R.gap_to_target,
    }


def cmd_family(args) -> int:
    F = _family(args)
    D = args.degree if args.degree is not None else max(3, F.npoints)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        R = family_limit(F, D, args.tol, F.limit_ideal)
    out = {"family": F.name}
    out.update(_limit_json(R))
    if args.command == "predict":
        limit = limit_ideal_from_report(R)
        p = predict_green_convergence(limit, args.k_max)
        out.update({"converges": p.converges, "l": p.length, "e": p.multiplicity,
                    "limit_ideal": limit.to_json()})
    _emit(out)
    return EXIT_OK if R.converged else EXIT_NOT_CERTIFIED


# ---------------------------------------------------------------------------
# green


def _rho(args) -> float:
    if args.rho is not None:
        return args.rho
    return args.eps if args.case == "generic" else args.eps ** 2


def _seeds(seed: int, n: int) -> list[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(n)]


def _samples(args, case):
    n = check_samples(args.samples)
    tori = args.torus
    parts = [sample_torus(r, n, s, args.collar, case) for r, s in zip(tori, _seeds(args.seed, len(tori)))]
    return np.vstack(parts)


def _write_rows(text, args):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_green(args) -> int:
    if args.command == "two-point":
        return _two_point(args)
    eps, rho = check_eps(args.eps, _rho(args))
    if args.command == "grid":
        return _grid(args, eps, rho)
    pts = _samples(args, args.case)
    bounds = run_sandwich(pts, eps, rho, args.case, args.jobs)
    _write_rows(io.bounds_csv(bounds), args)
    s = summarize(bounds, args.case)
    report = {
        "case": args.case, "eps": eps, "rho": rho, "tori": list(args.torus),
        "samples_per_torus": args.samples, "seed": args.seed, "collar": args.collar,
        "n": s.n, "violations": s.violations, "max_width": s.max_width,
        "max_model_gap": s.max_model_gap,
        "violating_points": [[p[0], p[1]] for p in s.violating_points],
    }
    _emit(report, None if args.out else sys.stderr)
    if s.violations:
        raise Violation(report)
    return EXIT_OK


_MODELS = {
    "H": (model_H, lambda z: classify_region(z, "generic"), "generic"),
    "F": (model_F, lambda z: classify_region(z, "degenerate"), "degenerate"),
    "Fcheck": (model_F_check, region_F_check, "degenerate"),
}


def _grid(args, eps, rho) -> int:
    model, region, case = _MODELS[args.model]
    pts = _samples(args, case if args.model != "F" else "generic")
    rows = []
    for z in pts:
        z = (complex(z[0]), complex(z[1]))
        rows.append(GreenBound(z, lower_bound_L(eps, rho, z), math.nan, model(z), region(z)))
    _write_rows(io.bounds_csv(rows), args)
    return EXIT_OK


def _two_point(args) -> int:
    rho = args.rho if args.rho is not None else args.eps
    if not 0 < rho < 1:
        raise DomainError("need 0 < rho < 1")
    ts = (0.1, 0.2, 0.4)
    table = []
    for t in ts:
        a, b = (t, 0j), (0j, t)
        table.append({
            "t": t,
            "along_z1": two_point_model(1.0, rho, a), "limit_z1": two_point_limit(a),
            "limit_z1_minus_2log": two_point_limit(a) - 2 * math.log(t),
            "along_z2": two_point_model(1.0, rho, b), "limit_z2": two_point_limit(b),
            "limit_z2_minus_log": two_point_limit(b) - math.log(t),
        })
    pts = sample_torus(0.5, check_samples(args.samples), args.seed)
    gap = max(abs(two_point_model(1.0, rho, tuple(z)) - two_point_limit(tuple(z))) for z in pts)
    d1 = [r["limit_z1_minus_2log"] for r in table]
    d2 = [r["limit_z2_minus_log"] for r in table]
    _emit({"rho": rho, "table": table,
           "z1_decay_spread": max(d1) - min(d1), "z2_decay_spread": max(d2) - min(d2),
           "torus": 0.5, "max_model_minus_limit": gap})
    return EXIT_OK


# ---------------------------------------------------------------------------
# residue


def _poly(path) -> MultiPoly:
    return MultiPoly.from_json(_load(path, "polynomial"))


def _map(path) -> PolyMap2:
    data = _load(path, "map")
    if isinstance(data, list):
        data = {"components": data}
    return PolyMap2.from_json(data)


def cmd_residue(args) -> int:
    Psi, h = _map(args.map), _poly(args.h)
    if h.nvars != 2:
        raise InputError("h must be a polynomial in two variables")
    if args.command == "eval":
        if args.method == "simple":
            r = simple_residue_sum(Psi, h, seed=args.seed)
        else:
            r = local_residue(Psi, h, seed=args.seed)
        _emit(r)
        return EXIT_OK
    table = membership_residues(h, Psi, args.d_test, seed=args.seed)
    worst = max((abs(r.value) for r in table.values()), default=0.0)
    member = h.is_zero() or worst <= args.threshold
    _emit({"member": member, "threshold": args.threshold, "max_abs_residue": worst,
           "residues": [{"g": list(e), "value": r.value, "estimated_error": r.estimated_error}
                        for e, r in table.items()]})
    return EXIT_OK


# ---------------------------------------------------------------------------
# disk


def cmd_disk(args) -> int:
    z = (args.z[0] + 1j * args.z[1], args.z[2] + 1j * args.z[3])
    eps = args.eps
    rho = args.rho if args.rho is not None else eps
    check_eps(eps, rho)
    if args.kind == "axes":
        d = disks.disk_axes(z, eps, rho, args.branch)
    elif args.kind == "three-pole":
        d = disks.three_pole_disk(z, rho, eps, case=args.case)
    elif args.kind == "neil":
        d = disks.disk_neil(z, eps, rho / eps)
    else:
        val, label = upper_bound(z, eps, rho)
        _emit({"z": list(z), "upper": val, "construction": label})
        return EXIT_OK
    out = d.to_json()
    out["upper"] = disks.upper_bound_from_disk(d)
    _emit(out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file whose keys supply option defaults")

    p = argparse.ArgumentParser(prog="greenlimits", description=__doc__.splitlines()[0],
                                parents=[common])
    groups = p.add_subparsers(dest="group", required=True)

    g = groups.add_parser("ideal", help="length, multiplicity, complete intersection")
    sub = g.add_subparsers(dest="command", required=True)
    for name in ("length", "mult", "ci"):
        q = sub.add_parser(name, parents=[common])
        q.add_argument("--file", required=True)
        q.add_argument("--d-max", type=int, default=12)
        q.add_argument("--k-max", type=int, default=8)
        q.set_defaults(func=cmd_ideal)

    g = groups.add_parser("family", help="limits of vanishing ideals")
    sub = g.add_subparsers(dest="command", required=True)
    for name in ("limit", "predict"):
        q = sub.add_parser(name, parents=[common])
        q.add_argument("--builtin")
        q.add_argument("--file")
        q.add_argument("--alpha", type=_complex)
        q.add_argument("--v", type=_complex, nargs=2)
        q.add_argument("--degree", type=int)
        q.add_argument("--schedule", type=float, nargs="+")
        q.add_argument("--tol", type=float)
        q.add_argument("--k-max", type=int, default=8)
        q.set_defaults(func=cmd_family)

    g = groups.add_parser("green", help="Green function bounds and models")
    sub = g.add_subparsers(dest="command", required=True)
    for name in ("sandwich", "grid", "two-point"):
        q = sub.add_parser(name, parents=[common])
        q.add_argument("--case", choices=("generic", "degenerate"), default="generic")
        q.add_argument("--eps", type=float, default=1e-3)
        q.add_argument("--rho", type=float)
        q.add_argument("--torus", type=float, nargs="+", default=[0.5])
        q.add_argument("--samples", type=int, default=200)
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--collar", type=float, default=0.02 if name == "sandwich" else 0.0)
        q.add_argument("--jobs", type=int, default=1)
        q.add_argument("--out")
        if name == "grid":
            q.add_argument("--model", choices=sorted(_MODELS), default="H")
        q.set_defaults(func=cmd_green)

    g = groups.add_parser("residue", help="local residues and ideal membership")
    sub = g.add_subparsers(dest="command", required=True)
    for name in ("eval", "member"):
        q = sub.add_parser(name, parents=[common])
        q.add_argument("--map", required=True)
        q.add_argument("--h", required=True)
        q.add_argument("--seed", type=int, default=0)
        if name == "eval":
            q.add_argument("--method", choices=("local", "simple"), default="local")
        else:
            q.add_argument("--d-test", type=int)
            q.add_argument("--threshold", type=float, default=1e-6)
        q.set_defaults(func=cmd_residue)

    g = groups.add_parser("disk", help="analytic disks")
    sub = g.add_subparsers(dest="command", required=True)
    q = sub.add_parser("dump", parents=[common])
    q.add_argument("--kind", choices=("axes", "three-pole", "neil", "best"), default="best")
    q.add_argument("--z", type=float, nargs=4, required=True, metavar=("RE1", "IM1", "RE2", "IM2"))
    q.add_argument("--eps", type=float, default=1e-3)
    q.add_argument("--rho", type=float)
    q.add_argument("--branch", choices=("z1", "z2", "anti"))
    q.add_argument("--case", type=int, choices=(1, 2))
    q.set_defaults(func=cmd_disk)
    return p


def _leaf(parser, argv):
    """The sub-parser that handles ``argv`` (group and command are the first two words)."""
    words = [a for a in argv if not a.startswith("-")]
    node = parser
    for w in words[:2]:
        acts = [a for a in node._actions if isinstance(a, argparse._SubParsersAction)]
        if not acts or w not in acts[0].choices:
            return None
        node = acts[0].choices[w]
    return node


def _config_path(argv):
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if a.startswith("--config="):
            return a.split("=", 1)[1]
    return None


def _apply_config(parser, argv):
    path = _config_path(argv)
    if path is None:
        return
    cfg = _load(path, "config")
    if not isinstance(cfg, dict):
        raise InputError("config file must hold a JSON object")
    leaf = _leaf(parser, [a for a in argv if a != path])
    if leaf is None:
        raise InputError("config needs a command to apply to")
    known = {a.dest for a in leaf._actions}
    defaults = {}
    for k, v in cfg.items():
        dest = k.replace("-", "_")
        if dest not in known or dest in ("help", "config", "func"):
            raise InputError(f"unknown config key {k!r}")
        defaults[dest] = v
    for a in leaf._actions:
        if a.dest in defaults:
            a.required = False
    leaf.set_defaults(**defaults)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except InputError as exc:
        _emit({"error": "input", "message": str(exc)})
        return EXIT_INPUT
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except Violation:
        return EXIT_VIOLATION
    except (NotCertifiedError, ConvergenceError, CertificationError) as exc:
        out = {"error": "not certified", "message": str(exc)}
        table = getattr(exc, "table", None)
        if table is not None:
            out["table"] = table
        _emit(out)
        return EXIT_NOT_CERTIFIED
    except (InputError, ValueError, TypeError, KeyError, OSError) as exc:
        kind = "degenerate" if isinstance(exc, DegenerateConfigurationError) else "input"
        if isinstance(exc, (DomainError, RegionError)):
            kind = "domain"
        _emit({"error": kind, "message": str(exc)})
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
