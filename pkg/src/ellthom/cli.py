"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error, 3 fixture or
input-file schema violation.  Floating-point report fields are written as
decimal strings with 15 significant digits.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import kernels
from .chargenus import (ManifoldData, QSeries, a_hat_series, genus_eval, ochanine_x_series,
                        witten_genus_q)
from .equivrep import (VirtualRep, check_double_periodicity, check_parity, degree, is_trivial,
                       p1_equivariant, w2_equivariant)
from .fixtures import SHIPPED, FixtureError, load_fixture, load_shipped
from .lattice import Lattice, build_adapted_cover, torsion_points, verify_adapted
from .theta import DEFAULT_Q_TERMS, ThetaFunction, sigma_truncation_bound, verify_translation
from .thomfix import default_samples, rigidity_localized, special_point_data, spread, verify_model

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_SCHEMA = 0, 1, 2, 3
MIN_IM_TAU = 0.2
MIN_Q_TERMS = 40


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    tau: complex = 1j
    scale: str = "witten"
    q_terms: int = DEFAULT_Q_TERMS
    jet_cap: int = 8
    tol: float = 1e-8
    rigidity_tol: float = 1e-6
    samples: int = 20
    output: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.tau.imag < MIN_IM_TAU:
            raise UsageError(f"Im tau must be at least {MIN_IM_TAU}")
        if self.q_terms < MIN_Q_TERMS:
            raise UsageError(f"q_terms must be at least {MIN_Q_TERMS}")
        if self.scale not in ("witten", "ochanine"):
            raise UsageError("scale must be witten or ochanine")
        if self.output not in ("json", "text"):
            raise UsageError("format must be json or text")
        if self.samples < 1:
            raise UsageError("samples must be positive")

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.tau, self.scale)


def default_q_terms() -> int:
    env = os.environ.get("SIGMA_RIGIDITY_QTERMS")
    if env is None:
        return DEFAULT_Q_TERMS
    try:
        return int(env)
    except ValueError:
        raise UsageError("SIGMA_RIGIDITY_QTERMS must be an integer") from None


def _complex(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from None
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    return complex(parts[0], parts[1])


def _pair(text: str) -> tuple:
    try:
        j, k = (int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected j,k, got {text!r}") from None
    return j, k


def fmt(x):
    """Recursively turn floats into 15-significant-digit strings."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".15g")
    if isinstance(x, (complex, np.complexfloating)):
        return [format(x.real, ".15g"), format(x.imag, ".15g")]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, QSeries):
        return [str(c) for c in x.coeffs]
    if isinstance(x, dict):
        return {str(k): fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [fmt(v) for v in x]
    return x


def _emit(report: dict, cfg: RunConfig, out=None):
    out = out or sys.stdout
    data = fmt(report)
    if cfg.output == "json":
        out.write(json.dumps(data, indent=2) + "\n")
    else:
        for k, v in data.items():
            out.write(f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}\n")


# ---------------------------------------------------------------- commands

def _theta(cfg: RunConfig, kind: str) -> ThetaFunction:
    if kind == "sigma":
        if cfg.scale != "witten":
            raise UsageError("sigma needs the witten scale")
        return ThetaFunction.sigma(cfg.lattice, cfg.q_terms)
    return ThetaFunction.ochanine(cfg.lattice, cfg.q_terms)


def cmd_theta_eval(args, cfg):
    th = _theta(cfg, args.kind)
    val = th(args.z)
    rep = {"kind": args.kind, "z": args.z, "value": val}
    if args.kind == "sigma":
        rep["truncation_bound"] = sigma_truncation_bound(args.z, th.lattice, cfg.q_terms)
    return rep, True


def cmd_theta_verify(args, cfg):
    th = _theta(cfg, args.kind)
    L = th.lattice
    lam = L.vector(*args.lam)
    rng = np.random.default_rng(cfg.seed)
    zs = L.from_coords(rng.uniform(0, 1, cfg.samples), rng.uniform(0, 1, cfg.samples))
    r = verify_translation(th, lam, zs, relative=args.relative)
    ok = r["max_residual"] < cfg.tol and r["used"] > 0
    return {"kind": args.kind, "lambda": list(args.lam), **r, "pass": ok}, ok


def _load_manifold(path: str) -> ManifoldData:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise FixtureError(f"invalid JSON: {e.msg}") from None
    if not isinstance(obj, dict) or "dim" not in obj:
        raise FixtureError("missing required field", "$.dim")
    try:
        return ManifoldData.from_json(obj)
    except (ValueError, TypeError) as e:
        raise FixtureError(str(e), "$.pontryagin") from None


def cmd_genus_eval(args, cfg):
    M = _load_manifold(args.manifold)
    try:
        if args.series == "ahat":
            val = genus_eval(a_hat_series(max(3, M.dim // 2 + 1)), M)
        elif args.series == "witten":
            val = witten_genus_q(M, args.qorder)
        else:
            val = genus_eval(ochanine_x_series(args.qorder, max(3, M.dim // 2 + 1)), M)
    except KeyError as e:
        raise FixtureError(str(e.args[0]), "$.pontryagin") from None
    return {"series": args.series, "dim": M.dim, "value": val}, True


def cmd_rep_analyze(args, cfg):
    try:
        f = VirtualRep.parse(args.f)
    except ValueError as e:
        raise UsageError(str(e)) from None
    L = cfg.lattice
    per = check_double_periodicity(f, L, q_terms=cfg.q_terms)
    par = check_parity(f, L, q_terms=cfg.q_terms)
    triv = is_trivial(f, L)
    rep = {"f": str(f), "degree": degree(f), "p1": p1_equivariant(f), "w2": w2_equivariant(f),
           "trivial": triv, "periodicity_residual": per["max_residual"], "parity": par["parity"],
           "parity_residual": par["residual"]}
    ok = par["sign"] == par["expected"]
    if triv:
        ok = ok and per["max_residual"] < cfg.tol
    return rep, ok


def cmd_cover(args, cfg):
    L = cfg.lattice
    special = [p for p in torsion_points(L, args.n)]
    cover = build_adapted_cover(special, L)
    conds = verify_adapted(cover, special)
    rep = {"n": args.n, "special_points": len(special),
           "special_radius": next(iter(cover.special_discs.values())).radius if special else 0.0,
           "ordinary_radius": cover.ordinary_radius,
           "conditions": {str(k): v for k, v in conds.items()}}
    ok = all(conds.values())
    return {**rep, "pass": ok}, ok


def _model(args):
    if args.fixture is not None:
        return load_fixture(args.fixture)
    return load_shipped(args.shipped)


def cmd_thom_verify(args, cfg):
    model = _model(args)
    th = _theta(cfg, args.kind)
    zs = default_samples(th.lattice, cfg.samples, cfg.seed)
    try:
        special_point_data(model, th)
    except ValueError as e:
        raise FixtureError(str(e), "$.special") from None
    rep = verify_model(model, th, zs, cfg.tol, args.mode)
    return {"fixture": model.name, **rep}, rep["pass"]


def cmd_thom_rigidity(args, cfg):
    model = _model(args)
    th = _theta(cfg, args.kind)
    zs = default_samples(th.lattice, cfg.samples, cfg.seed)
    vals = rigidity_localized(model, th, zs)
    s = spread(vals)
    ok = s < cfg.rigidity_tol
    return {"fixture": model.name, "values": vals, "spread": s, "pass": ok}, ok


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tau", type=_complex, default=complex(0, 1), help="RE,IM")
    common.add_argument("--scale", choices=["witten", "ochanine"], default="witten")
    common.add_argument("--qterms", type=int, default=None)
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--samples", type=int, default=20)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["json", "text"], default="json")

    p = argparse.ArgumentParser(prog="ellthom", description="Elliptic theta functions, genera and Thom sections.")
    p.add_argument("--backend", action="store_true", help="print the active kernel backend and exit")
    sub = p.add_subparsers(dest="command")

    th = sub.add_parser("theta").add_subparsers(dest="action", required=True)
    e = th.add_parser("eval", parents=[common])
    e.add_argument("--kind", choices=["sigma", "ochanine"], default="sigma")
    e.add_argument("--z", type=_complex, required=True)
    e.set_defaults(func=cmd_theta_eval)
    v = th.add_parser("verify", parents=[common])
    v.add_argument("--kind", choices=["sigma", "ochanine"], default="sigma")
    v.add_argument("--lambda", dest="lam", type=_pair, required=True, help="j,k")
    v.add_argument("--relative", action="store_true")
    v.set_defaults(func=cmd_theta_verify)

    g = sub.add_parser("genus").add_subparsers(dest="action", required=True)
    ge = g.add_parser("eval", parents=[common])
    ge.add_argument("--series", choices=["ahat", "witten", "ochanine"], required=True)
    ge.add_argument("--manifold", required=True)
    ge.add_argument("--qorder", type=int, default=6)
    ge.set_defaults(func=cmd_genus_eval)

    r = sub.add_parser("rep").add_subparsers(dest="action", required=True)
    ra = r.add_parser("analyze", parents=[common])
    ra.add_argument("--f", required=True)
    ra.set_defaults(func=cmd_rep_analyze)

    c = sub.add_parser("cover", parents=[common])
    c.add_argument("--n", type=int, required=True)
    c.set_defaults(func=cmd_cover)

    t = sub.add_parser("thom").add_subparsers(dest="action", required=True)
    for name, fn in (("verify", cmd_thom_verify), ("rigidity", cmd_thom_rigidity)):
        tp = t.add_parser(name, parents=[common])
        src = tp.add_mutually_exclusive_group(required=True)
        src.add_argument("--fixture")
        src.add_argument("--shipped", choices=SHIPPED)
        tp.add_argument("--kind", choices=["sigma", "ochanine"], default="sigma")
        if name == "verify":
            tp.add_argument("--mode", choices=["strict", "p1"], default="strict")
        else:
            tp.add_argument("--rigidity-tol", type=float, default=1e-6)
        tp.set_defaults(func=fn)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PASS if e.code == 0 else EXIT_USAGE
    if args.backend:
        print(kernels.BACKEND)
        return EXIT_PASS
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        q_terms = args.qterms if args.qterms is not None else default_q_terms()
        cfg = RunConfig(tau=args.tau, scale=args.scale, q_terms=q_terms, tol=args.tol,
                        rigidity_tol=getattr(args, "rigidity_tol", 1e-6), samples=args.samples,
                        output=args.format, seed=args.seed)
        report, ok = args.func(args, cfg)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FixtureError as e:
        print(f"schema error at {e.path}: {e.message}", file=sys.stderr)
        return EXIT_SCHEMA
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    _emit(report, cfg)
    return EXIT_PASS if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
