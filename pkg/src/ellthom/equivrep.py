"""Virtual complex circle representations f = Σ d_m z^m and their Thom line bundles.

The Thom sheaf of V(f) is O_C(D(f)) with D(f) = −Σ d_m·C[|m|].  It is trivial
exactly when Σ d_m m² = 0, and then g(z) = ∏ σ(mz)^{d_m} is a trivialization.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .jets import Jet
from .lattice import Divisor, Lattice, line_bundle_trivial, torsion_points
from .theta import DEFAULT_Q_TERMS, ThetaFunction, sigma_character, sigma_eval, theta_jet


@dataclass(frozen=True)
class VirtualRep:
    """Finitely supported map m ↦ d_m."""

    coeffs: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for m, d in dict(self.coeffs).items():
            clean[int(m)] = clean.get(int(m), 0) + int(d)
        object.__setattr__(self, "coeffs", {m: d for m, d in sorted(clean.items()) if d != 0})

    @classmethod
    def parse(cls, text: str) -> "VirtualRep":
        return cls(parse_laurent(text))

    def __add__(self, other: "VirtualRep") -> "VirtualRep":
        out = dict(self.coeffs)
        for m, d in other.coeffs.items():
            out[m] = out.get(m, 0) + d
        return VirtualRep(out)

    def __neg__(self):
        return VirtualRep({m: -d for m, d in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, VirtualRep) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def items(self):
        return self.coeffs.items()

    def nonzero(self):
        return [(m, d) for m, d in self.coeffs.items() if m != 0]

    def rotation_numbers(self) -> list:
        return [m for m, _ in self.nonzero()]

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for m, d in self.coeffs.items():
            mon = "" if m == 0 else ("z" if m == 1 else f"z^{m}")
            coef = str(d) if (mon == "" or abs(d) != 1) else ("-" if d < 0 else "")
            parts.append(f"{coef}{mon}")
        return " + ".join(parts).replace("+ -", "- ")


_LAURENT_TERM = re.compile(r"([+-])?(\d+)?\*?(z(?:\^\(?([+-]?\d+)\)?)?)?")


def parse_laurent(text: str) -> dict:
    """Parse '3z^2 - 9z + 2 + z^-1' into {2: 3, 1: -9, 0: 2, -1: 1}."""
    s = text.replace(" ", "")
    if s in ("", "0"):
        return {}
    out: dict = {}
    pos = 0
    while pos < len(s):
        m = _LAURENT_TERM.match(s, pos)
        sign, digits, zpart, e = m.groups()
        if m.end() == pos or (digits is None and zpart is None) or (pos > 0 and sign is None):
            raise ValueError(f"cannot parse {text!r} at position {pos}")
        coef = int(digits) if digits is not None else 1
        if sign == "-":
            coef = -coef
        exp = 0 if zpart is None else (int(e) if e is not None else 1)
        out[exp] = out.get(exp, 0) + coef
        pos = m.end()
    return {k: d for k, d in out.items() if d != 0}


def divisor_of(f: VirtualRep, L: Lattice) -> Divisor:
    """D(f) = −Σ_{m≠0} d_m·C[|m|]."""
    D = Divisor({})
    for m, d in f.nonzero():
        D = D + Divisor.from_points(torsion_points(L, abs(m)), -d)
    return D


def degree(f: VirtualRep) -> int:
    return -sum(d * m * m for m, d in f.items())


def p1_equivariant(f: VirtualRep) -> int:
    """Coefficient of z² in p1(V)_T; equals −degree."""
    p = sum(d * m * m for m, d in f.items())
    assert p == -degree(f)
    return p


def w2_equivariant(f: VirtualRep) -> int:
    return sum(d * m for m, d in f.items()) % 2


def is_trivial(f: VirtualRep, L: Lattice | None = None, crosscheck: bool = True) -> bool:
    ok = degree(f) == 0
    if crosscheck and L is not None:
        other = line_bundle_trivial(divisor_of(f, L))
        if other != ok:
            raise AssertionError("degree test and Abel-Jacobi test disagree")
    return ok


def trivialization_eval(f: VirtualRep, z, L: Lattice, q_terms: int = DEFAULT_Q_TERMS, tol: float = 1e-12):
    """g(z) = ∏_{m≠0} σ(mz)^{d_m}; raises if a σ factor vanishes at z."""
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    for m, d in f.nonzero():
        s = sigma_eval(m * z, L, q_terms)
        if np.any(np.abs(s) < tol):
            raise ZeroDivisionError(f"σ({m}z) vanishes at a sample")
        out = out * s**d
    return complex(out) if out.ndim == 0 else out


def trivialization_leading(f: VirtualRep) -> tuple:
    """(order at 0, leading coefficient) = (Σ d_m, ∏ m^{d_m}) over m ≠ 0."""
    order = sum(d for _, d in f.nonzero())
    lead = 1.0
    for m, d in f.nonzero():
        lead *= float(m) ** d
    return order, lead


def trivialization_jet(f: VirtualRep, L: Lattice, order: int = 6, q_terms: int = DEFAULT_Q_TERMS) -> tuple:
    """Laurent data of g at 0 from jets: σ(mz) = z·(m + …), so g = z^{Σd}·∏(σ(mz)/z)^{d}.

    Returns (vanishing order, jet of the unit part).
    """
    theta = ThetaFunction.sigma(L, q_terms)
    base = theta_jet(theta, 0j, order + 1).coeffs
    unit = Jet.constant(1, order)
    for m, d in f.nonzero():
        # σ(mz)/z as a jet in z: coefficients m^{k+1}·c_{k+1}
        c = np.array([base[k + 1] * m ** (k + 1) for k in range(order + 1)])
        unit = unit * (Jet(c) ** d)
    return sum(d for _, d in f.nonzero()), unit


def _samples(L: Lattice, n: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    s = rng.uniform(0, 1, n)
    t = rng.uniform(0, 1, n)
    return s * L.g1 + t * L.g2


def _near_torsion(z: complex, f: VirtualRep, L: Lattice, tol: float) -> bool:
    return any(L.distance(m * z, 0) < abs(m) * tol for m, _ in f.nonzero())


def check_double_periodicity(f: VirtualRep, L: Lattice, samples=None, q_terms: int = DEFAULT_Q_TERMS,
                             skip: float = 2e-2) -> dict:
    """max over samples and generators of |g(z+λ) − g(z)|/(1+|g(z)|)."""
    if not f.nonzero():
        return {"max_residual": 0.0, "used": 0, "skipped": 0}
    if samples is None:
        samples = _samples(L, 20)
    worst, used, skipped = 0.0, 0, 0
    for z in samples:
        if _near_torsion(z, f, L, skip):
            skipped += 1
            continue
        g0 = trivialization_eval(f, z, L, q_terms)
        for lam in L.generators:
            g1 = trivialization_eval(f, z + lam, L, q_terms)
            worst = max(worst, abs(g1 - g0) / (1 + abs(g0)))
        used += 1
    return {"max_residual": float(worst), "used": used, "skipped": skipped}


def translation_factor(f: VirtualRep, L: Lattice, j: int, k: int, z: complex) -> complex:
    """Symbolic g(z+λ)/g(z) from the iterated translation law, λ = j·g1 + k·g2."""
    ch = sigma_character(L)
    lam = L.vector(j, k)
    out = 1.0 + 0j
    for m, d in f.nonzero():
        # σ(mz + mλ) = c(mλ) e^{γ(λ)(m·mz + m²λ/2)} σ(mz)
        out *= (ch.c(m * j, m * k) * np.exp(ch.gamma(j, k) * (m * m * z + m * m * lam / 2))) ** d
    return complex(out)


def check_parity(f: VirtualRep, L: Lattice, samples=None, q_terms: int = DEFAULT_Q_TERMS,
                 skip: float = 2e-2) -> dict:
    """Fit g(−z) = s·g(z) with s = ±1; the expected sign is (−1)^{Σd_m}."""
    expected = -1 if sum(d for _, d in f.nonzero()) % 2 else 1
    if not f.nonzero():
        return {"sign": 1, "expected": 1, "residual": 0.0, "parity": "even"}
    if samples is None:
        samples = _samples(L, 20, seed=1)
    best = {}
    for s in (1, -1):
        worst = 0.0
        for z in samples:
            if _near_torsion(z, f, L, skip):
                continue
            a = trivialization_eval(f, -z, L, q_terms)
            b = trivialization_eval(f, z, L, q_terms)
            worst = max(worst, abs(a - s * b) / (1 + abs(b)))
        best[s] = worst
    sign = min(best, key=best.get)
    return {"sign": sign, "expected": expected, "residual": best[sign],
            "parity": "even" if sign == 1 else "odd"}


def winding_number(fn, center: complex, radius: float, n: int = 2048) -> int:
    """Discrete argument-principle count of zeros minus poles inside a circle."""
    t = np.linspace(0, 2 * np.pi, n + 1)
    vals = np.array([fn(center + radius * np.exp(1j * s)) for s in t])
    ph = np.unwrap(np.angle(vals))
    return int(round((ph[-1] - ph[0]) / (2 * np.pi)))


def zero_pole_ledger(f: VirtualRep, L: Lattice, q_terms: int = DEFAULT_Q_TERMS, radius: float | None = None) -> list:
    """For each point of every C[|m|]: (point, order of g by winding, −mult in D(f)).

    g trivializes O_C(D(f)), so its order at P is −D(f)(P).
    """
    D = divisor_of(f, L)
    pts = set()
    for m, _ in f.nonzero():
        pts.update(torsion_points(L, abs(m)))
    maxm = max((abs(m) for m, _ in f.nonzero()), default=1)
    if radius is None:
        radius = 0.2 * L.min_length() / maxm
    out = []
    for p in pts:
        w = winding_number(lambda z: trivialization_eval(f, z, L, q_terms), p.lift, radius)
        out.append((p, w, -D.mult(p)))
    return out
