"""Theta functions with a translation character, and the σ and Ochanine instances.

A theta function θ for Λ is odd, vanishes to first order at 0, and satisfies
θ(z+λ) = c(λ)·exp(γ(λ)(z + λ/2))·θ(z) with γ linear and c(λ) = ±1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .jets import Jet
from .lattice import TWO_PI_I, Lattice

DEFAULT_Q_TERMS = 60
JET_CAP = 8
SINGULAR_TOL = 1e-3


@dataclass(frozen=True)
class ThetaCharacter:
    """γ on the two generators plus the sign rule c(j, k) and the level N."""

    gamma_on_generators: tuple
    c_rule: Callable[[int, int], int]
    level: int
    lattice: Lattice

    def gamma(self, j: int, k: int) -> complex:
        g1, g2 = self.gamma_on_generators
        return j * g1 + k * g2

    def c(self, j: int, k: int) -> int:
        return int(self.c_rule(int(j), int(k)))

    def gamma_of(self, lam: complex) -> complex:
        return self.gamma(*self.lattice.lattice_indices(lam))

    def c_of(self, lam: complex) -> int:
        return self.c(*self.lattice.lattice_indices(lam))

    def factor(self, lam: complex, z) -> complex:
        """c(λ)·exp(γ(λ)(z + λ/2))."""
        return self.c_of(lam) * np.exp(self.gamma_of(lam) * (np.asarray(z) + lam / 2))

    def S(self, lam: complex):
        """The exponential x ↦ e^{γ(λ)x} attached to λ."""
        g = self.gamma_of(lam)
        return lambda x: np.exp(g * x)

    def period_pairing(self, a: tuple, b: tuple) -> complex:
        """γ(λ)λ' − λγ(λ') for λ, λ' given by integer coordinates."""
        lam = self.lattice.vector(*a)
        lamp = self.lattice.vector(*b)
        return self.gamma(*a) * lamp - lam * self.gamma(*b)

    def period_relation_integer(self, a: tuple, b: tuple, tol: float = 1e-10) -> int | None:
        """The integer k with pairing = 2πik, or None if not an integer multiple."""
        v = self.period_pairing(a, b) / TWO_PI_I
        k = round(v.real)
        return k if abs(v - k) < tol else None

    def quotient_identity_residual(self, a: tuple, b: tuple) -> float:
        """|c(λ+λ')/(c(λ)c(λ')) − exp(½(γ(λ)λ' − λγ(λ')))|."""
        s = (a[0] + b[0], a[1] + b[1])
        lhs = self.c(*s) / (self.c(*a) * self.c(*b))
        return abs(lhs - cmath.exp(0.5 * self.period_pairing(a, b)))


def sigma_character(L: Lattice) -> ThetaCharacter:
    """γ(2πi j + 2πiτ k) = −k and c = 1 exactly on 2Λ."""
    if L.scale != "witten":
        raise ValueError("the σ character is defined on the witten-scale lattice")
    return ThetaCharacter((0j, -1 + 0j), lambda j, k: (-1) ** ((j + k + j * k) % 2), 1, L)


def ochanine_character(L: Lattice) -> ThetaCharacter:
    """γ = 0 and c(j, k) = (−1)^k on 2πiℤ + 2πiτℤ (P = 2πiτ flips the sign)."""
    return ThetaCharacter((0j, 0j), lambda j, k: (-1) ** (k % 2), 2, L)


def _check_tau(L: Lattice):
    if not L.tau.imag > 0:
        raise ValueError("Im(tau) must be positive")


def sigma_eval(z, L: Lattice, q_terms: int = DEFAULT_Q_TERMS):
    """(e^{z/2} − e^{−z/2})·∏_{n≤q_terms}(1−qⁿu)(1−qⁿ/u)/(1−qⁿ)² with u = e^z.

    The half power is taken from z directly, so there is no branch choice.
    """
    _check_tau(L)
    if q_terms < 0:
        raise ValueError("q_terms must be non-negative")
    out = kernels.sigma_values(np.atleast_1d(np.asarray(z, dtype=complex)), L.q, int(q_terms))
    return complex(out[0]) if np.ndim(z) == 0 else out.reshape(np.shape(z))


def sigma_truncation_bound(z, L: Lattice, q_terms: int) -> float:
    """Bound on |log| of the omitted factors n > q_terms.

    For |x| ≤ ½ we have |log(1−x)| ≤ 2|x|, giving the geometric tail
    2·|q|^{N+1}(e^{|Re z|} + e^{|Re z|} + 2)/(1−|q|).
    """
    aq = abs(L.q)
    x = abs(complex(z).real)
    return 2 * aq ** (q_terms + 1) * (2 * math.exp(x) + 2) / (1 - aq)


def ochanine_eval(z, L: Lattice, q_terms: int = DEFAULT_Q_TERMS):
    """Product form of the Ochanine function s for Λ = 2πiℤ + 4πiτℤ, q = e^{2πiτ}."""
    if L.scale != "ochanine":
        raise ValueError("ochanine_eval expects an ochanine-scale lattice")
    _check_tau(L)
    za = np.atleast_1d(np.asarray(z, dtype=complex))
    u = np.exp(za)
    q = L.q
    for n in range(0, q_terms + 1):
        if np.any(np.abs(1 + q**n * u) < 1e-12) or np.any(np.abs(1 + q**n / u) < 1e-12):
            raise ValueError("z is at a pole of s")
    out = kernels.ochanine_values(za, q, int(q_terms))
    return complex(out[0]) if np.ndim(z) == 0 else out.reshape(np.shape(z))


OCHANINE_R1 = lambda L: math.pi * 1j + TWO_PI_I * L.tau  # noqa: E731
OCHANINE_R2 = lambda L: -math.pi * 1j  # noqa: E731
OCHANINE_P = lambda L: TWO_PI_I * L.tau  # noqa: E731


def ochanine_quotient_eval(z, L: Lattice, q_terms: int = DEFAULT_Q_TERMS):
    """σ-quotient σ(z)σ(−R1)σ(−R2)σ(z−P) / (σ(z−R1)σ(z−R2)σ(−P)).

    The σ here belongs to the lattice 2πiℤ + 4πiτℤ, so its nome is q².
    """
    if L.scale != "ochanine":
        raise ValueError("expects an ochanine-scale lattice")
    Lw = Lattice(2 * L.tau, "witten")
    R1, R2, P = OCHANINE_R1(L), OCHANINE_R2(L), OCHANINE_P(L)
    s = lambda w: sigma_eval(w, Lw, q_terms)  # noqa: E731
    z = np.asarray(z, dtype=complex)
    return s(z) * s(-R1) * s(-R2) * s(z - P) / (s(z - R1) * s(z - R2) * s(-P))


def ochanine_crosscheck(zs, L: Lattice, q_terms: int = DEFAULT_Q_TERMS, skip: float = SINGULAR_TOL) -> dict:
    """Compare product and quotient forms at zs, skipping points near R1, R2 mod Λ."""
    R1, R2 = OCHANINE_R1(L), OCHANINE_R2(L)
    used, skipped, worst = 0, 0, 0.0
    for z in zs:
        if min(L.distance(z, R1), L.distance(z, R2)) < skip:
            skipped += 1
            continue
        a = ochanine_eval(z, L, q_terms)
        b = ochanine_quotient_eval(z, L, q_terms)
        worst = max(worst, abs(a - b) / (1 + abs(a)))
        used += 1
    return {"max_residual": worst, "used": used, "skipped": skipped}


class ThetaFunction:
    """A theta function: character, lattice, and q-product evaluators.

    ``kind`` is 'sigma', 'ochanine' or 'custom'.  For the Ochanine function the
    character lives on 2πiℤ + 2πiτℤ while the curve lattice is the
    ochanine-scale one; ``lattice`` is the character lattice.
    """

    def __init__(self, character: ThetaCharacter, kind: str, q_terms: int = DEFAULT_Q_TERMS,
                 value_fn=None, jet_fn=None):
        self.character = character
        self.lattice = character.lattice
        self.kind = kind
        self.q_terms = int(q_terms)
        self._value_fn = value_fn
        self._jet_fn = jet_fn

    @classmethod
    def sigma(cls, L: Lattice, q_terms: int = DEFAULT_Q_TERMS) -> "ThetaFunction":
        return cls(sigma_character(L), "sigma", q_terms)

    @classmethod
    def ochanine(cls, L: Lattice, q_terms: int = DEFAULT_Q_TERMS) -> "ThetaFunction":
        """Takes either scale; the character lattice is 2πiℤ + 2πiτℤ."""
        return cls(ochanine_character(Lattice(L.tau, "witten")), "ochanine", q_terms)

    def __call__(self, z):
        q = self.lattice.q
        if self.kind == "sigma":
            za = np.atleast_1d(np.asarray(z, dtype=complex))
            out = kernels.sigma_values(za, q, self.q_terms)
        elif self.kind == "ochanine":
            za = np.atleast_1d(np.asarray(z, dtype=complex))
            out = kernels.ochanine_values(za, q, self.q_terms)
        else:
            return self._value_fn(z)
        return complex(out[0]) if np.ndim(z) == 0 else out.reshape(np.shape(z))

    def taylor(self, w: complex, order: int) -> np.ndarray:
        q = self.lattice.q
        if self.kind == "sigma":
            return kernels.sigma_taylor(complex(w), q, self.q_terms, int(order))
        if self.kind == "ochanine":
            return kernels.ochanine_taylor(complex(w), q, self.q_terms, int(order))
        return np.asarray(self._jet_fn(w, order), dtype=complex)

    def is_singular(self, z: complex, tol: float = SINGULAR_TOL) -> bool:
        """True when z lies within tol of N⁻¹Λ, where zeros and poles may sit."""
        N = self.character.level
        return self.lattice.distance(N * complex(z), 0) < N * tol

    def has_pole(self, z: complex, tol: float = 1e-9) -> bool:
        if self.kind == "sigma":
            return False
        if self.kind == "ochanine":
            # poles are the zeros of the factors 1 + qⁿu and 1 + qⁿ/u
            u = cmath.exp(z)
            q = self.lattice.q
            return any(abs(1 + q**n * u) < tol or abs(1 + q**n / u) < tol
                       for n in range(self.q_terms + 1))
        return False


def verify_translation(theta: ThetaFunction, lam: complex, zs: Sequence[complex],
                       skip: float = SINGULAR_TOL, relative: bool = False) -> dict:
    """Max of |θ(z+λ) − c(λ)e^{γ(λ)(z+λ/2)}θ(z)| / (1+|θ(z)|) over zs.

    With ``relative=True`` the denominator is |θ(z+λ)| + |factor·θ(z)| + tiny,
    which stays meaningful when the translation factor itself is huge.
    Samples near N⁻¹Λ are skipped and counted.
    """
    if theta.lattice.is_lattice_vector(lam) and theta.lattice.lattice_indices(lam) == (0, 0):
        return {"max_residual": 0.0, "used": len(list(zs)), "skipped": 0}
    worst, used, skipped = 0.0, 0, 0
    for z in zs:
        if theta.is_singular(z, skip) or theta.is_singular(z + lam, skip):
            skipped += 1
            continue
        a = theta(z + lam)
        t = theta(z)
        b = theta.character.factor(lam, z) * t
        den = (abs(a) + abs(b) + 1e-300) if relative else (1 + abs(t))
        worst = max(worst, abs(a - b) / den)
        used += 1
    return {"max_residual": float(worst), "used": used, "skipped": skipped}


def iterated_translation_factor(theta: ThetaFunction, lam: complex, ell: int, z):
    """c(ℓλ)·exp(γ(λ)(ℓz + ℓ²λ/2))."""
    ch = theta.character
    j, k = theta.lattice.lattice_indices(lam)
    return ch.c(ell * j, ell * k) * np.exp(ch.gamma(j, k) * (ell * np.asarray(z) + ell**2 * lam / 2))


def theta_jet(theta: ThetaFunction, w: complex, order: int, cap: int = JET_CAP) -> Jet:
    """Taylor coefficients of θ at w, from the q-product run in jet arithmetic."""
    if order > cap:
        raise ValueError(f"order {order} exceeds the jet cap {cap}")
    if theta.has_pole(w):
        raise ValueError("theta has a pole at w")
    return Jet(theta.taylor(w, order), w)


def odd_residual(theta: ThetaFunction, zs) -> float:
    zs = np.asarray(zs, dtype=complex)
    return float(np.max(np.abs(theta(-zs) + theta(zs)) / (1 + np.abs(theta(zs)))))


def zero_count(theta: ThetaFunction, center: complex = 0j, radius: float = 0.5, n: int = 4096) -> float:
    """Argument-principle count (zeros minus poles) of θ inside a circle."""
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    vals = theta(center + radius * np.exp(1j * t))
    ph = np.unwrap(np.angle(np.append(vals, vals[0])))
    return float((ph[-1] - ph[0]) / (2 * np.pi))


def parallelogram_zero_count(theta: ThetaFunction, offset: complex = None, n: int = 4000) -> float:
    """Winding number of θ around the boundary of a shifted fundamental cell."""
    L = theta.lattice
    g1, g2 = L.g1, L.g2
    if offset is None:
        offset = -0.37 * g1 - 0.41 * g2
    corners = [offset, offset + g1, offset + g1 + g2, offset + g2, offset]
    total = 0.0
    for a, b in zip(corners[:-1], corners[1:]):
        s = np.linspace(0, 1, n, endpoint=False)
        vals = theta(a + s * (b - a))
        ph = np.unwrap(np.angle(vals))
        end = np.angle(theta(b))
        last = ph[-1] + np.angle(np.exp(1j * (end - ph[-1])))
        total += last - ph[0]
    return float(total / (2 * np.pi))
