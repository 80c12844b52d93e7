"""Truncated polynomial rings with nilpotent degree-2 generators.

Elements are dense coefficient vectors over the monomial basis of total
polynomial degree ≤ cap/2.  Multiplication uses a precomputed table and the
``sparse_mul`` kernel.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import kernels


class NilpotentRing:
    """ℂ[y_1..y_k] truncated above cohomological degree ``cap``.

    Every generator has degree 2; ``integral`` names the top monomial whose
    coefficient is the integration functional.
    """

    def __init__(self, generators: Sequence[str], cap: int, integral: Mapping[str, int] | None = None):
        self.generators = tuple(generators)
        self.cap = int(cap)
        self.top = self.cap // 2
        k = len(self.generators)
        mons = [e for e in itertools.product(range(self.top + 1), repeat=k) if sum(e) <= self.top]
        mons.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
        self.monomials = mons
        self.index = {e: i for i, e in enumerate(mons)}
        ii, jj, kk = [], [], []
        for a, ea in enumerate(mons):
            for b, eb in enumerate(mons):
                ec = tuple(x + y for x, y in zip(ea, eb))
                c = self.index.get(ec)
                if c is not None:
                    ii.append(a)
                    jj.append(b)
                    kk.append(c)
        self._table = (np.array(ii, dtype=np.intp), np.array(jj, dtype=np.intp), np.array(kk, dtype=np.intp))
        integral = dict(integral or {})
        self.top_monomial = tuple(integral.get(g, 0) for g in self.generators)
        if sum(self.top_monomial) != self.top:
            raise ValueError("integral monomial must have top degree")

    @property
    def size(self) -> int:
        return len(self.monomials)

    def __eq__(self, other):
        return (isinstance(other, NilpotentRing) and self.generators == other.generators
                and self.cap == other.cap and self.top_monomial == other.top_monomial)

    def __hash__(self):
        return hash((self.generators, self.cap, self.top_monomial))

    def zero(self) -> "NilpotentClass":
        return NilpotentClass(self, np.zeros(self.size, dtype=complex))

    def one(self) -> "NilpotentClass":
        return self.const(1)

    def const(self, c) -> "NilpotentClass":
        v = np.zeros(self.size, dtype=complex)
        v[0] = c
        return NilpotentClass(self, v)

    def gen(self, name: str) -> "NilpotentClass":
        e = tuple(1 if g == name else 0 for g in self.generators)
        v = np.zeros(self.size, dtype=complex)
        if e in self.index:
            v[self.index[e]] = 1
        return NilpotentClass(self, v)

    def linear(self, coeffs: Mapping[str, int]) -> "NilpotentClass":
        """Degree-2 class Σ c_g·y_g."""
        out = self.zero()
        for g, c in coeffs.items():
            if g not in self.generators:
                raise KeyError(g)
            out = out + self.gen(g) * c
        return out

    def _mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        ii, jj, kk = self._table
        return kernels.sparse_mul(a, b, ii, jj, kk, self.size)


class NilpotentClass:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: NilpotentRing, coeffs):
        self.ring = ring
        self.coeffs = np.asarray(coeffs, dtype=complex)

    def _coerce(self, other):
        if isinstance(other, NilpotentClass):
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        return NilpotentClass(self.ring, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return NilpotentClass(self.ring, -self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, NilpotentClass):
            return NilpotentClass(self.ring, self.ring._mul(self.coeffs, other.coeffs))
        return NilpotentClass(self.ring, self.coeffs * complex(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, NilpotentClass):
            return self * other.inverse()
        return NilpotentClass(self.ring, self.coeffs / complex(other))

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    @property
    def constant(self) -> complex:
        return complex(self.coeffs[0])

    def nilpotent_part(self) -> "NilpotentClass":
        v = self.coeffs.copy()
        v[0] = 0
        return NilpotentClass(self.ring, v)

    def is_unit(self, tol: float = 0.0) -> bool:
        return abs(self.coeffs[0]) > tol

    def inverse(self) -> "NilpotentClass":
        """1/(c + n) = c⁻¹ Σ (−n/c)^k, finite since n is nilpotent."""
        c = self.constant
        if c == 0:
            raise ZeroDivisionError("class is not a unit")
        u = self.nilpotent_part() * (-1 / c)
        out = self.ring.one()
        p = self.ring.one()
        for _ in range(self.ring.top):
            p = p * u
            out = out + p
        return out * (1 / c)

    def exp(self) -> "NilpotentClass":
        n = self.nilpotent_part()
        out = self.ring.one()
        p = self.ring.one()
        for k in range(1, self.ring.top + 1):
            p = p * n * (1 / k)
            out = out + p
        return out * np.exp(self.constant)

    def apply_series(self, coeffs) -> "NilpotentClass":
        """Σ c_k·n^k where n is the nilpotent part; c_0 is the value at the constant."""
        n = self.nilpotent_part()
        out = self.ring.const(coeffs[0])
        p = self.ring.one()
        for k in range(1, min(len(coeffs), self.ring.top + 1)):
            p = p * n
            out = out + p * coeffs[k]
        return out

    def integrate(self) -> complex:
        return complex(self.coeffs[self.ring.index[self.ring.top_monomial]])

    def coefficient(self, exps: Mapping[str, int]) -> complex:
        e = tuple(exps.get(g, 0) for g in self.ring.generators)
        return complex(self.coeffs[self.ring.index[e]])

    def linear_coefficients(self) -> dict:
        """Coefficients of the degree-2 generators."""
        out = {}
        for g in self.ring.generators:
            e = tuple(1 if h == g else 0 for h in self.ring.generators)
            out[g] = complex(self.coeffs[self.ring.index[e]]) if e in self.ring.index else 0j
        return out

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __repr__(self):
        terms = []
        for e, c in zip(self.ring.monomials, self.coeffs):
            if c != 0:
                mon = "*".join(f"{g}^{k}" if k > 1 else g for g, k in zip(self.ring.generators, e) if k)
                terms.append(f"({c:.6g})" + (f"*{mon}" if mon else ""))
        return " + ".join(terms) or "0"


class LinearForm:
    """Exact integer-coefficient degree-2 class Σ c_g·y_g, used for CCR bookkeeping."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[str, int] | None = None):
        self.coeffs = {g: Fraction(c) for g, c in (coeffs or {}).items() if c != 0}

    def __add__(self, other: "LinearForm") -> "LinearForm":
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, 0) + c
        return LinearForm(out)

    def __neg__(self):
        return LinearForm({g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return LinearForm({g: k * c for g, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LinearForm) and self.coeffs == other.coeffs

    def __repr__(self):
        return "LinearForm(" + ", ".join(f"{g}: {c}" for g, c in sorted(self.coeffs.items())) + ")"

    def divisible_by(self, n: int) -> bool:
        return all(c.denominator == 1 and c.numerator % n == 0 for c in self.coeffs.values())

    def to_class(self, ring: NilpotentRing) -> NilpotentClass:
        out = ring.zero()
        for g, c in self.coeffs.items():
            out = out + ring.gen(g) * float(c)
        return out
