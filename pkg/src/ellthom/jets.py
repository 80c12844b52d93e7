"""Truncated Taylor series (jets) with complex coefficients."""

from __future__ import annotations

import math

import numpy as np

from . import kernels


class Jet:
    """Taylor coefficients c_0..c_k of a function at a base point w.

    Arithmetic truncates at the order of the shorter operand.
    """

    __slots__ = ("coeffs", "base")

    def __init__(self, coeffs, base: complex = 0j):
        self.coeffs = np.array(coeffs, dtype=complex)
        self.base = complex(base)

    @classmethod
    def constant(cls, c, order: int, base: complex = 0j) -> "Jet":
        v = np.zeros(order + 1, dtype=complex)
        v[0] = c
        return cls(v, base)

    @classmethod
    def variable(cls, order: int, base: complex = 0j) -> "Jet":
        """The jet of z ↦ z at w (value w, slope 1)."""
        v = np.zeros(order + 1, dtype=complex)
        v[0] = base
        if order >= 1:
            v[1] = 1
        return cls(v, base)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __repr__(self):
        return f"Jet(base={self.base}, coeffs={self.coeffs!r})"

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.order, self.base)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(len(self.coeffs), len(other.coeffs))
        return Jet(self.coeffs[:n] + other.coeffs[:n], self.base)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.coeffs, self.base)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs * other, self.base)
        return Jet(kernels.jet_mul(self.coeffs, other.coeffs), self.base)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs / other, self.base)
        if abs(other.coeffs[0]) == 0:
            raise ZeroDivisionError("jet divisor is not a unit")
        return Jet(kernels.jet_div(self.coeffs, other.coeffs), self.base)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def reciprocal(self) -> "Jet":
        return Jet.constant(1, self.order, self.base) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        out = Jet.constant(1, self.order, self.base)
        for _ in range(k):
            out = out * self
        return out

    def exp(self) -> "Jet":
        """exp of the jet, via the recursion f' = f·g' for f = e^g."""
        n = len(self.coeffs)
        g = self.coeffs
        f = np.zeros(n, dtype=complex)
        f[0] = np.exp(g[0])
        for k in range(1, n):
            f[k] = sum(j * g[j] * f[k - j] for j in range(1, k + 1)) / k
        return Jet(f, self.base)

    def log(self) -> "Jet":
        n = len(self.coeffs)
        f = self.coeffs
        if f[0] == 0:
            raise ValueError("log of a non-unit jet")
        g = np.zeros(n, dtype=complex)
        g[0] = np.log(f[0])
        for k in range(1, n):
            g[k] = (k * f[k] - sum(j * g[j] * f[k - j] for j in range(1, k))) / (k * f[0])
        return Jet(g, self.base)

    def derivative(self) -> "Jet":
        k = np.arange(1, len(self.coeffs))
        return Jet(self.coeffs[1:] * k, self.base)

    def compose(self, inner: "Jet") -> "Jet":
        """self ∘ inner, where inner[0] must equal this jet's base point."""
        if abs(inner.coeffs[0] - self.base) > 1e-12 * (1 + abs(self.base)):
            raise ValueError("inner jet does not start at the base point")
        dx = Jet(inner.coeffs.copy(), inner.base)
        dx.coeffs[0] = 0
        n = min(self.order, inner.order)
        out = Jet.constant(0, n, inner.base)
        p = Jet.constant(1, n, inner.base)
        for k in range(n + 1):
            out = out + p * self.coeffs[k]
            p = p * dx
        return out

    def derivatives(self) -> np.ndarray:
        """f^{(k)}(w) = k!·c_k."""
        return np.array([math.factorial(k) * c for k, c in enumerate(self.coeffs)])

    def __call__(self, h):
        """Evaluate the Taylor polynomial at base + h."""
        return np.polyval(self.coeffs[::-1], h)
