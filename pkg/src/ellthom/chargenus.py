"""Characteristic series, genera from Pontryagin numbers, and q-expansions.

Power series in x are plain lists of coefficients; the coefficients may be
Fractions, complex numbers or ``QSeries``.  A genus is computed from the even
multiplicative series Q(x) = x/θ̂(x): log Q is written in t = x², the product
∏Q(x_j) is expanded in power sums of the t_j, Newton's identities turn those
into Pontryagin classes, and the top part is paired with Pontryagin numbers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence


from .theta import ThetaFunction, theta_jet

DIM_CAP = 16
Q_ORDER_CAP = 12


class QSeries:
    """Power series in q truncated after q^order (inclusive)."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int):
        c = list(coeffs)[: order + 1]
        c += [Fraction(0)] * (order + 1 - len(c))
        self.coeffs = c
        self.order = int(order)

    @classmethod
    def const(cls, c, order: int) -> "QSeries":
        return cls([c], order)

    @classmethod
    def monomial(cls, c, k: int, order: int) -> "QSeries":
        v = [Fraction(0)] * (order + 1)
        if k <= order:
            v[k] = c
        return cls(v, order)

    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        return QSeries.const(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        return QSeries([a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1])], n)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return QSeries([a * other for a in self.coeffs], self.order)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(n + 1)]
        return QSeries(out, n)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("QSeries is not a unit")
        c = [Fraction(0)] * (self.order + 1)
        c[0] = 1 / Fraction(a[0]) if not isinstance(a[0], complex) else 1 / a[0]
        for k in range(1, self.order + 1):
            c[k] = -sum((a[i] * c[k - i] for i in range(1, k + 1)), Fraction(0)) * c[0]
        return QSeries(c, self.order)

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.inverse()
        return QSeries([a / other for a in self.coeffs], self.order)

    def __eq__(self, other):
        if isinstance(other, QSeries):
            n = min(self.order, other.order)
            return self.coeffs[: n + 1] == other.coeffs[: n + 1]
        return self == self._coerce(other)

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __getitem__(self, k):
        return self.coeffs[k]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def evaluate(self, q: complex) -> complex:
        return sum(complex(c) * q**k for k, c in enumerate(self.coeffs))

    def __repr__(self):
        terms = [f"{c}*q^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        return "QSeries(" + (" + ".join(terms) or "0") + f"; O(q^{self.order + 1}))"


# ---------------------------------------------------------------- x-series helpers

def _zero_like(c):
    if isinstance(c, QSeries):
        return QSeries.const(Fraction(0), c.order)
    return Fraction(0) if isinstance(c, (int, Fraction)) else 0j


def _one_like(c):
    if isinstance(c, QSeries):
        return QSeries.const(Fraction(1), c.order)
    return Fraction(1) if isinstance(c, (int, Fraction)) else 1 + 0j


def _recip(c):
    if isinstance(c, QSeries):
        return c.inverse()
    return 1 / (Fraction(c) if isinstance(c, int) else c)


def series_mul(a: Sequence, b: Sequence, n: int) -> list:
    """Product of two x-series, keeping coefficients of x^0..x^{n-1}."""
    z = _zero_like(a[0])
    out = []
    for k in range(n):
        s = z
        for i in range(k + 1):
            if i < len(a) and k - i < len(b):
                s = s + a[i] * b[k - i]
        out.append(s)
    return out


def series_inv(a: Sequence, n: int) -> list:
    inv0 = _recip(a[0])
    out = [inv0]
    for k in range(1, n):
        s = _zero_like(a[0])
        for i in range(1, k + 1):
            if i < len(a):
                s = s + a[i] * out[k - i]
        out.append(-(s * inv0))
    return out


def series_log(a: Sequence, n: int) -> list:
    """log of a series with constant term 1."""
    if a[0] != 1 and not (isinstance(a[0], QSeries) and a[0] == 1):
        raise ValueError("log needs constant term 1")
    z = _zero_like(a[0])
    g = [z]
    for k in range(1, n):
        s = a[k] * k if k < len(a) else z
        for j in range(1, k):
            if k - j < len(a):
                s = s - g[j] * j * a[k - j]
        g.append(s * Fraction(1, k))
    return g


def series_exp(g: Sequence, n: int) -> list:
    """exp of a series with zero constant term."""
    one = _one_like(g[0])
    z = _zero_like(g[0])
    f = [one]
    for k in range(1, n):
        s = z
        for j in range(1, k + 1):
            if j < len(g):
                s = s + g[j] * j * f[k - j]
        f.append(s * Fraction(1, k))
    return f


def exp_series(scale, n: int) -> list:
    """Taylor coefficients of e^{scale·x}."""
    return [Fraction(scale) ** k / math.factorial(k) for k in range(n)]


# ---------------------------------------------------------------- partitions and Newton

Partition = tuple


def partitions(d: int, max_part: int | None = None) -> list:
    if max_part is None:
        max_part = d
    if d == 0:
        return [()]
    out = []
    for k in range(min(d, max_part), 0, -1):
        for rest in partitions(d - k, k):
            out.append((k,) + rest)
    return out


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for pa, ca in a.items():
        for pb, cb in b.items():
            key = tuple(sorted(pa + pb, reverse=True))
            out[key] = out.get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v != 0}


def _padd(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + scale * v
    return {k: v for k, v in out.items() if v != 0}


@lru_cache(maxsize=None)
def power_sum_in_pontryagin(k: int) -> tuple:
    """s_k = Σ t_j^k as a polynomial in p_i = e_i(t), via Newton's identities.

    Returned as a tuple of (partition, Fraction) pairs.
    """
    if k == 0:
        raise ValueError("k must be positive")
    s = {(k,): Fraction((-1) ** (k - 1) * k)}
    for i in range(1, k):
        prev = dict(power_sum_in_pontryagin(k - i))
        s = _padd(s, _pmul({(i,): Fraction(1)}, prev), (-1) ** (i - 1))
    return tuple(sorted(s.items()))


# ---------------------------------------------------------------- data types

@dataclass(frozen=True)
class CharacteristicSeries:
    """θ̂(x) = x + c_2x² + …, coefficients from x^0 up to the jet cap."""

    coeffs: tuple
    provenance: str = "custom"

    def __post_init__(self):
        c = tuple(self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if c[0] != 0 or c[1] != 1:
            raise ValueError("a characteristic series must start x + …")

    @property
    def cap(self) -> int:
        return len(self.coeffs) - 1

    def is_odd(self) -> bool:
        return all(c == 0 for c in self.coeffs[0::2])

    def multiplicative_series(self, n: int) -> list:
        """Q(x) = x/θ̂(x) through x^{n-1}."""
        return series_inv(list(self.coeffs[1:]), n)


@dataclass(frozen=True)
class ManifoldData:
    """Pontryagin numbers of a closed oriented manifold, keyed by partitions."""

    dim: int
    pontryagin: Mapping = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if self.dim < 0 or self.dim % 2:
            raise ValueError("dimension must be a non-negative even integer")
        if self.dim > DIM_CAP:
            raise ValueError(f"dimension above the cap {DIM_CAP}")
        clean = {}
        for k, v in dict(self.pontryagin).items():
            part = parse_partition(k) if isinstance(k, str) else tuple(sorted(k, reverse=True))
            if self.dim % 4 or sum(part) != self.dim // 4:
                raise ValueError(f"partition {k!r} does not match dimension {self.dim}")
            clean[part] = int(v)
        object.__setattr__(self, "pontryagin", clean)

    @classmethod
    def from_json(cls, obj: dict) -> "ManifoldData":
        return cls(int(obj["dim"]), obj.get("pontryagin", {}), obj.get("name", ""))

    def to_json(self) -> dict:
        return {"dim": self.dim, "pontryagin": {partition_name(k): v for k, v in self.pontryagin.items()},
                "name": self.name}


_TERM = re.compile(r"^p(\d+)(?:\^(\d+))?$")


def parse_partition(s: str) -> tuple:
    """'p1^2*p2' → (2, 1, 1); '1' → ()."""
    s = s.replace(" ", "")
    if s in ("", "1"):
        return ()
    out = []
    for term in s.split("*"):
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"bad Pontryagin monomial {s!r}")
        out += [int(m.group(1))] * int(m.group(2) or 1)
    return tuple(sorted(out, reverse=True))


def partition_name(p: tuple) -> str:
    if not p:
        return "1"
    out = []
    for k in sorted(set(p), reverse=True):
        e = p.count(k)
        out.append(f"p{k}" + (f"^{e}" if e > 1 else ""))
    return "*".join(out)


# ---------------------------------------------------------------- genus engine

def genus_from_multiplicative(Q: Sequence, M: ManifoldData):
    """⟨∏_j Q(x_j), [M]⟩ for an even series Q with Q(0) = 1."""
    if M.dim % 4:
        return _zero_like(Q[0])
    d = M.dim // 4
    if len(Q) < 2 * d + 1:
        raise ValueError("series too short for this dimension")
    Qt = [Q[2 * k] for k in range(d + 1)]
    a = series_log(Qt, d + 1)
    # E_m = (1/m) Σ_k k a_k s_k E_{m-k}, graded pieces of exp(Σ a_k s_k), in power-sum symbols
    E = [{(): _one_like(Q[0])}]
    for m in range(1, d + 1):
        acc: dict = {}
        for k in range(1, m + 1):
            for part, c in E[m - k].items():
                key = tuple(sorted(part + (k,), reverse=True))
                acc[key] = acc.get(key, _zero_like(Q[0])) + c * a[k] * Fraction(k, m)
        E.append(acc)
    total = _zero_like(Q[0])
    for part, c in E[d].items():
        poly = {(): Fraction(1)}
        for k in part:
            poly = _pmul(poly, dict(power_sum_in_pontryagin(k)))
        for pp, cp in poly.items():
            if pp not in M.pontryagin:
                raise KeyError(f"missing Pontryagin number {partition_name(pp)}")
            total = total + c * (cp * M.pontryagin[pp])
    return total


def genus_eval(series: CharacteristicSeries, M: ManifoldData):
    """∫_M ∏ x_j/θ̂(x_j), paired against the Pontryagin numbers of M."""
    need = M.dim // 2 + 1
    if M.dim % 4:
        if series.is_odd():
            return _zero_like(series.coeffs[1])
        raise ValueError("genus of a non-odd series is only defined here in dimensions 4k")
    if series.cap < need:
        raise ValueError(f"series cap {series.cap} below required {need}")
    if not series.is_odd():
        raise ValueError("genus pairing needs an odd characteristic series")
    Q = series.multiplicative_series(need)
    return genus_from_multiplicative(Q, M)


# ---------------------------------------------------------------- preset series

def a_hat_series(cap: int = 17) -> CharacteristicSeries:
    """a(x) = e^{x/2} − e^{−x/2}, exact rationals."""
    c = [Fraction(0)] * (cap + 1)
    for k in range(1, cap + 1, 2):
        c[k] = Fraction(1, 2 ** (k - 1) * math.factorial(k))
    return CharacteristicSeries(tuple(c), "ahat")


def sigma_x_series(q_order: int, cap: int = 17) -> CharacteristicSeries:
    """σ as a series in x with exact QSeries coefficients, from the q-product."""
    n = cap + 1
    one = QSeries.const(Fraction(1), q_order)
    lead = [QSeries.const(c, q_order) for c in a_hat_series(cap).coeffs]
    out = lead
    for k in range(1, q_order + 1):
        qk = QSeries.monomial(Fraction(1), k, q_order)
        for sgn in (1, -1):
            f = [qk * (-e) for e in exp_series(sgn, n)]
            f[0] = f[0] + one
            out = series_mul(out, f, n)
        norm = (one - qk) * (one - qk)
        out = [c * norm.inverse() for c in out]
    out[0] = QSeries.const(Fraction(0), q_order)
    if not out[1] == 1:
        raise ArithmeticError("σ series does not start with x")
    out[1] = one
    return CharacteristicSeries(tuple(out), "witten")


def ochanine_x_series(q_order: int, cap: int = 17) -> CharacteristicSeries:
    """s(x) = −2(1−e^x)/(1+e^x)·∏(1−qⁿe^x)(1−qⁿe^{−x})(1+qⁿ)²/((1+qⁿe^x)(1+qⁿe^{−x})(1−qⁿ)²)."""
    n = cap + 1
    one = QSeries.const(Fraction(1), q_order)
    ex = [QSeries.const(c, q_order) for c in exp_series(1, n)]
    num = [e * 2 for e in ex]
    num[0] = num[0] - 2
    den = list(ex)
    den[0] = den[0] + one
    for k in range(1, q_order + 1):
        qk = QSeries.monomial(Fraction(1), k, q_order)
        for sgn in (1, -1):
            fn = [qk * (-e) for e in exp_series(sgn, n)]
            fn[0] = fn[0] + one
            fd = [qk * e for e in exp_series(sgn, n)]
            fd[0] = fd[0] + one
            num = series_mul(num, fn, n)
            den = series_mul(den, fd, n)
        num = [c * ((one + qk) * (one + qk)) for c in num]
        den = [c * ((one - qk) * (one - qk)) for c in den]
    out = series_mul(num, series_inv(den, n), n)
    out[0] = QSeries.const(Fraction(0), q_order)
    return CharacteristicSeries(tuple(out), "ochanine")


def series_from_theta(theta: ThetaFunction, cap: int = 8) -> CharacteristicSeries:
    """Complex Taylor series of θ at 0, normalized so the linear term is 1.

    Roundoff in the even coefficients is zeroed (θ is odd by construction).
    """
    c = theta_jet(theta, 0j, cap, cap=max(cap, 8)).coeffs
    c = c / c[1]
    c[0::2] = 0
    c[1] = 1
    return CharacteristicSeries(tuple(complex(x) for x in c), theta.kind)


# ---------------------------------------------------------------- Witten genus routes

def witten_genus_q(M: ManifoldData, q_order: int = 10) -> QSeries:
    """q-expansion of the σ-genus of M through q^{q_order}."""
    if q_order > Q_ORDER_CAP:
        raise ValueError(f"q_order above the cap {Q_ORDER_CAP}")
    ser = sigma_x_series(q_order, cap=max(M.dim // 2 + 1, 3))
    res = genus_eval(ser, M)
    return res if isinstance(res, QSeries) else QSeries.const(res, q_order)


def sym_t_chern_character(roots: Sequence[Sequence], n: int, q_order: int, x_order: int) -> list:
    """Chern character of Sym_{qⁿ}(L + L̄ − 2) summed over the given roots.

    Each root is an x-series (e.g. [0, 1] for x).  The factor per root is
    (1−qⁿ)²/((1−qⁿe^ρ)(1−qⁿe^{−ρ})), expanded geometrically.  Returns an
    x-series with QSeries coefficients through x^{x_order-1}.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    N = x_order
    one = QSeries.const(Fraction(1), q_order)
    out = [one] + [QSeries.const(Fraction(0), q_order) for _ in range(N - 1)]
    qn = QSeries.monomial(Fraction(1), n, q_order)
    norm = (one - qn) * (one - qn)
    for rho in roots:
        rho = [Fraction(c) for c in rho] + [Fraction(0)] * max(0, N - len(rho))
        if rho[0] != 0:
            raise ValueError("roots must be nilpotent (no constant term)")
        for sgn in (1, -1):
            geo = [QSeries.const(Fraction(0), q_order) for _ in range(N)]
            for k in range(0, q_order // n + 1):
                ek = series_exp([c * (sgn * k) for c in rho[:N]], N)
                qk = QSeries.monomial(Fraction(1), n * k, q_order)
                geo = [g + qk * e for g, e in zip(geo, ek)]
            out = series_mul(out, geo, N)
        out = [c * norm for c in out]
    return out


def _bernoulli(n: int) -> list:
    B = [Fraction(0)] * (n + 1)
    B[0] = Fraction(1)
    for m in range(1, n + 1):
        B[m] = -sum(math.comb(m + 1, k) * B[k] for k in range(m)) / Fraction(m + 1)
    return B


def a_hat_multiplicative(n: int) -> list:
    """x/(e^{x/2} − e^{−x/2}) through x^{n-1}, from t/sinh t = Σ(2 − 2^{2k})B_{2k}t^{2k}/(2k)!, t = x/2."""
    B = _bernoulli(n)
    out = [Fraction(0)] * n
    for k in range(0, (n - 1) // 2 + 1):
        c = (2 - 2 ** (2 * k)) * B[2 * k] / math.factorial(2 * k)
        out[2 * k] = c / Fraction(2) ** (2 * k)
    return out


def twisted_a_hat(M: ManifoldData, q_order: int = 10) -> QSeries:
    """⟨Â(M)·ch(⊗_n Sym_{qⁿ}(T_ℂM − rank)), [M]⟩ as a q-series.

    With roots ±x_j the twisting is multiplicative per x_j, so the pairing runs
    through the same Pontryagin-number engine with Q = Â-factor × Sym-factor.
    """
    if q_order > Q_ORDER_CAP:
        raise ValueError(f"q_order above the cap {Q_ORDER_CAP}")
    N = M.dim // 2 + 1
    Q = [QSeries.const(c, q_order) for c in a_hat_multiplicative(N)]
    for n in range(1, q_order + 1):
        Q = series_mul(Q, sym_t_chern_character([[0, 1]], n, q_order, N), N)
    res = genus_from_multiplicative(Q, M)
    return res if isinstance(res, QSeries) else QSeries.const(res, q_order)


# ---------------------------------------------------------------- Euler classes

def euler_class(theta: ThetaFunction, roots, z: complex, ring=None):
    """∏ θ(x_j + m_j z) for nilpotent roots x_j (NilpotentClass) and integer weights m_j.

    The result need not be a unit (e.g. θ(x) with m = 0); check ``is_unit``
    before inverting.
    """
    roots = list(roots)
    if not roots:
        if ring is None:
            return 1.0 + 0j
        return ring.one()
    ring = roots[0][0].ring
    out = ring.one()
    for x, m in roots:
        w = m * complex(z) + x.constant
        jet = theta_jet(theta, w, ring.top)
        out = out * x.apply_series(jet.coeffs)
    return out


def ahat_value(M: ManifoldData) -> Fraction:
    return genus_eval(a_hat_series(max(M.dim // 2 + 1, 3)), M)
