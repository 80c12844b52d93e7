"""Fixed-point data of circle manifolds with a pair of bundles (V, T), and the
Thom-section construction checked on it.

Over a fixed component F the bundles split into summands on which the circle
acts by z^m.  Each summand carries its rank d and Chern roots, which are exact
integer linear forms in the degree-2 generators of a truncated cohomology
ring.  Numerical work happens at sampled z with exact nilpotent algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.stats import qmc

from .lattice import CurvePoint, Lattice, torsion_points
from .nilpotent import LinearForm, NilpotentClass, NilpotentRing
from .theta import ThetaFunction, theta_jet

SINGULAR_TOL = 1e-3
DEFAULT_SAMPLES = 20
SAMPLE_RADIUS = 0.3
SAMPLE_CENTER_COORDS = (0.1234, 0.0813)


# ---------------------------------------------------------------- data types

@dataclass(frozen=True)
class BundleSummand:
    """A summand T(m) or V(m): rotation number m, rank d, Chern roots."""

    m: int
    d: int
    roots: tuple

    def __post_init__(self):
        roots = tuple(r if isinstance(r, LinearForm) else LinearForm(r) for r in self.roots)
        if not roots:
            roots = tuple(LinearForm() for _ in range(self.d))
        object.__setattr__(self, "roots", roots)
        if len(roots) != self.d:
            raise ValueError("number of roots must equal the rank")
        if self.d <= 0:
            raise ValueError("rank must be positive")
        for r in roots:
            if any(c.denominator != 1 for c in r.coeffs.values()):
                raise ValueError("roots must have integer coefficients")

    def c1(self) -> LinearForm:
        out = LinearForm()
        for r in self.roots:
            out = out + r
        return out

    def flipped(self) -> "BundleSummand":
        return BundleSummand(-self.m, self.d, tuple(-r for r in self.roots))


@dataclass(frozen=True)
class EqClass:
    """Equivariant degree-2 class c·z + (linear form in the generators)."""

    zcoef: Fraction = Fraction(0)
    nil: LinearForm = field(default_factory=LinearForm)

    def __add__(self, other):
        return EqClass(self.zcoef + other.zcoef, self.nil + other.nil)

    def __neg__(self):
        return EqClass(-self.zcoef, -self.nil)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return EqClass(self.zcoef * k, self.nil * k)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, EqClass) and self.zcoef == other.zcoef and self.nil == other.nil

    def value(self, ring: NilpotentRing, z: complex) -> NilpotentClass:
        return ring.const(complex(self.zcoef) * z) + self.nil.to_class(ring)

    @classmethod
    def of_summand(cls, s: BundleSummand) -> "EqClass":
        """Equivariant c1 of T(m): d·m·z + Σ roots."""
        return cls(Fraction(s.d * s.m), s.c1())


@dataclass(frozen=True)
class FixedComponent:
    ring: NilpotentRing
    T: tuple
    V: tuple
    fixed_T_roots: tuple = ()
    fixed_V_roots: tuple = ()
    delta: int = 0
    delta_prime: int = 0
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "T", tuple(self.T))
        object.__setattr__(self, "V", tuple(self.V))
        object.__setattr__(self, "fixed_T_roots", tuple(LinearForm(r) if not isinstance(r, LinearForm) else r
                                                        for r in self.fixed_T_roots))
        object.__setattr__(self, "fixed_V_roots", tuple(LinearForm(r) if not isinstance(r, LinearForm) else r
                                                        for r in self.fixed_V_roots))
        for s in self.T + self.V:
            if s.m == 0:
                raise ValueError("rotation numbers of moving summands must be nonzero")
            for r in s.roots:
                for g in r.coeffs:
                    if g not in self.ring.generators:
                        raise ValueError(f"unknown generator {g!r}")
        if self.delta not in (0, 1) or self.delta_prime not in (0, 1):
            raise ValueError("delta and delta_prime must be 0 or 1")

    def rotation_numbers(self) -> list:
        return [s.m for s in self.T + self.V]

    def with_orientation(self, delta: int, delta_prime: int) -> "FixedComponent":
        return replace(self, delta=delta, delta_prime=delta_prime)


@dataclass(frozen=True)
class SpecialPointData:
    """A lift a of a point of exact order n, with λ = na and its character data."""

    a: complex
    n: int
    theta: ThetaFunction

    def __post_init__(self):
        L = self.theta.lattice
        if self.n < 1:
            raise ValueError("order must be positive")
        if not L.is_lattice_vector(self.n * self.a):
            raise ValueError("n·a is not a lattice vector")
        for k in range(1, self.n):
            if L.is_lattice_vector(k * self.a):
                raise ValueError(f"a has order {k} < n")

    @classmethod
    def from_coords(cls, s: float, t: float, n: int, theta: ThetaFunction) -> "SpecialPointData":
        return cls(theta.lattice.from_coords(s, t), n, theta)

    @property
    def lam(self) -> complex:
        return self.n * self.a

    @property
    def lam_indices(self) -> tuple:
        return self.theta.lattice.lattice_indices(self.lam)

    @property
    def h(self):
        return Fraction(self.n, 2)

    @property
    def gamma(self) -> complex:
        return self.theta.character.gamma(*self.lam_indices)

    def c_mult(self, k: int) -> int:
        """c(kλ)."""
        j, kk = self.lam_indices
        return self.theta.character.c(k * j, k * kk)

    def S(self, x):
        """e^{γ(λ)x} for a number or a nilpotent class."""
        if isinstance(x, NilpotentClass):
            return (x * self.gamma).exp()
        return np.exp(self.gamma * x)


@dataclass(frozen=True)
class RotationDecomposition:
    ell: int
    r: int
    flipped: bool


def decompose(m: int, n: int) -> RotationDecomposition:
    """Write ±m = nℓ + r with 0 < r < n/2, or r ∈ {0, n/2}; flip only when needed."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rho = m % n
    if rho == 0 or 2 * rho == n or 2 * rho < n:
        return RotationDecomposition((m - rho) // n, rho, False)
    mf = -m
    rho = mf % n
    return RotationDecomposition((mf - rho) // n, rho, True)


def decomposed_summands(F: FixedComponent, n: int):
    """Summands with signs chosen as in ``decompose``, paired with their (ℓ, r)."""
    def go(lst):
        out = []
        for s in lst:
            dec = decompose(s.m, n)
            out.append((s.flipped() if dec.flipped else s, dec))
        return out
    return go(F.T), go(F.V)


# ---------------------------------------------------------------- CCR validation

def ccr_validate(F: FixedComponent, orders: Sequence[int] = (), mode: str = "strict") -> dict:
    """Exact checks of the characteristic class restrictions on one component.

    Always: Σdm² equal (z-2) and Σm·Σx equal (z-1).  In strict mode also
    Σdm ≡ Σd'm' mod 2 (z-3); the weaker 'p1' mode drops it.  For each order n
    in ``orders`` the congruences on Σ_{0<r<h} r(c1T_r − c1V_r) are checked.
    """
    if mode not in ("strict", "p1"):
        raise ValueError("mode must be 'strict' or 'p1'")
    rep: dict = {}
    dm2 = sum(s.d * s.m * s.m for s in F.T), sum(s.d * s.m * s.m for s in F.V)
    rep["z-2"] = dm2[0] == dm2[1]
    z1T = LinearForm()
    for s in F.T:
        z1T = z1T + s.c1() * s.m
    z1V = LinearForm()
    for s in F.V:
        z1V = z1V + s.c1() * s.m
    rep["z-1"] = z1T == z1V
    if mode == "strict":
        rep["z-3"] = (sum(s.d * s.m for s in F.T) - sum(s.d * s.m for s in F.V)) % 2 == 0
    for n in orders:
        if n < 2:
            continue
        rep.update(_ccr_mod(F, n))
    rep["pass"] = all(v for k, v in rep.items())
    return rep


def _ccr_mod(F: FixedComponent, n: int) -> dict:
    T, V = decomposed_summands(F, n)
    S = LinearForm()
    for s, dec in T:
        if 0 < 2 * dec.r < n:
            S = S + s.c1() * dec.r
    for s, dec in V:
        if 0 < 2 * dec.r < n:
            S = S - s.c1() * dec.r
    if n % 2:
        return {f"mod-{n}": S.divisible_by(n)}
    h = n // 2
    out = {f"mod-{n}-h": S.divisible_by(h)}
    w = LinearForm()
    for s, dec in V:
        if 2 * dec.r == n:
            w = w + s.c1()
    for s, dec in T:
        if 2 * dec.r == n:
            w = w - s.c1()
    diff = S * Fraction(1, h) - w
    out[f"mod-{n}-w2"] = out[f"mod-{n}-h"] and diff.divisible_by(2)
    return out


# ---------------------------------------------------------------- quantities

@dataclass(frozen=True)
class Quantities:
    eps: int
    alpha: Fraction
    G: Fraction
    H: EqClass
    c1_calV: EqClass
    c1_h: EqClass
    ranks_T: dict
    ranks_V: dict


def quantities(F: FixedComponent, sp: SpecialPointData) -> Quantities:
    """ε, α, G, H, c1(𝒱|F) and c1(V_h − T_h) for one component and special point."""
    n = sp.n
    T, V = decomposed_summands(F, n)
    delta, deltap = (F.delta, F.delta_prime) if n % 2 == 0 else (0, 0)
    k = deltap + sum(s.d * dec.ell for s, dec in V) - delta - sum(s.d * dec.ell for s, dec in T)
    eps = sp.c_mult(k)
    eT: dict = {}
    eV: dict = {}
    for s, dec in T:
        eT[dec.r] = eT.get(dec.r, 0) + s.d
    for s, dec in V:
        eV[dec.r] = eV.get(dec.r, 0) + s.d
    alpha = -Fraction(1, 2 * n) * sum((eV.get(r, 0) - eT.get(r, 0)) * r * r
                                      for r in set(eT) | set(eV) if r > 0)
    G = sum((Fraction(n, 2) * (s.d * dec.ell**2) + s.d * dec.ell * dec.r for s, dec in V), Fraction(0)) \
        - sum((Fraction(n, 2) * (s.d * dec.ell**2) + s.d * dec.ell * dec.r for s, dec in T), Fraction(0))
    H = EqClass()
    for s, dec in V:
        H = H + EqClass.of_summand(s) * dec.ell
    for s, dec in T:
        H = H - EqClass.of_summand(s) * dec.ell
    c1 = EqClass()
    c1h = EqClass()
    for s, dec in T:
        if 0 < 2 * dec.r < n:
            c1 = c1 + EqClass.of_summand(s) * dec.r
        elif 2 * dec.r == n:
            c1h = c1h - EqClass.of_summand(s)
    for s, dec in V:
        if 0 < 2 * dec.r < n:
            c1 = c1 - EqClass.of_summand(s) * dec.r
        elif 2 * dec.r == n:
            c1h = c1h + EqClass.of_summand(s)
    return Quantities(eps, alpha, G, H, c1, c1h, eT, eV)


def root_identity_holds(F: FixedComponent, sp: SpecialPointData) -> bool:
    """c1(𝒱|F) = nH (odd n) or nH + h·c1(V_h − T_h) (even n), exactly."""
    q = quantities(F, sp)
    rhs = q.H * sp.n
    if sp.n % 2 == 0:
        rhs = rhs + q.c1_h * Fraction(sp.n, 2)
    return q.c1_calV == rhs


# ---------------------------------------------------------------- cocycles

def _theta_of(theta: ThetaFunction, ring: NilpotentRing, root: LinearForm, w: complex) -> NilpotentClass:
    """θ(x + w) for a nilpotent root x and a numeric offset w."""
    jet = theta_jet(theta, complex(w), ring.top)
    return root.to_class(ring).apply_series(jet.coeffs)


def _block(theta, ring, summands, z, offset=0j) -> NilpotentClass:
    out = ring.one()
    for s in summands:
        for x in s.roots:
            out = out * _theta_of(theta, ring, x, s.m * z + offset)
    return out


def _ratio(theta, ring, V, T, z, offset=0j) -> NilpotentClass:
    num = _block(theta, ring, V, z, offset)
    den = _block(theta, ring, T, z, offset)
    if not den.is_unit(1e-300):
        raise ZeroDivisionError("Euler class in the denominator is not a unit")
    return num * den.inverse()


def euler_cocycle_e0b(F: FixedComponent, z: complex, theta: ThetaFunction, T=None, V=None) -> NilpotentClass:
    """∏θ(x' + m'z)/∏θ(x + mz) over all moving summands."""
    return _ratio(theta, F.ring, F.V if V is None else V, F.T if T is None else T, z)


def ellipticity_check(F: FixedComponent, theta: ThetaFunction, lam: complex, zs) -> dict:
    """Coefficient-wise residual of e(0,b)(z+λ) against e(0,b)(z)."""
    worst, used, skipped = 0.0, 0, 0
    for z in zs:
        try:
            a = euler_cocycle_e0b(F, z + lam, theta)
            b = euler_cocycle_e0b(F, z, theta)
        except ZeroDivisionError:
            skipped += 1
            continue
        worst = max(worst, _resid(a, b))
        used += 1
    return {"max_residual": worst, "used": used, "skipped": skipped}


def _resid(a: NilpotentClass, b: NilpotentClass) -> float:
    return float(np.max(np.abs(a.coeffs - b.coeffs)) / max(1.0, b.max_abs()))


def e_ab(F: FixedComponent, sp: SpecialPointData, z: complex, theta: ThetaFunction) -> NilpotentClass:
    """Euler cocycle between U_a and an ordinary chart, in the local coordinate at a.

    It is the ratio over summands fixed by a (m ≡ 0 mod n), carrying the
    orientation sign (−1)^{δ'+δ} when n is even.
    """
    T, V = decomposed_summands(F, sp.n)
    T0 = [s for s, dec in T if dec.r == 0]
    V0 = [s for s, dec in V if dec.r == 0]
    out = _ratio(theta, F.ring, V0, T0, z)
    if sp.n % 2 == 0 and (F.delta + F.delta_prime) % 2:
        out = -out
    if not out.is_unit(1e-300):
        raise ZeroDivisionError("e(a,b) is not a unit")
    return out


def chart_cocycle(F: FixedComponent, a: CurvePoint, b: CurvePoint, p: complex, theta: ThetaFunction) -> NilpotentClass:
    """Ratio over summands with m ∈ M(a) \\ M(b), in the coordinate p − a.

    M(x) is the set of rotation numbers killed by x: the multiples of ord(x),
    or only 0 when x has no finite order.
    """
    oa = a.order(200)
    ob = b.order(200)

    def kept(m):
        in_a = oa is not None and m % oa == 0
        in_b = ob is not None and m % ob == 0
        return in_a and not in_b

    z = p - a.lift
    V = [s for s in F.V if kept(s.m)]
    T = [s for s in F.T if kept(s.m)]
    return _ratio(theta, F.ring, V, T, z)


def cocycle_check(F: FixedComponent, a: CurvePoint, b: CurvePoint, c: CurvePoint, ps, theta: ThetaFunction) -> dict:
    """Residual of e(a,b)·e(b,c) = e(a,c) at points p of the triple overlap."""
    worst = 0.0
    for p in ps:
        lhs = chart_cocycle(F, a, b, p, theta) * chart_cocycle(F, b, c, p, theta)
        rhs = chart_cocycle(F, a, c, p, theta)
        worst = max(worst, _resid(lhs, rhs))
    return {"max_residual": worst, "used": len(list(ps))}


# ---------------------------------------------------------------- Θ_a and the transfer equation

def theta_section(F: FixedComponent, sp: SpecialPointData, z: complex, theta: ThetaFunction) -> NilpotentClass:
    """Θ_a restricted to F at the local coordinate z.

    ε·S(aα)·S(c1(𝒱|F)/n)·∏_{0<r<h} Q_r(V_r)/Q_r(T_r), with Q_r(x) = θ(x + ra);
    for even n also (−c(λ))^{δ'−δ}·∏Q_h(V_h)/Q_h(T_h), Q_h(x) = S(−x/2)θ(x + λ/2).
    The n-th root of 𝒱 enters only through c1(𝒱|F)/n.
    """
    ring = F.ring
    n = sp.n
    q = quantities(F, sp)
    T, V = decomposed_summands(F, n)
    out = ring.const(q.eps * sp.S(sp.a * complex(q.alpha)))
    out = out * sp.S((q.c1_calV * Fraction(1, n)).value(ring, z))
    for r in range(1, (n + 1) // 2):
        if 2 * r >= n:
            break
        Vr = [s for s, dec in V if dec.r == r]
        Tr = [s for s, dec in T if dec.r == r]
        out = out * _ratio(theta, ring, Vr, Tr, z, r * sp.a)
    if n % 2 == 0:
        h = n // 2
        Vh = [s for s, dec in V if dec.r == h]
        Th = [s for s, dec in T if dec.r == h]
        sign = (-sp.c_mult(1)) ** ((F.delta_prime - F.delta) % 2)
        out = out * sign
        out = out * _q_h_block(theta, ring, Vh, z, sp) * _q_h_block(theta, ring, Th, z, sp).inverse()
    return out


def _q_h_block(theta, ring, summands, z, sp: SpecialPointData) -> NilpotentClass:
    out = ring.one()
    half = sp.lam / 2
    for s in summands:
        for x in s.roots:
            y = x.to_class(ring) + ring.const(s.m * z)
            out = out * sp.S(y * (-0.5)) * _theta_of(theta, ring, x, s.m * z + half)
    return out


def q_h_series(theta: ThetaFunction, sp: SpecialPointData, order: int = 6) -> np.ndarray:
    """Taylor coefficients of Q_h(x) = e^{−γx/2}θ(x + λ/2) at x = 0."""
    jet = theta_jet(theta, sp.lam / 2, order).coeffs
    g = sp.gamma
    e = np.array([(-g / 2) ** k / math.factorial(k) for k in range(order + 1)])
    return np.convolve(e, jet)[: order + 1]


def transfer_sides(F: FixedComponent, sp: SpecialPointData, z: complex, theta: ThetaFunction):
    """(e(a,b)⁻¹·e(0,b)(z + a), Θ_a(z)), using the sign choices of ``decompose``."""
    T, V = decomposed_summands(F, sp.n)
    Tf = [s for s, _ in T]
    Vf = [s for s, _ in V]
    shifted = euler_cocycle_e0b(F, z + sp.a, theta, T=Tf, V=Vf)
    lhs = e_ab(F, sp, z, theta).inverse() * shifted
    rhs = theta_section(F, sp, z, theta)
    return lhs, rhs


def _singular(F: FixedComponent, sp: SpecialPointData, z: complex, theta: ThetaFunction, tol: float) -> bool:
    L = theta.lattice
    N = theta.character.level
    offs = []
    for s in F.T + F.V:
        offs += [s.m * z, s.m * (z + sp.a)]
        r = s.m % sp.n
        offs += [s.m * z + r * sp.a, s.m * z - r * sp.a]
    return any(L.distance(N * w, 0) < N * tol for w in offs)


def transfer_check(F: FixedComponent, sp: SpecialPointData, zs, theta: ThetaFunction,
                   skip: float = SINGULAR_TOL) -> dict:
    """Max coefficient-wise residual of the transfer equation over samples."""
    if sp.n == 1:
        return {"max_residual": 0.0, "used": len(list(zs)), "skipped": 0}
    worst, used, skipped = 0.0, 0, 0
    for z in zs:
        if _singular(F, sp, z, theta, skip):
            skipped += 1
            continue
        try:
            lhs, rhs = transfer_sides(F, sp, z, theta)
        except (ZeroDivisionError, ValueError):
            skipped += 1
            continue
        worst = max(worst, _resid(lhs, rhs))
        used += 1
    return {"max_residual": worst, "used": used, "skipped": skipped}


def default_samples(L: Lattice, n: int = DEFAULT_SAMPLES, seed: int = 0,
                    center: complex | None = None, radius: float = SAMPLE_RADIUS) -> np.ndarray:
    """Scrambled Halton points mapped into a disc around a generic point."""
    if center is None:
        center = L.from_coords(*SAMPLE_CENTER_COORDS)
    u = qmc.Halton(d=2, scramble=True, seed=seed).random(n)
    r = radius * np.sqrt(u[:, 0])
    ang = 2 * np.pi * u[:, 1]
    return center + r * np.exp(1j * ang)


# ---------------------------------------------------------------- fixed-point models

@dataclass(frozen=True)
class FixedPointModel:
    """Fixed components of a circle manifold, grouped into components P of X^{Z/n}.

    ``groups`` maps n to a list of lists of component indices; ``isotropy``
    lists orders k with X^{Z/k} ≠ X^T.
    """

    components: tuple
    groups: dict = field(default_factory=dict)
    isotropy: tuple = ()
    special: tuple = ()
    name: str = ""

    def rotation_numbers(self) -> list:
        out = []
        for F in self.components:
            out += F.rotation_numbers()
        return out

    def isotropy_orders(self) -> list:
        return list(self.isotropy)


def special_point_data(model: FixedPointModel, theta: ThetaFunction) -> list:
    """Listed special points, or every point of exact order n ≥ 2 with n | some m."""
    L = theta.lattice
    if model.special:
        return [SpecialPointData.from_coords(s, t, n, theta) for (s, t), n in model.special]
    ms = {abs(m) for m in model.rotation_numbers()} | set(model.isotropy)
    out = []
    seen = set()
    for m in sorted(ms):
        for p in torsion_points(L, m):
            n = p.order(m)
            if n is None or n < 2 or p in seen:
                continue
            seen.add(p)
            out.append(SpecialPointData(p.lift, n, theta))
    return out


def epsilon_constancy(model: FixedPointModel, sp: SpecialPointData) -> bool:
    """ε agrees on all components inside each listed P."""
    for group in model.groups.get(sp.n, [list(range(len(model.components)))]):
        vals = {quantities(model.components[i], sp).eps for i in group}
        if len(vals) > 1:
            return False
    return True


def rigidity_localized(model: FixedPointModel, theta: ThetaFunction, zs) -> np.ndarray:
    """Σ_F ∫_F ∏_{V(0)}θ̂(y')·∏_{T(0)} y/θ̂(y)·∏θ(x'+m'z)/∏θ(x+mz) at each z."""
    vals = []
    for z in zs:
        total = 0j
        for F in model.components:
            ring = F.ring
            top = ring.top
            base = theta_jet(theta, 0j, top + 1).coeffs
            integrand = euler_cocycle_e0b(F, z, theta)
            for y in F.fixed_V_roots:
                integrand = integrand * y.to_class(ring).apply_series(base)
            unit = base[1:]  # θ̂(y)/y
            for y in F.fixed_T_roots:
                integrand = integrand * y.to_class(ring).apply_series(unit).inverse()
            total += integrand.integrate()
        vals.append(total)
    return np.array(vals)


def spread(values) -> float:
    v = np.asarray(values)
    return float(np.max(np.abs(v - v[0])))


# ---------------------------------------------------------------- builders and corruption

def point_component(f, name: str = "") -> FixedComponent:
    """Isolated fixed point whose V − T is the virtual rep f: d > 0 in V, d < 0 in T."""
    ring = NilpotentRing((), 0, {})
    T = [BundleSummand(m, -d, ()) for m, d in f.nonzero() if d < 0]
    V = [BundleSummand(m, d, ()) for m, d in f.nonzero() if d > 0]
    return FixedComponent(ring, T, V, name=name or str(f))


def w_zero_component(F: FixedComponent) -> FixedComponent:
    """The same component with V replaced by T."""
    return replace(F, V=F.T, fixed_V_roots=F.fixed_T_roots, delta_prime=F.delta)


def corrupt(F: FixedComponent, which: str) -> FixedComponent:
    """Break one CCR identity.

    'z-2' adds V(2) of rank 1 and T(1) of rank 2, so Σdm² moves by 2 while
    Σdm and Σm·Σx stay put; 'z-1' changes one Chern root;
    'z-3' shifts a rotation number of an odd-rank summand by one (which
    necessarily moves Σdm² as well).
    """
    if which == "z-1":
        if not F.ring.generators:
            raise ValueError("z-1 is vacuous without generators")
        s = F.V[0]
        g = F.ring.generators[0]
        roots = (s.roots[0] + LinearForm({g: 1}),) + s.roots[1:]
        return replace(F, V=(BundleSummand(s.m, s.d, roots),) + F.V[1:])
    if which == "z-2":
        extra_V = BundleSummand(2, 1, ())
        extra_T = BundleSummand(1, 2, ())
        return replace(F, V=F.V + (extra_V,), T=F.T + (extra_T,))
    if which == "z-3":
        for i, s in enumerate(F.V):
            if s.d % 2:
                new = BundleSummand(s.m + 1, s.d, s.roots)
                return replace(F, V=F.V[:i] + (new,) + F.V[i + 1:])
        s = F.V[0]
        new = BundleSummand(s.m, s.d + 1, s.roots + (LinearForm(),))
        return replace(F, V=(new,) + F.V[1:])
    if which == "rotation":
        s = F.V[0] if F.V else F.T[0]
        new = BundleSummand(s.m + 1, s.d, s.roots)
        if F.V:
            return replace(F, V=(new,) + F.V[1:])
        return replace(F, T=(new,) + F.T[1:])
    raise ValueError(f"unknown corruption {which!r}")


# ---------------------------------------------------------------- model-level report

def q_h_sign_residual(theta: ThetaFunction, sp: SpecialPointData, order: int = 6) -> float:
    """Residual of Q_h(−x) = −c(λ)·Q_h(x) as jets at x = 0."""
    q = q_h_series(theta, sp, order)
    flipped = q * np.array([(-1) ** k for k in range(order + 1)])
    return float(np.max(np.abs(flipped + sp.c_mult(1) * q)) / max(1.0, np.max(np.abs(q))))


def _three_charts(sp: SpecialPointData, L: Lattice):
    """A special chart at a and two ordinary charts b, c with a common point p."""
    rho = 0.05 * L.min_length() / sp.n
    a = CurvePoint(sp.a, L)
    b = CurvePoint(sp.a + rho * np.exp(0.7j), L)
    c = CurvePoint(sp.a + rho * np.exp(2.1j), L)
    ps = [sp.a + 0.6 * rho * np.exp(1j * t) for t in (0.3, 1.4, 2.5, 4.0, 5.3)]
    return a, b, c, ps


def verify_model(model: FixedPointModel, theta: ThetaFunction, zs=None, tol: float = 1e-8,
                 ccr_mode: str = "strict") -> dict:
    """Run every check on a model; the report lists each residual and a pass flag."""
    L = theta.lattice
    if zs is None:
        zs = default_samples(L)
    specials = special_point_data(model, theta)
    orders = sorted({sp.n for sp in specials})
    rep: dict = {"components": [], "special_points": [], "checks": {}}
    ok = True
    for i, F in enumerate(model.components):
        ccr = ccr_validate(F, orders, ccr_mode)
        ell = {f"{j},{k}": ellipticity_check(F, theta, L.vector(j, k), zs)["max_residual"]
               for j, k in ((1, 0), (0, 1), (1, 1))}
        rep["components"].append({"name": F.name or str(i), "ccr": ccr, "ellipticity": ell})
        ok &= ccr["pass"] and max(ell.values()) < tol
    for sp in specials:
        entry = {"a": sp.a, "n": sp.n, "lambda": list(sp.lam_indices), "components": []}
        if sp.n % 2 == 0 and theta.has_pole(sp.lam / 2):
            # Q_h(x) = S(−x/2)θ(x + λ/2) is not defined
            entry["undefined"] = "theta has a pole at lambda/2"
            rep["special_points"].append(entry)
            continue
        for F in model.components:
            q = quantities(F, sp)
            tr = transfer_check(F, sp, zs, theta)
            e = {"eps": q.eps, "alpha": str(q.alpha), "G": str(q.G),
                 "alpha_equals_G": q.alpha == q.G, "root_identity": root_identity_holds(F, sp),
                 "transfer": tr["max_residual"], "used": tr["used"], "skipped": tr["skipped"]}
            if sp.n > 1:
                e["cocycle"] = cocycle_check(F, *_three_charts(sp, L), theta)["max_residual"]
            else:
                e["cocycle"] = 0.0
            ok &= e["alpha_equals_G"] and e["root_identity"] and tr["max_residual"] < tol \
                and tr["used"] > 0 and e["cocycle"] < tol
            entry["components"].append(e)
        entry["eps_constant"] = epsilon_constancy(model, sp)
        ok &= entry["eps_constant"]
        if sp.n % 2 == 0:
            entry["q_h_sign"] = q_h_sign_residual(theta, sp)
            ok &= entry["q_h_sign"] < tol
        rep["special_points"].append(entry)
    rep["pass"] = bool(ok)
    return rep
