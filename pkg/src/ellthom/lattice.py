"""Lattices, points of the quotient curve, divisors and adapted disc covers.

The curve is C = ℂ/Λ with Λ = 2πiℤ + 2πiτℤ ("witten" scale) or
Λ = 2πiℤ + 4πiτℤ ("ochanine" scale).  Points are stored through their lattice
coordinates (s, t) with z = s·g1 + t·g2, which makes equality on C a question
about integers up to a fixed tolerance.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

TWO_PI_I = 2j * math.pi
TOL_LATTICE = 1e-9
_ROUND = 9


def _wrap01(x: float) -> float:
    """Reduce a real number into [0, 1), snapping values within tol of an integer."""
    f = x - math.floor(x)
    if f > 1.0 - TOL_LATTICE or f < TOL_LATTICE:
        return 0.0
    return f


@functools.lru_cache(maxsize=256)
def _gauss_reduce(a: complex, b: complex) -> tuple[complex, complex]:
    if abs(a) > abs(b):
        a, b = b, a
    while True:
        mu = round(((b * a.conjugate()).real) / abs(a) ** 2)
        b = b - mu * a
        if abs(b) >= abs(a):
            return a, b
        a, b = b, a


@functools.lru_cache(maxsize=256)
def _distance_data(g1: complex, g2: complex):
    a, b = _gauss_reduce(g1, g2)
    det = (a.conjugate() * b).imag
    shifts = tuple(j * a + k * b for j in range(-2, 3) for k in range(-2, 3))
    return a, b, det, shifts


@dataclass(frozen=True)
class Lattice:
    tau: complex
    scale: str = "witten"

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))
        if self.scale not in ("witten", "ochanine"):
            raise ValueError(f"unknown lattice scale {self.scale!r}")
        if not self.tau.imag > 0:
            raise ValueError("Im(tau) must be positive")

    @property
    def g1(self) -> complex:
        return TWO_PI_I

    @property
    def g2(self) -> complex:
        k = 2 if self.scale == "ochanine" else 1
        return k * TWO_PI_I * self.tau

    @property
    def q(self) -> complex:
        """Nome e^{2πiτ} (independent of the scale flag)."""
        return complex(np.exp(TWO_PI_I * self.tau))

    @property
    def generators(self) -> tuple[complex, complex]:
        return (self.g1, self.g2)

    def vector(self, j: int, k: int) -> complex:
        return j * self.g1 + k * self.g2

    def coords(self, z: complex) -> tuple[float, float]:
        """Real coordinates (s, t) with z = s·g1 + t·g2."""
        g1, g2 = self.g1, self.g2
        det = (g1.conjugate() * g2).imag
        z = complex(z)
        s = (z.conjugate() * g2).imag / det
        t = (g1.conjugate() * z).imag / det
        return s, t

    def from_coords(self, s: float, t: float) -> complex:
        return s * self.g1 + t * self.g2

    def is_lattice_vector(self, z: complex, tol: float = TOL_LATTICE) -> bool:
        s, t = self.coords(z)
        return abs(s - round(s)) < tol and abs(t - round(t)) < tol

    def lattice_indices(self, z: complex) -> tuple[int, int]:
        """Integer coordinates of a lattice vector; raises if z is not in Λ."""
        if not self.is_lattice_vector(z):
            raise ValueError(f"{z} is not a lattice vector")
        s, t = self.coords(z)
        return int(round(s)), int(round(t))

    def reduced_basis(self) -> tuple[complex, complex]:
        """Gauss-reduced basis (shortest vector first)."""
        return _gauss_reduce(self.g1, self.g2)

    def min_length(self) -> float:
        return abs(self.reduced_basis()[0])

    def distance(self, z: complex, w: complex) -> float:
        """Flat distance between the images of z and w on C."""
        a, b, det, shifts = _distance_data(self.g1, self.g2)
        d = complex(z) - complex(w)
        s = (d.conjugate() * b).imag / det
        t = (a.conjugate() * d).imag / det
        d = d - math.floor(s) * a - math.floor(t) * b
        return min(abs(d + v) for v in shifts)

    def to_json(self) -> dict:
        return {"tau": [self.tau.real, self.tau.imag], "scale": self.scale}

    @classmethod
    def from_json(cls, obj: dict) -> "Lattice":
        re, im = obj["tau"]
        return cls(complex(re, im), obj.get("scale", "witten"))


@dataclass(frozen=True, eq=False)
class CurvePoint:
    """A point of C, held as a lift in ℂ together with its lattice."""

    lift: complex
    lattice: Lattice

    @property
    def coords(self) -> tuple[float, float]:
        s, t = self.lattice.coords(self.lift)
        return _wrap01(s), _wrap01(t)

    @property
    def canonical(self) -> complex:
        return self.lattice.from_coords(*self.coords)

    def _key(self):
        s, t = self.coords
        s, t = round(s, _ROUND) % 1.0, round(t, _ROUND) % 1.0
        return (s, t, self.lattice)

    def __eq__(self, other):
        if not isinstance(other, CurvePoint) or other.lattice != self.lattice:
            return NotImplemented
        return self.lattice.is_lattice_vector(self.lift - other.lift)

    def __hash__(self):
        return hash(self._key())

    def __add__(self, other: "CurvePoint") -> "CurvePoint":
        return reduce(self.lift + other.lift, self.lattice)

    def __neg__(self) -> "CurvePoint":
        return reduce(-self.lift, self.lattice)

    def __sub__(self, other: "CurvePoint") -> "CurvePoint":
        return reduce(self.lift - other.lift, self.lattice)

    def scale(self, k: int) -> "CurvePoint":
        return reduce(k * self.lift, self.lattice)

    def is_zero(self) -> bool:
        return self.lattice.is_lattice_vector(self.lift)

    def order(self, max_order: int = 1000) -> int | None:
        """Exact order in the group C, or None if no order up to max_order."""
        for k in range(1, max_order + 1):
            if self.lattice.is_lattice_vector(k * self.lift):
                return k
        return None

    def __repr__(self):
        s, t = self.coords
        return f"CurvePoint(s={s:.6g}, t={t:.6g})"


def reduce(z: complex, L: Lattice) -> CurvePoint:
    """Canonical representative of z in the fundamental parallelogram."""
    s, t = L.coords(z)
    return CurvePoint(L.from_coords(_wrap01(s), _wrap01(t)), L)


def torsion_points(L: Lattice, n: int) -> list[CurvePoint]:
    """All n² points of C[n], in the order (j, k) lexicographic."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    return [reduce((j * L.g1 + k * L.g2) / n, L) for j in range(n) for k in range(n)]


@dataclass(frozen=True)
class Divisor:
    """Finite formal sum of points of C with integer multiplicities."""

    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for p, n in self.entries.items():
            p = reduce(p.lift, p.lattice)
            clean[p] = clean.get(p, 0) + int(n)
        object.__setattr__(self, "entries", {p: n for p, n in clean.items() if n != 0})

    @classmethod
    def from_points(cls, points: Iterable[CurvePoint], mult: int = 1) -> "Divisor":
        d: dict = {}
        for p in points:
            d[p] = d.get(p, 0) + mult
        return cls(d)

    def __add__(self, other: "Divisor") -> "Divisor":
        d = dict(self.entries)
        for p, n in other.entries.items():
            d[p] = d.get(p, 0) + n
        return Divisor(d)

    def __neg__(self) -> "Divisor":
        return Divisor({p: -n for p, n in self.entries.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __mul__(self, k: int) -> "Divisor":
        return Divisor({p: k * n for p, n in self.entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self.entries == other.entries

    def __len__(self):
        return len(self.entries)

    def mult(self, p: CurvePoint) -> int:
        return self.entries.get(reduce(p.lift, p.lattice), 0)

    def to_json(self) -> list:
        return [{"point": list(p.coords), "mult": n} for p, n in self.entries.items()]

    @classmethod
    def from_json(cls, obj: list, L: Lattice) -> "Divisor":
        return cls({reduce(L.from_coords(*e["point"]), L): int(e["mult"]) for e in obj})


def divisor_invariants(D: Divisor, L: Lattice | None = None) -> tuple[int, CurvePoint]:
    """Degree and group sum of a divisor.

    The lattice is needed only to name the origin of an empty divisor.
    """
    degree = sum(D.entries.values())
    if not D.entries:
        if L is None:
            raise ValueError("lattice required for the empty divisor")
        return 0, reduce(0, L)
    L = next(iter(D.entries)).lattice
    total = sum(n * p.lift for p, n in D.entries.items())
    return degree, reduce(total, L)


def line_bundle_trivial(D: Divisor) -> bool:
    """Abel-Jacobi test: degree zero and group sum zero."""
    if not D.entries:
        return True
    deg, s = divisor_invariants(D)
    return deg == 0 and s.is_zero()


def special_points(data, N: int, L: Lattice) -> set:
    """Torsion points special to level N for a virtual rep or a fixed-point model.

    ``data`` must expose ``rotation_numbers()`` (nonzero integers) and may expose
    ``isotropy_orders()``: orders k with X^{Z/k} strictly larger than X^T.  A
    point a is then special when N·ord(a) shares the isotropy or when mNa = 0
    for some rotation number m.
    """
    if N < 1:
        raise ValueError("N must be positive")
    out: set = set()
    ms = {abs(m) for m in data.rotation_numbers() if m != 0}
    for m in ms:
        out.update(torsion_points(L, m * N))
    iso = getattr(data, "isotropy_orders", None)
    for k in (iso() if iso else ()):
        # a point with stabiliser Z/k is fixed by Z/k' iff k' | k, i.e. Na ∈ C[k]
        for p in torsion_points(L, k * N):
            out.add(p)
    return out


@dataclass(frozen=True)
class OpenDisc:
    center: CurvePoint
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    def contains(self, p: CurvePoint) -> bool:
        return self.center.lattice.distance(self.center.lift, p.lift) < self.radius

    def meets(self, other: "OpenDisc") -> bool:
        L = self.center.lattice
        return L.distance(self.center.lift, other.center.lift) < self.radius + other.radius

    def is_small(self) -> bool:
        return self.radius < 0.5 * self.center.lattice.min_length()


@dataclass(frozen=True)
class AdaptedCover:
    """Finite description of an adapted indexed cover {U_a}.

    Special points get their own discs.  An ordinary centre b gets the disc of
    radius min(ordinary_radius, ½·dist(b, special set)).
    """

    lattice: Lattice
    special_discs: dict
    ordinary_radius: float

    def radius_at(self, b: CurvePoint) -> float:
        if b in self.special_discs:
            return self.special_discs[b].radius
        r = self.ordinary_radius
        for a in self.special_discs:
            r = min(r, 0.5 * self.lattice.distance(a.lift, b.lift))
        return r

    def disc(self, b: CurvePoint) -> OpenDisc:
        b = reduce(b.lift, self.lattice)
        return OpenDisc(b, self.radius_at(b))


def _min_special_distance(special: list, L: Lattice) -> float:
    d = L.min_length()
    for a, b in itertools.combinations(special, 2):
        d = min(d, L.distance(a.lift, b.lift))
    return d


def build_adapted_cover(special, L: Lattice) -> AdaptedCover:
    """Disc cover adapted to a finite special set.

    With d the least distance between distinct special points (or the shortest
    lattice vector if there are fewer than two), special discs have radius
    3d/8 and ordinary discs at most d/8.  Two special discs are then disjoint,
    and an ordinary disc can reach at most one of them.
    """
    special = [reduce(p.lift, L) for p in special]
    if len(set(special)) != len(special):
        raise ValueError("special points coincide after reduction")
    ell = L.min_length()
    if not special:
        return AdaptedCover(L, {}, 0.25 * ell)
    d = _min_special_distance(special, L)
    if d < TOL_LATTICE:
        raise ValueError("special points coincide after reduction")
    rs = min(0.375 * d, 0.45 * ell)
    ro = min(0.125 * d, rs / 3)
    return AdaptedCover(L, {a: OpenDisc(a, rs) for a in special}, ro)


def _probe_points(cover: AdaptedCover, n_grid: int = 24) -> list[CurvePoint]:
    L = cover.lattice
    pts = [reduce(L.from_coords(i / n_grid + 0.5 / n_grid, j / n_grid + 0.3 / n_grid), L)
           for i in range(n_grid) for j in range(n_grid)]
    for a, disc in cover.special_discs.items():
        for frac in (0.05, 0.5, 0.9, 1.0, 1.1, 1.5, 2.0):
            for ang in np.linspace(0, 2 * np.pi, 12, endpoint=False):
                pts.append(reduce(a.lift + frac * disc.radius * np.exp(1j * ang), L))
    special = set(cover.special_discs)
    return [p for p in pts if p not in special]


def _distance_matrix(L: Lattice, zs, ws) -> np.ndarray:
    """Flat distances on C between every z in zs and every w in ws."""
    a, b, det, shifts = _distance_data(L.g1, L.g2)
    d = np.asarray(zs, dtype=complex)[:, None] - np.asarray(ws, dtype=complex)[None, :]
    s = (np.conj(d) * b).imag / det
    t = (np.conj(a) * d).imag / det
    d = d - np.floor(s) * a - np.floor(t) * b
    return np.min(np.abs(d[..., None] + np.asarray(shifts)), axis=-1)


def verify_adapted(cover: AdaptedCover, special, probes=None) -> dict:
    """Check conditions 1)-5) of adaptedness; returns {condition: bool}.

    Ordinary centres are sampled on a grid plus rings around each special
    point; extra probes may be passed in.  Radii of ordinary discs follow
    ``AdaptedCover.radius_at``.
    """
    L = cover.lattice
    special = [reduce(p.lift, L) for p in special]
    probes = list(probes) if probes is not None else _probe_points(cover)
    sset = set(special)
    ordinary = [p for p in probes if p not in sset]
    if any(a not in cover.special_discs for a in special):
        return {1: False, 2: False, 3: False, 4: False, 5: False}
    small = 0.5 * L.min_length()
    sz = np.array([a.lift for a in special], dtype=complex)
    sr = np.array([cover.special_discs[a].radius for a in special])
    oz = np.array([b.lift for b in ordinary], dtype=complex)
    if len(special):
        d_os = _distance_matrix(L, oz, sz)
        orad = np.minimum(cover.ordinary_radius, 0.5 * d_os.min(axis=1)) if len(oz) else np.zeros(0)
        d_ss = _distance_matrix(L, sz, sz)
    else:
        d_os = np.zeros((len(oz), 0))
        orad = np.full(len(oz), cover.ordinary_radius)
        d_ss = np.zeros((0, 0))

    # 1) every disc contains its centre: radii are positive
    c1 = bool(np.all(sr > 0) and np.all(orad > 0))
    # 2) a special point lies in no disc but its own
    off = ~np.eye(len(special), dtype=bool)
    c2 = bool(np.all(d_ss[off] >= np.broadcast_to(sr[None, :], d_ss.shape)[off])) if len(special) else True
    c2 = c2 and bool(np.all(d_os >= orad[:, None]))
    # 3) special discs are pairwise disjoint
    c3 = bool(np.all(d_ss[off] >= (sr[:, None] + sr[None, :])[off])) if len(special) else True
    # 4) an ordinary disc meets at most one special disc
    c4 = bool(np.all(np.sum(d_os < orad[:, None] + sr[None, :], axis=1) <= 1))
    # 5) all discs are small
    c5 = bool(np.all(sr < small) and np.all(orad < small))
    return {1: c1, 2: c2, 3: c3, 4: c4, 5: c5}
