import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellthom.lattice import (AdaptedCover, CurvePoint, Divisor, Lattice, OpenDisc, build_adapted_cover,
                             divisor_invariants, line_bundle_trivial, reduce, special_points,
                             torsion_points, verify_adapted)
from ellthom.equivrep import VirtualRep

taus = st.builds(complex, st.floats(-0.5, 0.5), st.floats(0.3, 2.0))
coords = st.floats(-3, 3, allow_nan=False)


def test_generators_and_q():
    L = Lattice(0.3 + 0.9j, "witten")
    assert L.g1 == pytest.approx(2j * np.pi)
    assert L.g2 == pytest.approx(2j * np.pi * (0.3 + 0.9j))
    assert L.q == pytest.approx(np.exp(2j * np.pi * (0.3 + 0.9j)))
    O = Lattice(0.3 + 0.9j, "ochanine")
    assert O.g2 == pytest.approx(4j * np.pi * (0.3 + 0.9j))
    assert O.q == pytest.approx(L.q)


def test_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        Lattice(0.1 - 1j, "witten")


@given(taus, coords, coords)
def test_coords_roundtrip(tau, s, t):
    L = Lattice(tau, "witten")
    s2, t2 = L.coords(L.from_coords(s, t))
    assert s2 == pytest.approx(s, abs=1e-9) and t2 == pytest.approx(t, abs=1e-9)


@given(taus, coords, coords, st.integers(-4, 4), st.integers(-4, 4))
def test_reduction_is_translation_invariant(tau, s, t, j, k):
    L = Lattice(tau, "witten")
    z = L.from_coords(s, t)
    assert reduce(z, L) == reduce(z + L.vector(j, k), L)
    s0, t0 = reduce(z, L).coords
    assert 0 <= s0 < 1 and 0 <= t0 < 1


@given(taus)
def test_reduced_basis_spans_lattice(tau):
    L = Lattice(tau, "witten")
    a, b = L.reduced_basis()
    assert L.is_lattice_vector(a) and L.is_lattice_vector(b)
    assert abs(a) <= abs(b) + 1e-12
    assert abs(a) == pytest.approx(L.min_length())
    # unimodular: the basis covers the same area as (g1, g2)
    area = abs((a.conjugate() * b).imag)
    assert area == pytest.approx(abs((L.g1.conjugate() * L.g2).imag), rel=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_torsion_points_count_and_orders(n):
    L = Lattice(0.3 + 0.9j, "witten")
    pts = torsion_points(L, n)
    assert len(set(pts)) == n * n
    assert all(p.scale(n).is_zero() for p in pts)
    assert sum(1 for p in pts if p.is_zero()) == 1


def test_torsion_points_rejects_nonpositive():
    with pytest.raises(ValueError):
        torsion_points(Lattice(1j, "witten"), 0)


def test_divisor_canonicalizes_and_cancels():
    L = Lattice(1j, "witten")
    p = reduce(0.5 * L.g1, L)
    D = Divisor({p: 2}) + Divisor({CurvePoint(p.lift + L.g2, L): -2})
    assert len(D) == 0


def test_divisor_json_roundtrip():
    L = Lattice(0.3 + 0.9j, "witten")
    D = Divisor.from_points(torsion_points(L, 3), -1) + Divisor({reduce(0, L): 9})
    assert Divisor.from_json(D.to_json(), L) == D


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_torsion_divisor_invariants(n):
    L = Lattice(0.3 + 0.9j, "witten")
    deg, s = divisor_invariants(Divisor.from_points(torsion_points(L, n)))
    assert deg == n * n and s.is_zero()


def test_line_bundle_trivial_abel_jacobi():
    L = Lattice(1j, "witten")
    p = reduce(L.from_coords(0.2, 0.1), L)
    q = reduce(L.from_coords(0.4, 0.2), L)
    o = reduce(0, L)
    assert line_bundle_trivial(Divisor({q: 1, p: -2, o: 1}))
    assert not line_bundle_trivial(Divisor({q: 1, p: -1}))
    assert not line_bundle_trivial(Divisor({p: 1}))
    assert line_bundle_trivial(Divisor({}))


def test_special_points_from_rotation_numbers():
    L = Lattice(1j, "witten")
    f = VirtualRep.parse("z^3 - 9z")
    assert special_points(f, 1, L) == set(torsion_points(L, 3)) | set(torsion_points(L, 1))
    assert len(special_points(f, 2, L)) == 36


def test_open_disc_smallness():
    L = Lattice(1j, "witten")
    o = reduce(0, L)
    assert OpenDisc(o, 0.4 * L.min_length()).is_small()
    assert not OpenDisc(o, 0.6 * L.min_length()).is_small()
    with pytest.raises(ValueError):
        OpenDisc(o, 0.0)


@settings(max_examples=15, deadline=None)
@given(taus, st.integers(1, 6))
def test_adapted_cover_property(tau, n):
    L = Lattice(tau, "witten")
    special = torsion_points(L, n)
    cover = build_adapted_cover(special, L)
    assert all(verify_adapted(cover, special).values())


def test_adapted_cover_empty_special_set():
    L = Lattice(1j, "witten")
    cover = build_adapted_cover([], L)
    assert cover.ordinary_radius == pytest.approx(L.min_length() / 4)
    assert all(verify_adapted(cover, []).values())


def test_adapted_cover_rejects_coincident_points():
    L = Lattice(1j, "witten")
    p = reduce(L.from_coords(0.5, 0), L)
    with pytest.raises(ValueError):
        build_adapted_cover([p, CurvePoint(p.lift + L.g1, L)], L)


def test_bad_cover_is_detected():
    L = Lattice(1j, "witten")
    special = torsion_points(L, 2)
    good = build_adapted_cover(special, L)
    big = {a: OpenDisc(a, 0.9 * L.min_length()) for a in good.special_discs}
    bad = AdaptedCover(L, big, good.ordinary_radius)
    res = verify_adapted(bad, special)
    assert not res[3] and not res[5]


def test_lattice_json_roundtrip():
    L = Lattice(0.3 + 0.9j, "ochanine")
    assert Lattice.from_json(L.to_json()) == L
