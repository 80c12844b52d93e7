import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellthom.equivrep import (VirtualRep, check_double_periodicity, check_parity, degree, divisor_of,
                              is_trivial, parse_laurent, translation_factor, trivialization_eval,
                              trivialization_jet, trivialization_leading, w2_equivariant, zero_pole_ledger)
from ellthom.lattice import Lattice, divisor_invariants

L = Lattice(0.3 + 0.9j, "witten")

reps = st.dictionaries(st.integers(-4, 4).filter(bool), st.integers(-3, 3), max_size=3).map(VirtualRep)


def degree_zero_reps():
    """Sums of z^{km} − k²·z^m, each of degree zero."""
    term = st.tuples(st.integers(2, 3), st.integers(1, 2), st.sampled_from([1, -1]))
    return st.lists(term, min_size=1, max_size=2).map(
        lambda ts: sum((VirtualRep({k * m: s, m: -s * k * k}) for k, m, s in ts), VirtualRep()))


@pytest.mark.parametrize("text,coeffs", [
    ("z^3 - 9z", {3: 1, 1: -9}),
    ("3z^2 - 9z + 2 + z^-1", {2: 3, 1: -9, 0: 2, -1: 1}),
    ("-z^(-2)+4", {-2: -1, 0: 4}),
    ("2*z^2", {2: 2}),
    ("z - z", {}),
])
def test_parse(text, coeffs):
    assert parse_laurent(text) == coeffs


@pytest.mark.parametrize("bad", ["z^", "3x", "++z", "z^3 -", "1.5z"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_laurent(bad)


@given(reps)
def test_str_roundtrip(f):
    assert VirtualRep.parse(str(f)) == f


@given(reps)
def test_degree_criterion_matches_abel_jacobi(f):
    assert is_trivial(f, L, crosscheck=True) == (degree(f) == 0)
    deg, _ = divisor_invariants(divisor_of(f, L), L)
    assert deg == degree(f)


@given(reps, reps)
def test_degree_additive(f, g):
    assert degree(f + g) == degree(f) + degree(g)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_powers_are_not_trivial(n):
    f = VirtualRep({n: 1})
    assert degree(f) == -n * n
    assert check_double_periodicity(f, L)["max_residual"] > 1e-2


def test_z3_minus_9z():
    f = VirtualRep.parse("z^3 - 9z")
    assert degree(f) == 0 and is_trivial(f, L)
    assert check_double_periodicity(f, L)["max_residual"] < 1e-8
    par = check_parity(f, L)
    assert par["parity"] == "even" and par["sign"] == par["expected"]
    assert w2_equivariant(f) == 0


@settings(max_examples=8, deadline=None)
@given(degree_zero_reps())
def test_degree_zero_reps_are_elliptic(f):
    if not f.nonzero():
        return
    assert check_double_periodicity(f, L)["max_residual"] < 1e-8
    par = check_parity(f, L)
    assert par["sign"] == par["expected"]


@settings(max_examples=10, deadline=None)
@given(reps, st.integers(-2, 2), st.integers(-2, 2))
def test_symbolic_translation_factor(f, j, k):
    z = 0.21 + 0.37j
    if not f.nonzero():
        return
    lam = L.vector(j, k)
    g0 = trivialization_eval(f, z, L)
    g1 = trivialization_eval(f, z + lam, L)
    fac = translation_factor(f, L, j, k, z)
    assert abs(g1 - fac * g0) <= 1e-8 * (abs(g1) + abs(fac * g0))


def test_leading_behaviour_at_zero():
    f = VirtualRep.parse("z^3 - 9z")
    order, lead = trivialization_leading(f)
    assert order == -8 and lead == pytest.approx(3.0)
    o2, unit = trivialization_jet(f, L, 4)
    assert o2 == order and unit.coeffs[0] == pytest.approx(lead)
    z = 1e-3
    assert trivialization_eval(f, z, L) * z**8 == pytest.approx(3.0, rel=1e-4)


@pytest.mark.parametrize("text", ["z", "z^2", "z^3 - 9z", "z^4"])
def test_argument_principle_ledger(text):
    for p, winding, expected in zero_pole_ledger(VirtualRep.parse(text), L):
        assert winding == expected, p
