import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cell_samples
from oracles import sigma_jacobi
from ellthom.lattice import Lattice
from ellthom.theta import (OCHANINE_P, ThetaFunction, iterated_translation_factor, ochanine_crosscheck,
                           ochanine_eval, odd_residual, parallelogram_zero_count, sigma_character,
                           sigma_eval, sigma_truncation_bound, theta_jet, verify_translation, zero_count)

GENS = [(1, 0), (0, 1), (1, 1)]


def test_sigma_matches_jacobi_theta(lattice, rng):
    for z in cell_samples(lattice, 10, rng):
        assert sigma_eval(z, lattice) == pytest.approx(sigma_jacobi(z, lattice.tau), rel=1e-10)


def test_sigma_normalized_at_zero(sigma):
    c = theta_jet(sigma, 0j, 4).coeffs
    assert abs(c[0]) < 1e-15 and c[1] == pytest.approx(1)


def test_sigma_is_odd(sigma, rng):
    assert odd_residual(sigma, cell_samples(sigma.lattice, 50, rng)) < 1e-10


@pytest.mark.parametrize("jk", GENS)
def test_sigma_translation_law(sigma, rng, jk):
    r = verify_translation(sigma, sigma.lattice.vector(*jk), cell_samples(sigma.lattice, 50, rng))
    assert r["max_residual"] < 1e-8 and r["used"] > 40


def test_sigma_character_values():
    ch = sigma_character(Lattice(1j, "witten"))
    assert ch.gamma(1, 0) == 0 and ch.gamma(0, 1) == -1
    assert [ch.c(j, k) for j, k in [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 2)]] == [-1, -1, -1, 1, 1, 1]


@given(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_period_relation_and_quotient_identity(a, b):
    ch = sigma_character(Lattice(0.3 + 0.9j, "witten"))
    assert ch.period_relation_integer(a, b) is not None
    assert ch.quotient_identity_residual(a, b) < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.integers(-3, 3), st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_iterated_translation(ell, s, t):
    L = Lattice(0.3 + 0.9j, "witten")
    th = ThetaFunction.sigma(L)
    z = L.from_coords(s, t) * 0.3
    lam = L.g2
    lhs = th(z + ell * lam)
    rhs = iterated_translation_factor(th, lam, ell, z) * th(z)
    assert abs(lhs - rhs) <= 1e-8 * (abs(lhs) + abs(rhs))


def test_single_zero_in_cell(sigma):
    assert parallelogram_zero_count(sigma) == pytest.approx(1, abs=1e-6)
    assert zero_count(sigma, 0j, 0.5) == pytest.approx(1, abs=1e-6)


def test_truncation_bound_covers_error():
    L = Lattice(0.3 + 0.9j, "witten")
    z = 0.4 + 0.3j
    err = abs(sigma_eval(z, L, 5) - sigma_eval(z, L, 80))
    assert err <= abs(sigma_eval(z, L, 80)) * sigma_truncation_bound(z, L, 5) * 1.01


def test_rejects_real_tau():
    with pytest.raises(ValueError):
        Lattice(0.5, "witten")


@pytest.mark.parametrize("tau", [1j, 0.3 + 0.9j])
def test_ochanine_half_period_sign_and_forms(tau, rng):
    L = Lattice(tau, "ochanine")
    zs = cell_samples(L, 30, rng)
    P = OCHANINE_P(L)
    res = max(abs(ochanine_eval(z + P, L) + ochanine_eval(z, L)) / (1 + abs(ochanine_eval(z, L))) for z in zs)
    assert res < 1e-8
    assert ochanine_crosscheck(zs, L)["max_residual"] < 1e-7


def test_ochanine_q_zero_limit():
    L = Lattice(1j, "ochanine")
    zs = np.linspace(-1.5, 1.5, 11) + 0.2j
    assert np.allclose(ochanine_eval(zs, L, 0), 2 * np.tanh(zs / 2), atol=1e-12)


def test_ochanine_character_is_level_two():
    th = ThetaFunction.ochanine(Lattice(1j, "ochanine"))
    assert th.character.level == 2
    assert th.character.c(0, 1) == -1 and th.character.c(1, 0) == 1
    zs = cell_samples(th.lattice, 20, np.random.default_rng(3))
    for jk in GENS:
        assert verify_translation(th, th.lattice.vector(*jk), zs)["max_residual"] < 1e-8


def test_theta_jet_matches_finite_difference(sigma):
    w = 0.3 + 0.2j
    c = theta_jet(sigma, w, 3).coeffs
    h = 1e-4
    d1 = (sigma(w + h) - sigma(w - h)) / (2 * h)
    assert c[1] == pytest.approx(d1, rel=1e-6)
