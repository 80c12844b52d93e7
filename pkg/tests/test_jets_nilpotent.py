import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellthom.jets import Jet
from ellthom.nilpotent import LinearForm, NilpotentRing

cplx = st.builds(complex, st.floats(-2, 2), st.floats(-2, 2))


def test_exp_log_roundtrip():
    x = Jet.variable(8, 0.3)
    e = x.exp()
    assert np.allclose(e.coeffs, [np.exp(0.3) / math.factorial(k) for k in range(9)])
    assert np.allclose(e.log().coeffs, x.coeffs)


@given(st.lists(cplx, min_size=6, max_size=6), st.lists(cplx, min_size=6, max_size=6))
def test_jet_division_inverts_multiplication(a, b):
    b[0] = b[0] + 3
    A, B = Jet(a), Jet(b)
    assert np.allclose(((A * B) / B).coeffs, A.coeffs, atol=1e-9)


def test_compose_matches_direct_taylor():
    inner = Jet([0, 2, 0, 0, 0, 0])
    outer = Jet.variable(5).exp()
    assert np.allclose(outer.compose(inner).coeffs, [2**k / math.factorial(k) for k in range(6)])


def test_ring_truncation_and_integral():
    R = NilpotentRing(("y1", "y2"), 4, {"y1": 1, "y2": 1})
    y1, y2 = R.gen("y1"), R.gen("y2")
    assert (y1 * y1 * y2).max_abs() == 0
    assert (y1 * y2).integrate() == 1
    assert (y1 * y1).integrate() == 0
    assert y1.integrate() == 0


def test_integral_monomial_must_be_top():
    with pytest.raises(ValueError):
        NilpotentRing(("y1",), 4, {"y1": 1})


@given(cplx.filter(lambda c: abs(c) > 0.1), cplx, cplx)
def test_inverse_and_exp(c, a, b):
    R = NilpotentRing(("y1", "y2"), 4, {"y1": 1, "y2": 1})
    x = R.const(c) + R.gen("y1") * a + R.gen("y2") * b
    assert np.allclose((x * x.inverse()).coeffs, R.one().coeffs, atol=1e-9)
    n = x.nilpotent_part()
    assert np.allclose((n.exp() * (-n).exp()).coeffs, R.one().coeffs, atol=1e-9)


def test_apply_series_matches_exp():
    R = NilpotentRing(("y",), 6, {"y": 3})
    y = R.gen("y") * 0.7
    ser = [1 / math.factorial(k) for k in range(5)]
    assert np.allclose(y.apply_series(ser).coeffs, y.exp().coeffs)


def test_linear_form_exact():
    a = LinearForm({"y1": 3, "y2": -6})
    assert a.divisible_by(3) and not a.divisible_by(2)
    assert a - a == LinearForm()
    assert (a * 2).coeffs["y2"] == -12
