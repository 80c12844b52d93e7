"""Independent reference implementations used only by the tests."""

from fractions import Fraction

import mpmath
import sympy as sp


def sigma_jacobi(z: complex, tau: complex) -> complex:
    """σ through the Jacobi θ₁: σ(z) = 2i·θ₁(z/2i)/θ₁'(0), nome e^{πiτ}."""
    with mpmath.workdps(30):
        p = mpmath.exp(mpmath.pi * 1j * mpmath.mpc(tau))
        v = mpmath.mpc(z) / 2j
        val = 2j * mpmath.jtheta(1, v, p) / mpmath.jtheta(1, 0, p, 1)
        return complex(val)


def genus_sympy(series_expr, x, dim: int, pontryagin: dict) -> Fraction:
    """∫∏Q(x_i) over formal roots, Q = x/θ̂(x), expanded symbolically.

    Each Q(x) is even, so Q = F(x²); the product over k = dim/4 roots is
    rewritten in the elementary symmetric functions p_i of the x_i².
    """
    k = dim // 4
    ts = sp.symbols(f"t1:{k + 1}")
    Q = sp.series(x / series_expr, x, 0, 2 * k + 2).removeO()
    prod = sp.Integer(1)
    for t in ts:
        prod = sp.expand(prod * Q.subs(x, sp.sqrt(t)))
    poly = sp.Poly(prod, *ts)
    top = sum(c * sp.prod([t**e for t, e in zip(ts, m)]) for m, c in poly.terms() if sum(m) == k)
    ps = sp.symbols(f"p1:{k + 1}")
    sym, rem, _ = sp.polys.polyfuncs.symmetrize(sp.expand(top), *ts, formal=True, symbols=ps)
    assert rem == 0
    total = Fraction(0)
    for term in sp.Add.make_args(sp.expand(sym)):
        coeff, mon = term.as_coeff_Mul()
        key = []
        for pw in sp.Mul.make_args(mon):
            base, e = pw.as_base_exp()
            idx = ps.index(base) + 1
            key += [idx] * int(e)
        part = tuple(sorted(key, reverse=True))
        total += Fraction(int(coeff.p), int(coeff.q)) * pontryagin.get(part, 0)
    return total
