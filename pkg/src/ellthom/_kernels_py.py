"""Numpy implementations of the hot loops.

These are the reference versions of the routines in ``_ckernels.pyx`` and are
used whenever the compiled module is unavailable.
"""

import math

import numpy as np


def _exp_coeffs(order, scale=1.0):
    """Taylor coefficients of exp(scale * t) at t = 0."""
    k = np.arange(order + 1)
    return np.array([scale**int(j) / math.factorial(int(j)) for j in k], dtype=complex)


def jet_mul(a, b):
    """Truncated Cauchy product; the result has the length of the shorter input."""
    n = min(len(a), len(b))
    return np.convolve(np.asarray(a[:n], dtype=complex), np.asarray(b[:n], dtype=complex))[:n]


def jet_div(a, b):
    """Truncated quotient a/b; ``b[0]`` must be nonzero."""
    n = min(len(a), len(b))
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    c = np.zeros(n, dtype=complex)
    for k in range(n):
        c[k] = (a[k] - np.dot(c[:k], b[k:0:-1])) / b[0]
    return c


def sigma_values(z, q, nterms):
    z = np.asarray(z, dtype=complex)
    u = np.exp(z)
    ui = np.exp(-z)
    out = np.exp(z / 2) - np.exp(-z / 2)
    qn = 1.0 + 0j
    for _ in range(nterms):
        qn = qn * q
        out = out * ((1 - qn * u) * (1 - qn * ui) / (1 - qn) ** 2)
    return out


def ochanine_values(z, q, nterms):
    z = np.asarray(z, dtype=complex)
    u = np.exp(z)
    ui = np.exp(-z)
    num = -2 * (1 - u)
    den = 1 + u
    qn = 1.0 + 0j
    for _ in range(nterms):
        qn = qn * q
        num = num * ((1 - qn * u) * (1 - qn * ui) * (1 + qn) ** 2)
        den = den * ((1 + qn * u) * (1 + qn * ui) * (1 - qn) ** 2)
    return num / den


def sigma_taylor(w, q, nterms, order):
    w = complex(w)
    eplus = _exp_coeffs(order, 1.0)
    eminus = _exp_coeffs(order, -1.0)
    u = np.exp(w)
    ui = np.exp(-w)
    out = np.exp(w / 2) * _exp_coeffs(order, 0.5) - np.exp(-w / 2) * _exp_coeffs(order, -0.5)
    qn = 1.0 + 0j
    for _ in range(nterms):
        qn = qn * q
        f1 = -qn * u * eplus
        f1[0] += 1
        f2 = -qn * ui * eminus
        f2[0] += 1
        out = jet_mul(jet_mul(out, f1), f2) / (1 - qn) ** 2
    return out


def ochanine_taylor(w, q, nterms, order):
    w = complex(w)
    eplus = _exp_coeffs(order, 1.0)
    eminus = _exp_coeffs(order, -1.0)
    u = np.exp(w)
    ui = np.exp(-w)
    num = 2 * u * eplus
    num[0] -= 2
    den = u * eplus
    den[0] += 1
    qn = 1.0 + 0j
    for _ in range(nterms):
        qn = qn * q
        n1 = -qn * u * eplus
        n1[0] += 1
        n2 = -qn * ui * eminus
        n2[0] += 1
        d1 = qn * u * eplus
        d1[0] += 1
        d2 = qn * ui * eminus
        d2[0] += 1
        num = jet_mul(jet_mul(num, n1), n2) * (1 + qn) ** 2
        den = jet_mul(jet_mul(den, d1), d2) * (1 - qn) ** 2
    return jet_div(num, den)


def sparse_mul(a, b, ii, jj, kk, size):
    """Product in a truncated monomial algebra given its multiplication table."""
    out = np.zeros(size, dtype=complex)
    np.add.at(out, kk, a[ii] * b[jj])
    return out
