# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the q-product and truncated-series kernels.

Signatures and results match ``_kernels_py``; see that module for semantics.
"""

import numpy as np
cimport numpy as cnp

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)

cnp.import_array()


cdef void _mul_inplace(double complex[::1] a, double complex[::1] b,
                       double complex[::1] tmp, int n) noexcept nogil:
    cdef int i, k
    cdef double complex s
    for k in range(n):
        s = 0
        for i in range(k + 1):
            s = s + a[i] * b[k - i]
        tmp[k] = s
    for k in range(n):
        a[k] = tmp[k]


cdef void _fill_exp(double complex[::1] out, double complex coef, double scale,
                    double complex shift, int n) noexcept nogil:
    # out[k] = shift*[k == 0] + coef * scale**k / k!
    cdef int k
    cdef double p = 1.0
    cdef double fact = 1.0
    for k in range(n):
        if k > 0:
            p = p * scale
            fact = fact * k
        out[k] = coef * (p / fact)
    out[0] = out[0] + shift


def jet_mul(a, b):
    cdef int n = min(len(a), len(b))
    cdef double complex[::1] av = np.ascontiguousarray(a[:n], dtype=complex)
    cdef double complex[::1] bv = np.ascontiguousarray(b[:n], dtype=complex)
    out = np.zeros(n, dtype=complex)
    cdef double complex[::1] ov = out
    cdef int i, k
    cdef double complex s
    with nogil:
        for k in range(n):
            s = 0
            for i in range(k + 1):
                s = s + av[i] * bv[k - i]
            ov[k] = s
    return out


def jet_div(a, b):
    cdef int n = min(len(a), len(b))
    cdef double complex[::1] av = np.ascontiguousarray(a[:n], dtype=complex)
    cdef double complex[::1] bv = np.ascontiguousarray(b[:n], dtype=complex)
    out = np.zeros(n, dtype=complex)
    cdef double complex[::1] cv = out
    cdef int i, k
    cdef double complex s
    with nogil:
        for k in range(n):
            s = av[k]
            for i in range(k):
                s = s - cv[i] * bv[k - i]
            cv[k] = s / bv[0]
    return out


def sigma_values(z, double complex q, int nterms):
    zarr = np.ascontiguousarray(z, dtype=complex)
    flat = zarr.reshape(-1)
    out = np.empty_like(flat)
    cdef double complex[::1] zv = flat
    cdef double complex[::1] ov = out
    cdef Py_ssize_t i, m = flat.shape[0]
    cdef int n
    cdef double complex u, ui, qn, r
    with nogil:
        for i in range(m):
            u = cexp(zv[i])
            ui = 1.0 / u
            r = cexp(zv[i] / 2) - cexp(-zv[i] / 2)
            qn = 1
            for n in range(nterms):
                qn = qn * q
                r = r * ((1 - qn * u) * (1 - qn * ui) / ((1 - qn) * (1 - qn)))
            ov[i] = r
    return out.reshape(zarr.shape)


def ochanine_values(z, double complex q, int nterms):
    zarr = np.ascontiguousarray(z, dtype=complex)
    flat = zarr.reshape(-1)
    out = np.empty_like(flat)
    cdef double complex[::1] zv = flat
    cdef double complex[::1] ov = out
    cdef Py_ssize_t i, m = flat.shape[0]
    cdef int n
    cdef double complex u, ui, qn, num, den
    with nogil:
        for i in range(m):
            u = cexp(zv[i])
            ui = cexp(-zv[i])
            num = -2 * (1 - u)
            den = 1 + u
            qn = 1
            for n in range(nterms):
                qn = qn * q
                num = num * ((1 - qn * u) * (1 - qn * ui) * (1 + qn) * (1 + qn))
                den = den * ((1 + qn * u) * (1 + qn * ui) * (1 - qn) * (1 - qn))
            ov[i] = num / den
    return out.reshape(zarr.shape)


def sigma_taylor(double complex w, double complex q, int nterms, int order):
    cdef int n = order + 1
    out = np.zeros(n, dtype=complex)
    f = np.zeros(n, dtype=complex)
    g = np.zeros(n, dtype=complex)
    tmp = np.zeros(n, dtype=complex)
    cdef double complex[::1] ov = out
    cdef double complex[::1] fv = f
    cdef double complex[::1] gv = g
    cdef double complex[::1] tv = tmp
    cdef double complex u = cexp(w)
    cdef double complex ui = cexp(-w)
    cdef double complex qn = 1
    cdef double complex norm
    cdef int j, k
    with nogil:
        _fill_exp(ov, cexp(w / 2), 0.5, 0, n)
        _fill_exp(fv, -cexp(-w / 2), -0.5, 0, n)
        for k in range(n):
            ov[k] = ov[k] + fv[k]
        for j in range(nterms):
            qn = qn * q
            _fill_exp(fv, -qn * u, 1.0, 1, n)
            _fill_exp(gv, -qn * ui, -1.0, 1, n)
            _mul_inplace(ov, fv, tv, n)
            _mul_inplace(ov, gv, tv, n)
            norm = 1.0 / ((1 - qn) * (1 - qn))
            for k in range(n):
                ov[k] = ov[k] * norm
    return out


def ochanine_taylor(double complex w, double complex q, int nterms, int order):
    cdef int n = order + 1
    num = np.zeros(n, dtype=complex)
    den = np.zeros(n, dtype=complex)
    f = np.zeros(n, dtype=complex)
    tmp = np.zeros(n, dtype=complex)
    cdef double complex[::1] nv = num
    cdef double complex[::1] dv = den
    cdef double complex[::1] fv = f
    cdef double complex[::1] tv = tmp
    cdef double complex u = cexp(w)
    cdef double complex ui = cexp(-w)
    cdef double complex qn = 1
    cdef double complex sn, sd
    cdef int j, k
    with nogil:
        _fill_exp(nv, 2 * u, 1.0, -2, n)
        _fill_exp(dv, u, 1.0, 1, n)
        for j in range(nterms):
            qn = qn * q
            _fill_exp(fv, -qn * u, 1.0, 1, n)
            _mul_inplace(nv, fv, tv, n)
            _fill_exp(fv, -qn * ui, -1.0, 1, n)
            _mul_inplace(nv, fv, tv, n)
            _fill_exp(fv, qn * u, 1.0, 1, n)
            _mul_inplace(dv, fv, tv, n)
            _fill_exp(fv, qn * ui, -1.0, 1, n)
            _mul_inplace(dv, fv, tv, n)
            sn = (1 + qn) * (1 + qn)
            sd = (1 - qn) * (1 - qn)
            for k in range(n):
                nv[k] = nv[k] * sn
                dv[k] = dv[k] * sd
    return jet_div(num, den)


def sparse_mul(a, b, ii, jj, kk, Py_ssize_t size):
    cdef double complex[::1] av = np.ascontiguousarray(a, dtype=complex)
    cdef double complex[::1] bv = np.ascontiguousarray(b, dtype=complex)
    cdef cnp.intp_t[::1] iv = np.ascontiguousarray(ii, dtype=np.intp)
    cdef cnp.intp_t[::1] jv = np.ascontiguousarray(jj, dtype=np.intp)
    cdef cnp.intp_t[::1] kv = np.ascontiguousarray(kk, dtype=np.intp)
    out = np.zeros(size, dtype=complex)
    cdef double complex[::1] ov = out
    cdef Py_ssize_t t, m = iv.shape[0]
    with nogil:
        for t in range(m):
            ov[kv[t]] = ov[kv[t]] + av[iv[t]] * bv[jv[t]]
    return out
