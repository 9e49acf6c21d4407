# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: Gaussian Gram blocks and exact tuple enumeration.

Function for function twin of ``rdsmetric._fallback``.  Loops run without the
GIL; each outer index accumulates its own compensated partial sum and the
partials are combined with ``math.fsum`` so results do not depend on thread
scheduling.
"""

import math

import numpy as np

from libc.math cimport exp, fabs


cdef inline void _acc(double *s, double *c, double v) noexcept nogil:
    # Neumaier compensated add
    cdef double t = s[0] + v
    if fabs(s[0]) >= fabs(v):
        c[0] += (s[0] - t) + v
    else:
        c[0] += (v - t) + s[0]
    s[0] = t


cdef inline double _sqdist(const double complex *a, const double complex *b, Py_ssize_t d) noexcept nogil:
    cdef Py_ssize_t i
    cdef double dr, di, acc = 0.0
    for i in range(d):
        dr = a[i].real - b[i].real
        di = a[i].imag - b[i].imag
        acc += dr * dr + di * di
    return acc


def gaussian_gram(const double complex[:, ::1] x, const double complex[:, ::1] y, double gamma):
    cdef Py_ssize_t n = x.shape[0], k = y.shape[0], d = x.shape[1], i, j
    out = np.empty((n, k), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(n):
            for j in range(k):
                o[i, j] = exp(-gamma * _sqdist(&x[i, 0], &y[j, 0], d))
    return out


def l1_mean(const double complex[:, :, ::1] x1, const double complex[:, :, ::1] x2, double gamma):
    cdef Py_ssize_t n1 = x1.shape[0], t_len = x1.shape[1], n2 = x2.shape[0], d = x1.shape[2]
    cdef Py_ssize_t t, a, b
    cdef double s, c
    partial = np.empty(t_len, dtype=np.float64)
    cdef double[::1] part = partial
    with nogil:
        for t in range(t_len):
            s = 0.0
            c = 0.0
            for a in range(n1):
                for b in range(n2):
                    _acc(&s, &c, exp(-gamma * _sqdist(&x1[a, t, 0], &x2[b, t, 0], d)))
            part[t] = s + c
    return math.fsum(partial) / (t_len * n1 * n2)


cdef double _enum_l2(const double[:, :, :, ::1] g, Py_ssize_t t1) noexcept nogil:
    cdef Py_ssize_t n1 = g.shape[0], t_len = g.shape[1], n2 = g.shape[2]
    cdef Py_ssize_t t2, w1, w2, e1, e2
    cdef double s = 0.0, c = 0.0, g11, g12
    for t2 in range(t_len):
        for w1 in range(n1):
            for w2 in range(n1):
                for e1 in range(n2):
                    g11 = g[w1, t1, e1, t1]
                    g12 = g[w2, t2, e1, t1]
                    for e2 in range(n2):
                        _acc(&s, &c, g11 * g[w2, t2, e2, t2] - g[w1, t1, e2, t2] * g12)
    return s + c


cdef double _enum_l3(const double[:, :, :, ::1] g, Py_ssize_t t1) noexcept nogil:
    cdef Py_ssize_t n1 = g.shape[0], t_len = g.shape[1], n2 = g.shape[2]
    cdef Py_ssize_t t2, t3, w1, w2, w3, e1, e2, e3
    cdef double s = 0.0, c = 0.0
    cdef double a00, a01, a02, a10, a11, a12, a20, a21, a22
    for t2 in range(t_len):
        for t3 in range(t_len):
            for w1 in range(n1):
                for w2 in range(n1):
                    for w3 in range(n1):
                        for e1 in range(n2):
                            a00 = g[w1, t1, e1, t1]
                            a10 = g[w2, t2, e1, t1]
                            a20 = g[w3, t3, e1, t1]
                            for e2 in range(n2):
                                a01 = g[w1, t1, e2, t2]
                                a11 = g[w2, t2, e2, t2]
                                a21 = g[w3, t3, e2, t2]
                                for e3 in range(n2):
                                    a02 = g[w1, t1, e3, t3]
                                    a12 = g[w2, t2, e3, t3]
                                    a22 = g[w3, t3, e3, t3]
                                    _acc(&s, &c,
                                         a00 * (a11 * a22 - a12 * a21)
                                         - a01 * (a10 * a22 - a12 * a20)
                                         + a02 * (a10 * a21 - a11 * a20))
    return s + c


def enum_l(const double[:, :, :, ::1] g, int m):
    cdef Py_ssize_t n1 = g.shape[0], t_len = g.shape[1], n2 = g.shape[2]
    cdef Py_ssize_t t1, a, b
    cdef double s, c
    if m < 1 or m > 3:
        raise ValueError("compiled enumeration supports m in 1..3")
    partial = np.empty(t_len, dtype=np.float64)
    cdef double[::1] part = partial
    with nogil:
        for t1 in range(t_len):
            if m == 1:
                s = 0.0
                c = 0.0
                for a in range(n1):
                    for b in range(n2):
                        _acc(&s, &c, g[a, t1, b, t1])
                part[t1] = s + c
            elif m == 2:
                part[t1] = _enum_l2(g, t1)
            else:
                part[t1] = _enum_l3(g, t1)
    return math.fsum(partial) / float((t_len * n1 * n2) ** m)


cdef double _enum_lt2(const double[:, ::1] g, Py_ssize_t a) noexcept nogil:
    cdef Py_ssize_t b
    cdef double s = 0.0, c = 0.0, gaa = g[a, a]
    for b in range(g.shape[0]):
        _acc(&s, &c, gaa * g[b, b] - g[a, b] * g[b, a])
    return s + c


cdef double _enum_lt3(const double[:, ::1] g, Py_ssize_t a) noexcept nogil:
    cdef Py_ssize_t n = g.shape[0], b, d
    cdef double s = 0.0, c = 0.0
    cdef double a00 = g[a, a], a01, a02, a10, a11, a12, a20, a21, a22
    for b in range(n):
        a01 = g[a, b]
        a10 = g[b, a]
        a11 = g[b, b]
        for d in range(n):
            a02 = g[a, d]
            a12 = g[b, d]
            a20 = g[d, a]
            a21 = g[d, b]
            a22 = g[d, d]
            _acc(&s, &c,
                 a00 * (a11 * a22 - a12 * a21)
                 - a01 * (a10 * a22 - a12 * a20)
                 + a02 * (a10 * a21 - a11 * a20))
    return s + c


def enum_l_tilde(const double[:, ::1] g, int m):
    cdef Py_ssize_t n = g.shape[0], a
    if m < 1 or m > 3:
        raise ValueError("compiled enumeration supports m in 1..3")
    partial = np.empty(n, dtype=np.float64)
    cdef double[::1] part = partial
    with nogil:
        for a in range(n):
            if m == 1:
                part[a] = g[a, a]
            elif m == 2:
                part[a] = _enum_lt2(g, a)
            else:
                part[a] = _enum_lt3(g, a)
    return math.fsum(partial) / float(n ** m)
