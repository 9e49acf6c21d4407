"""Slow, independently written reference implementations used as test oracles.

Nothing here calls into the package's numerical code; kernel values come
from a scalar loop and determinants from the Leibniz formula.
"""

import cmath
import itertools
import math

import numpy as np


def k_gauss(z, w, gamma=0.5):
    s = 0.0
    for a, b in zip(np.atleast_1d(z), np.atleast_1d(w)):
        s += abs(complex(a) - complex(b)) ** 2
    return math.exp(-gamma * s)


def perm_sign(p):
    sign = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def leibniz_det(a):
    n = len(a)
    total = 0j
    for p in itertools.permutations(range(n)):
        term = complex(perm_sign(p))
        for i in range(n):
            term *= a[i][p[i]]
        total += term
    return total


def brute_l(X, Y, m, times, gamma=0.5, with_scale=False):
    """Independent path tuples for rows and columns.

    ``with_scale`` also returns the mean absolute determinant, the size of
    the terms that cancel in the sum.
    """
    n1, n2 = X.shape[0], Y.shape[0]
    total, scale, count = 0j, 0.0, 0
    for ts in itertools.product(times, repeat=m):
        for om in itertools.product(range(n1), repeat=m):
            for et in itertools.product(range(n2), repeat=m):
                block = [[k_gauss(X[om[p], ts[p]], Y[et[q], ts[q]], gamma) for q in range(m)] for p in range(m)]
                d = leibniz_det(block)
                total += d
                scale += abs(d)
                count += 1
    return (total / count, scale / count) if with_scale else total / count


def brute_l_tilde(X, Y, m, times, gamma=0.5, with_scale=False):
    """One path tuple shared by rows and columns."""
    n = X.shape[0]
    total, scale, count = 0j, 0.0, 0
    for ts in itertools.product(times, repeat=m):
        for om in itertools.product(range(n), repeat=m):
            block = [[k_gauss(X[om[p], ts[p]], Y[om[q], ts[q]], gamma) for q in range(m)] for p in range(m)]
            d = leibniz_det(block)
            total += d
            scale += abs(d)
            count += 1
    return (total / count, scale / count) if with_scale else total / count


def brute_L(X, Y, m, times, gamma=0.5, tilde=False):
    f = brute_l_tilde if tilde else brute_l
    l12 = f(X, Y, m, times, gamma)
    l11 = f(X, X, m, times, gamma).real
    l22 = f(Y, Y, m, times, gamma).real
    return abs(l12) ** 2 / (l11 * l22)


def hsic_matrix_product(x, y, gamma=0.5):
    """tr(H K H H L H) / (n-1)^2 with explicit H and matrix products."""
    n = len(x)
    K = np.array([[k_gauss(a, b, gamma) for b in x] for a in x])
    L = np.array([[k_gauss(a, b, gamma) for b in y] for a in y])
    H = np.eye(n) - np.ones((n, n)) / n
    return float(np.trace(H @ K @ H @ H @ L @ H)) / (n - 1) ** 2


def rotation_path(alpha_mod, theta, z0, T):
    a = alpha_mod * cmath.exp(2j * math.pi * theta)
    z = [complex(z0)]
    for _ in range(T):
        z.append(a * z[-1])
    return np.array(z)
