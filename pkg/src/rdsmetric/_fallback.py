"""Pure numpy implementations of the hot kernels.

Mirrors the compiled ``_core`` module function for function.  Every
determinant is still evaluated individually (Leibniz expansion broadcast over
all index tuples); nothing here exploits the factorisation of the sums.
"""

import itertools
import math

import numpy as np

_CHUNK = 1 << 22


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _signed_perms(m):
    return [(perm, _perm_sign(perm)) for perm in itertools.permutations(range(m))]


def gaussian_gram(x, y, gamma):
    n, d = x.shape
    out = np.empty((n, y.shape[0]), dtype=np.float64)
    step = max(1, _CHUNK // max(1, y.shape[0] * d))
    for lo in range(0, n, step):
        diff = x[lo:lo + step, None, :] - y[None, :, :]
        sq = np.sum(diff.real ** 2 + diff.imag ** 2, axis=-1)
        out[lo:lo + step] = np.exp(-gamma * sq)
    return out


def l1_mean(x1, x2, gamma):
    """Mean of k(x1[w, t], x2[e, t]) over t, w, e for (N, T, d) inputs."""
    n1, t_len, _ = x1.shape
    n2 = x2.shape[0]
    partial = [float(np.sum(gaussian_gram(x1[:, t, :], x2[:, t, :], gamma))) for t in range(t_len)]
    return math.fsum(partial) / (t_len * n1 * n2)


def enum_l(g, m):
    """Average of det(g[w_p, t_p, e_q, t_q]) over all time, row-path and column-path m-tuples."""
    n1, t_len, n2, _ = g.shape
    perms = _signed_perms(m)
    partial = []
    for ts in itertools.product(range(t_len), repeat=m):
        dets = np.zeros((n1,) * m + (n2,) * m)
        for perm, sign in perms:
            term = np.ones((1,) * (2 * m))
            for p in range(m):
                q = perm[p]
                shape = [1] * (2 * m)
                shape[p] = n1
                shape[m + q] = n2
                term = term * g[:, ts[p], :, ts[q]].reshape(shape)
            dets += sign * term
        partial.append(float(np.sum(dets)))
    return math.fsum(partial) / float((t_len * n1 * n2) ** m)


def enum_l_tilde(g, m):
    """Average of det(g[a_p, a_q]) over all m-tuples of slots a."""
    s = g.shape[0]
    diag = np.diagonal(g)
    perms = _signed_perms(m)
    # leading slot split off so the partial sums stay bounded in memory
    partial = []
    for a0 in range(s):
        dets = np.zeros((s,) * (m - 1)) if m > 1 else np.zeros(())
        for perm, sign in perms:
            term = np.ones((1,) * (m - 1)) if m > 1 else np.ones(())
            for p in range(m):
                q = perm[p]
                if p == q:
                    if p == 0:
                        term = term * diag[a0]
                    else:
                        shape = [1] * (m - 1)
                        shape[p - 1] = s
                        term = term * diag.reshape(shape)
                elif p == 0 or q == 0:
                    other = q if p == 0 else p
                    vec = g[a0, :] if p == 0 else g[:, a0]
                    shape = [1] * (m - 1)
                    shape[other - 1] = s
                    term = term * vec.reshape(shape)
                else:
                    shape = [1] * (m - 1)
                    shape[p - 1] = s
                    shape[q - 1] = s
                    mat = g if p < q else g.T
                    term = term * mat.reshape(shape)
            dets = dets + sign * term
        partial.append(float(np.sum(dets)))
    return math.fsum(partial) / float(s ** m)
