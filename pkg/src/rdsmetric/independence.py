"""HSIC-based dependence measures between path ensembles.

``c_k_hat`` averages ``tr(G1(s) G2(t)) / (n - 1)**2`` over time samples ``s``
of the first system and ``t`` of the second, where ``G(t)`` is the doubly
centred Gram matrix of the ``n`` paths at time ``t``.  Paths of the two
ensembles are paired by index.  ``shift_hsic`` is the per-path-pair baseline
that treats time samples as observations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rdsmetric.ensemble import PathEnsemble
from rdsmetric.errors import ConfigError, DataError
from rdsmetric.kernels import Kernel, as_states, gram

__all__ = [
    "HsicConfig",
    "CenteredGram",
    "center",
    "hsic",
    "centered_gram_at_time",
    "c_k_hat",
    "shift_hsic",
    "minmax_normalize",
]


@dataclass(frozen=True)
class HsicConfig:
    """Time samples for ``c_k_hat`` and the shift window for ``shift_hsic``.

    ``S1``/``S2`` default to stored indices ``1..t_len-1``.
    """

    S1: tuple | None = None
    S2: tuple | None = None
    head: int = 10
    tail: int = 15

    def __post_init__(self):
        if not 0 <= self.head <= self.tail:
            raise ConfigError(f"need 0 <= head <= tail, got head={self.head}, tail={self.tail}")
        for name in ("S1", "S2"):
            s = getattr(self, name)
            if s is not None:
                s = tuple(int(t) for t in s)
                if not s:
                    raise ConfigError(f"{name} must be non-empty")
                object.__setattr__(self, name, s)

    @staticmethod
    def _resolve(s, t_len, name):
        if s is None:
            return tuple(range(1, t_len)) if t_len > 1 else (0,)
        if min(s) < 0 or max(s) >= t_len:
            raise ConfigError(f"{name} has time indices outside 0..{t_len - 1}")
        return s

    def samples(self, E1: PathEnsemble, E2: PathEnsemble):
        return self._resolve(self.S1, E1.t_len, "S1"), self._resolve(self.S2, E2.t_len, "S2")


@dataclass(frozen=True)
class CenteredGram:
    t: int
    matrix: np.ndarray


def center(k: np.ndarray) -> np.ndarray:
    """Double centring ``H K H`` written as row/column/grand mean removal."""
    return k - k.mean(axis=0, keepdims=True) - k.mean(axis=1, keepdims=True) + k.mean()


def hsic(xs, ys, kernel: Kernel = Kernel()) -> float:
    """Biased HSIC estimate ``tr(HKH HLH) / (n - 1)**2`` of paired samples."""
    x = as_states(xs)
    y = as_states(ys)
    n = x.shape[0]
    if y.shape[0] != n:
        raise DataError(f"paired samples differ in length: {n} vs {y.shape[0]}")
    if n < 2:
        raise DataError("HSIC needs at least two paired samples")
    kc = center(gram(kernel, x, x))
    lc = center(gram(kernel, y, y))
    # both centred Grams are symmetric, so the trace of the product is the elementwise sum
    return float(np.sum(kc * lc)) / (n - 1) ** 2


def centered_gram_at_time(ensemble: PathEnsemble, t: int, kernel: Kernel = Kernel()) -> CenteredGram:
    if ensemble.n_paths < 2:
        raise DataError("a centred Gram needs at least two paths")
    z = ensemble.at_time(t)
    return CenteredGram(t, center(gram(kernel, z, z)))


def c_k_hat(E1: PathEnsemble, E2: PathEnsemble, cfg: HsicConfig = HsicConfig(), kernel: Kernel = Kernel()) -> float:
    if E1.n_paths != E2.n_paths:
        raise DataError(f"paired ensembles need equal path counts, got {E1.n_paths} and {E2.n_paths}")
    n = E1.n_paths
    if n < 2:
        raise DataError("the independence criterion needs at least two paths")
    s1, s2 = cfg.samples(E1, E2)
    a = sum(centered_gram_at_time(E1, s, kernel).matrix for s in s1)
    b = sum(centered_gram_at_time(E2, t, kernel).matrix for t in s2)
    return float(np.sum(a * b)) / ((n - 1) ** 2 * len(s1) * len(s2))


def shift_hsic(X: PathEnsemble, Y: PathEnsemble, cfg: HsicConfig = HsicConfig(), kernel: Kernel = Kernel()) -> float:
    """Mean HSIC over circular shifts ``head..tail`` and all ordered path pairs.

    For paths ``i`` of ``X`` and ``j`` of ``Y`` the samples are
    ``(X[i, t], Y[j, (t + s) mod T])`` over stored steps ``1..T``.
    """
    if X.t_len != Y.t_len:
        raise DataError(f"series lengths differ: {X.t_len} vs {Y.t_len}")
    if X.dim != Y.dim:
        raise DataError(f"state dimensions differ: {X.dim} vs {Y.dim}")
    series_len = X.t_len - 1
    if cfg.tail >= series_len:
        raise ConfigError(f"shift window tail={cfg.tail} must be below the series length {series_len}")
    if series_len < 2:
        raise DataError("shift HSIC needs series of at least two steps")
    shifts = range(cfg.head, cfg.tail + 1)
    kx = np.stack([center(gram(kernel, X.values[i, 1:], X.values[i, 1:])) for i in range(X.n_paths)])
    ly = []
    for j in range(Y.n_paths):
        lc = center(gram(kernel, Y.values[j, 1:], Y.values[j, 1:]))
        for s in shifts:
            idx = (np.arange(series_len) + s) % series_len
            ly.append(lc[np.ix_(idx, idx)])
    ly = np.stack(ly)
    cross = kx.reshape(len(kx), -1) @ ly.reshape(len(ly), -1).T
    return float(cross.mean()) / (series_len - 1) ** 2


def minmax_normalize(curve) -> list:
    """Rescale to ``[0, 1]``; a constant curve maps to zeros."""
    v = np.asarray(curve, dtype=float)
    if v.size == 0:
        raise ConfigError("cannot normalise an empty curve")
    lo, hi = v.min(), v.max()
    if hi == lo:
        return [0.0] * v.size
    return ((v - lo) / (hi - lo)).tolist()
