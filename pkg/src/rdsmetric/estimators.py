"""Determinant-based metrics between path ensembles.

Two raw estimators compare ensembles ``E1`` and ``E2`` of order ``m``:

``estimate_l``
    average over time tuples ``(t_1..t_m)``, row-path tuples ``w`` of ``E1``
    and, independently, column-path tuples ``e`` of ``E2`` of
    ``det[k(E1[w_p, t_p], E2[e_q, t_q])]_{p,q}``.
``estimate_l_tilde``
    the same with one path tuple shared by rows and columns, pairing path
    ``j`` of ``E1`` with path ``j`` of ``E2``.

``metric_L`` normalises either raw value into ``[0, 1]`` with the two
self-comparisons, and ``distance_matrix`` collects ``1 - L`` over a list of
ensembles.

Three evaluation routes are offered.  ``exact`` enumerates every tuple and
evaluates every determinant (compiled when the extension is built).
``closed_form`` uses the identity that the tuple average equals
``m! e_m(M) / n**m``, ``e_m`` the elementary symmetric polynomial of the
eigenvalues of the path-averaged Gram ``M`` (computed with Newton's
identities on power traces).  ``monte_carlo`` samples tuples uniformly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from rdsmetric import _backend
from rdsmetric.ensemble import PathEnsemble, fmt17
from rdsmetric.errors import ConfigError, CostCeilingError, DataError
from rdsmetric.kernels import Kernel, det_batch

__all__ = [
    "MetricConfig",
    "MetricValue",
    "DistanceMatrix",
    "estimate_l",
    "estimate_l_tilde",
    "normalize",
    "metric_L",
    "deterministic_metric_A",
    "metric_matrix",
    "distance_matrix",
    "elementary_symmetric",
]

VARIANTS = ("l", "l_tilde")
ENUMERATIONS = ("exact", "closed_form", "monte_carlo")
SELF_TERM_FLOOR = 1e-12
IMAG_TOL = 1e-9
_MC_CHUNK = 50_000


@dataclass(frozen=True)
class MetricConfig:
    """Settings shared by the estimators.

    Parameters
    ----------
    m : int
        Exterior-product order (size of the determinant).
    time_indices : sequence of int, optional
        Stored time steps averaged over.  Defaults to ``1..t_len-1`` (the
        shared initial state is left out); ``(0,)`` for single-step ensembles.
    epsilon : float, optional
        ``None`` takes the analytic ``eps -> +0`` limit in :func:`normalize`;
        a float evaluates the regularised quotient at that ``eps``.
    enumeration : {"exact", "closed_form", "monte_carlo"}
    budget, mc_seed : int
        Tuple draws and seed for Monte Carlo.
    variant : {"l", "l_tilde"}
        Independent (``l``) or shared (``l_tilde``) path tuples.
    kernel : Kernel
    cost_ceiling : float
        Largest number of determinants ``exact`` may enumerate.
    """

    m: int = 1
    time_indices: tuple | None = None
    epsilon: float | None = None
    enumeration: str = "exact"
    budget: int = 100_000
    mc_seed: int = 0
    variant: str = "l"
    kernel: Kernel = field(default_factory=Kernel)
    cost_ceiling: float = 1e8

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ConfigError(f"order m must be a positive integer, got {self.m!r}")
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.enumeration not in ENUMERATIONS:
            raise ConfigError(f"enumeration must be one of {ENUMERATIONS}, got {self.enumeration!r}")
        if self.enumeration == "monte_carlo" and self.budget < 2:
            raise ConfigError("Monte Carlo budget must be at least 2")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ConfigError(f"fixed epsilon must be positive, got {self.epsilon}")
        if self.time_indices is not None:
            ti = tuple(int(t) for t in self.time_indices)
            if not ti:
                raise ConfigError("time_indices must be non-empty")
            if any(b <= a for a, b in zip(ti, ti[1:])) or ti[0] < 0:
                raise ConfigError(f"time_indices must be non-negative and strictly increasing, got {ti}")
            object.__setattr__(self, "time_indices", ti)

    def times_for(self, *ensembles: PathEnsemble) -> tuple:
        t_len = min(e.t_len for e in ensembles)
        if self.time_indices is None:
            return tuple(range(1, t_len)) if t_len > 1 else (0,)
        if self.time_indices[-1] >= t_len:
            raise ConfigError(f"time index {self.time_indices[-1]} out of range for ensembles of length {t_len}")
        return self.time_indices

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "time_indices": None if self.time_indices is None else list(self.time_indices),
            "epsilon": self.epsilon,
            "enumeration": self.enumeration,
            "budget": self.budget,
            "mc_seed": self.mc_seed,
            "variant": self.variant,
            "kernel": self.kernel.to_dict(),
            "cost_ceiling": self.cost_ceiling,
        }


@dataclass(frozen=True)
class MetricValue:
    """Raw estimates and their normalisation ``L = |l12|^2 / (l11 l22)``."""

    l12: complex
    l11: complex
    l22: complex
    L: float
    variant: str

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "L": self.L,
            "one_minus_L": 1.0 - self.L,
            "l12": [self.l12.real, self.l12.imag],
            "l11": [self.l11.real, self.l11.imag],
            "l22": [self.l22.real, self.l22.imag],
        }


# -- helpers -------------------------------------------------------------------


def elementary_symmetric(mat: np.ndarray, m: int) -> complex:
    """``e_m`` of the eigenvalues of ``mat`` via Newton's identities."""
    power = np.eye(mat.shape[0], dtype=mat.dtype)
    traces = []
    for _ in range(m):
        power = power @ mat
        traces.append(np.trace(power))
    e = [1.0]
    for k in range(1, m + 1):
        acc = 0.0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * traces[i - 1]
        e.append(acc / k)
    return e[m]


def _check_pair(E1, E2):
    if E1.dim != E2.dim:
        raise DataError(f"ensembles differ in state dimension: {E1.dim} vs {E2.dim}")


def _check_cost(cost, cfg):
    if cost > cfg.cost_ceiling:
        raise CostCeilingError(
            f"exact enumeration needs {cost:.3g} determinants, above the ceiling {cfg.cost_ceiling:.3g}; "
            "use enumeration='closed_form' or 'monte_carlo'"
        )


def _mc_mean(draw_blocks, budget, seed):
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    chunks = []
    remaining = budget
    while remaining > 0:
        b = min(remaining, _MC_CHUNK)
        chunks.append(det_batch(draw_blocks(rng, b)))
        remaining -= b
    dets = np.concatenate(chunks)
    return complex(dets.mean()), float(dets.std(ddof=1) / math.sqrt(budget))


def _kernel_blocks(kernel, p1, p2):
    diff = p1[:, :, None, :] - p2[:, None, :, :]
    sq = np.sum(diff.real ** 2 + diff.imag ** 2, axis=-1)
    return np.exp(-kernel.gamma * sq)


# -- estimators ------------------------------------------------------------------


def estimate_l(E1: PathEnsemble, E2: PathEnsemble, cfg: MetricConfig, return_stderr: bool = False):
    """Raw ``l`` estimate with independent path tuples for the two systems.

    Returns a complex scalar, or ``(value, stderr)`` when ``return_stderr``
    (``stderr`` is 0 for the deterministic routes).
    """
    _check_pair(E1, E2)
    times = cfg.times_for(E1, E2)
    x1, x2 = E1.select_times(times), E2.select_times(times)
    n1, tau, d = x1.shape
    n2 = x2.shape[0]
    m, gamma = cfg.m, cfg.kernel.gamma
    se = 0.0
    if cfg.enumeration == "monte_carlo":

        def draw(rng, b):
            ts = rng.integers(tau, size=(b, m))
            ws = rng.integers(n1, size=(b, m))
            es = rng.integers(n2, size=(b, m))
            return _kernel_blocks(cfg.kernel, x1[ws, ts], x2[es, ts])

        value, se = _mc_mean(draw, cfg.budget, cfg.mc_seed)
    elif m == 1 and cfg.enumeration == "exact":
        _check_cost(float(tau * n1 * n2), cfg)
        value = complex(_backend.l1_mean(x1, x2, gamma))
    else:
        if cfg.enumeration == "exact":
            _check_cost(float(tau * n1 * n2) ** m, cfg)
        g = _backend.gaussian_gram(x1.reshape(n1 * tau, d), x2.reshape(n2 * tau, d), gamma)
        g = g.reshape(n1, tau, n2, tau)
        if cfg.enumeration == "exact":
            value = complex(_backend.enum_l(g, m))
        else:
            mean_gram = g.mean(axis=(0, 2))
            value = complex(math.factorial(m) * elementary_symmetric(mean_gram, m) / tau ** m)
    return (value, se) if return_stderr else value


def estimate_l_tilde(E1: PathEnsemble, E2: PathEnsemble, cfg: MetricConfig, return_stderr: bool = False):
    """Raw ``l_tilde`` estimate: one path tuple shared by both systems (paths paired by index)."""
    _check_pair(E1, E2)
    if E1.n_paths != E2.n_paths:
        raise DataError(f"shared-path estimator needs equal path counts, got {E1.n_paths} and {E2.n_paths}")
    times = cfg.times_for(E1, E2)
    x1, x2 = E1.select_times(times), E2.select_times(times)
    n, tau, d = x1.shape
    m = cfg.m
    se = 0.0
    if cfg.enumeration == "monte_carlo":

        def draw(rng, b):
            ts = rng.integers(tau, size=(b, m))
            ws = rng.integers(n, size=(b, m))
            return _kernel_blocks(cfg.kernel, x1[ws, ts], x2[ws, ts])

        value, se = _mc_mean(draw, cfg.budget, cfg.mc_seed)
    else:
        slots = n * tau
        if cfg.enumeration == "exact":
            _check_cost(float(slots) ** m, cfg)
        g = _backend.gaussian_gram(x1.reshape(slots, d), x2.reshape(slots, d), cfg.kernel.gamma)
        if cfg.enumeration == "exact":
            value = complex(_backend.enum_l_tilde(g, m))
        else:
            value = complex(math.factorial(m) * elementary_symmetric(g, m) / slots ** m)
    return (value, se) if return_stderr else value


def _raw(E1, E2, cfg):
    return estimate_l_tilde(E1, E2, cfg) if cfg.variant == "l_tilde" else estimate_l(E1, E2, cfg)


def _real_part(value, name):
    value = complex(value)
    if abs(value.imag) > IMAG_TOL * max(1.0, abs(value.real)):
        raise DataError(f"{name} has imaginary part {value.imag:.3g}; expected a real self-comparison")
    return value.real


def normalize(l12, l11, l22, epsilon: float | None = None) -> float:
    """Normalised similarity ``|l12 + eps|^2 / (|l11 + eps| |l22 + eps|)``.

    With ``epsilon=None`` the ``eps -> +0`` limit is taken analytically:
    both self-terms vanishing gives 1, exactly one vanishing gives 0.
    Self-terms are clamped at 0 first.
    """
    a = max(_real_part(l11, "l11"), 0.0)
    b = max(_real_part(l22, "l22"), 0.0)
    z = complex(l12)
    if epsilon is None:
        small_a, small_b = a <= SELF_TERM_FLOOR, b <= SELF_TERM_FLOOR
        if small_a and small_b:
            return 1.0
        if small_a or small_b:
            return 0.0
        return (z.real * z.real + z.imag * z.imag) / (a * b)
    num = abs(z + epsilon) ** 2
    return num / (abs(a + epsilon) * abs(b + epsilon))


def metric_L(E1: PathEnsemble, E2: PathEnsemble, cfg: MetricConfig) -> MetricValue:
    l12 = _raw(E1, E2, cfg)
    l11 = l12 if E1 is E2 else _raw(E1, E1, cfg)
    l22 = l11 if E1 is E2 else _raw(E2, E2, cfg)
    return MetricValue(l12, l11, l22, normalize(l12, l11, l22, cfg.epsilon), cfg.variant)


def deterministic_metric_A(path1: PathEnsemble, path2: PathEnsemble, cfg: MetricConfig) -> MetricValue:
    """The metric for single deterministic trajectories (one-point sample space)."""
    for e in (path1, path2):
        if e.n_paths != 1:
            raise DataError(f"deterministic metric needs single-path ensembles, got {e.n_paths} paths")
    cfg = replace(cfg, variant="l")
    return metric_L(path1, path2, cfg)


# -- matrices --------------------------------------------------------------------


def _map(fn, items, workers):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def metric_matrix(ensembles, cfg: MetricConfig, workers: int = 1):
    """Raw estimates ``R[i, j]`` and normalised ``L[i, j]`` over a list of ensembles.

    Self-terms are computed once; each unordered pair once, then mirrored.
    """
    ensembles = list(ensembles)
    if not ensembles:
        raise ConfigError("need at least one ensemble")
    dims = {e.dim for e in ensembles}
    if len(dims) != 1:
        raise DataError(f"ensembles differ in state dimension: {sorted(dims)}")
    if cfg.variant == "l_tilde" and len({e.n_paths for e in ensembles}) != 1:
        raise DataError("shared-path variant needs every ensemble to have the same number of paths")
    n = len(ensembles)
    selfs = _map(lambda e: _raw(e, e, cfg), ensembles, workers)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    cross = _map(lambda ij: _raw(ensembles[ij[0]], ensembles[ij[1]], cfg), pairs, workers)
    raw = np.empty((n, n), dtype=np.complex128)
    sim = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        raw[i, i] = selfs[i]
        sim[i, i] = normalize(selfs[i], selfs[i], selfs[i], cfg.epsilon)
    for (i, j), v in zip(pairs, cross):
        raw[i, j] = v
        raw[j, i] = v
        sim[i, j] = sim[j, i] = normalize(v, selfs[i], selfs[j], cfg.epsilon)
    return raw, sim


@dataclass
class DistanceMatrix:
    """Labelled symmetric matrix of ``1 - L`` values."""

    labels: list
    values: np.ndarray
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.labels = [str(x) for x in self.labels]
        n = len(self.labels)
        if self.values.shape != (n, n):
            raise DataError(f"{n} labels but matrix of shape {self.values.shape}")

    def to_csv(self, path=None, comment: dict | None = None) -> str:
        buf = io.StringIO()
        if comment is not None:
            buf.write("# config: " + json.dumps(comment, sort_keys=True) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.labels)
        for row in self.values:
            writer.writerow([fmt17(v) for v in row])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, path) -> "DistanceMatrix":
        config = {}
        lines = []
        for line in Path(path).read_text().splitlines():
            if line.startswith("# config:"):
                config = json.loads(line[len("# config:"):])
            elif line.strip() and not line.startswith("#"):
                lines.append(line)
        rows = list(csv.reader(lines))
        if not rows:
            raise DataError(f"{path}: empty matrix file")
        labels = rows[0]
        try:
            values = np.array([[float(v) for v in r] for r in rows[1:]])
        except ValueError as exc:
            raise DataError(f"{path}: {exc}") from None
        return cls(labels, values.reshape(len(rows) - 1, -1), config)

    def to_json(self, path=None) -> str:
        text = json.dumps(
            {"labels": self.labels, "values": self.values.tolist(), "config": self.config},
            sort_keys=True,
        )
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_json(cls, text: str) -> "DistanceMatrix":
        doc = json.loads(text)
        return cls(doc["labels"], np.array(doc["values"], dtype=float), doc.get("config", {}))


def distance_matrix(ensembles, cfg: MetricConfig, labels=None, workers: int = 1) -> DistanceMatrix:
    ensembles = list(ensembles)
    _, sim = metric_matrix(ensembles, cfg, workers=workers)
    if labels is None:
        labels = [str(i) for i in range(len(ensembles))]
    return DistanceMatrix(list(labels), 1.0 - sim, cfg.to_dict())
