"""Seeded generators for noisy rotation, damped rotation and AR systems.

Every path draws its noise from its own stream keyed by ``(seed, stream,
path)``, so the state of path ``p`` at step ``t`` depends only on those keys
and ``t``; paths can be generated in any order or in parallel.  Systems
simulated with the same ``(seed, stream)`` see the same noise realisation
path by path (a shared sample space); distinct streams are independent.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from rdsmetric.ensemble import PathEnsemble
from rdsmetric.errors import ConfigError

__all__ = [
    "RotationSpec",
    "LogisticRotationSpec",
    "ArSpec",
    "path_rng",
    "sample_complex_normal",
    "simulate_rotation",
    "simulate_logistic_rotation",
    "simulate_ar",
    "mix_ensembles",
]


@dataclass(frozen=True)
class RotationSpec:
    """``z -> alpha * z + noise`` with ``alpha = alpha_mod * exp(2 pi i theta)``."""

    alpha_mod: float
    theta: float
    sigma: float = 0.0
    z0: complex = 0.9

    def __post_init__(self):
        if not 0.0 <= self.alpha_mod <= 1.0:
            raise ConfigError(f"|alpha| must lie in [0, 1], got {self.alpha_mod}")
        if not self.sigma >= 0.0:
            raise ConfigError(f"sigma must be non-negative, got {self.sigma}")

    @property
    def alpha(self) -> complex:
        return self.alpha_mod * np.exp(2j * math.pi * self.theta)


@dataclass(frozen=True)
class LogisticRotationSpec:
    """``x -> alpha * x * (1 - c * x) + noise``."""

    alpha_mod: float
    theta: float
    sigma: float = 0.1
    c: float = 0.01
    x0: complex = 0.9

    def __post_init__(self):
        if not 0.0 <= self.alpha_mod <= 1.0:
            raise ConfigError(f"|alpha| must lie in [0, 1], got {self.alpha_mod}")
        if not self.sigma >= 0.0:
            raise ConfigError(f"sigma must be non-negative, got {self.sigma}")
        if not self.c >= 0.0:
            raise ConfigError(f"damping c must be non-negative, got {self.c}")

    @property
    def alpha(self) -> complex:
        return self.alpha_mod * np.exp(2j * math.pi * self.theta)


@dataclass(frozen=True)
class ArSpec:
    """Vector autoregression ``x -> A x + v`` with ``v ~ N(0, Sigma)``."""

    A: np.ndarray
    Sigma: np.ndarray
    x0: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        S = np.atleast_2d(np.asarray(self.Sigma, dtype=float))
        x0 = np.atleast_1d(np.asarray(self.x0, dtype=float))
        d = x0.shape[0]
        if A.shape != (d, d) or S.shape != (d, d):
            raise ConfigError(f"A and Sigma must be {d}x{d}, got {A.shape} and {S.shape}")
        if not np.allclose(S, S.T, rtol=0, atol=1e-12):
            raise ConfigError("Sigma is not symmetric")
        eig = np.linalg.eigvalsh(S)
        if eig.min() < -1e-10 * max(1.0, abs(eig.max())):
            raise ConfigError(f"Sigma is not positive semidefinite (min eigenvalue {eig.min():.3g})")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "Sigma", S)
        object.__setattr__(self, "x0", x0)

    def noise_factor(self) -> np.ndarray:
        """Matrix ``F`` with ``F @ F.T == Sigma`` (eigen square root; tolerates singular Sigma)."""
        lam, vec = np.linalg.eigh(self.Sigma)
        return vec * np.sqrt(np.clip(lam, 0.0, None))


def path_rng(seed: int, path: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for one path; distinct ``(stream, path)`` keys never overlap."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(stream), int(path))))


def _cn_draw(rng, sigma, shape):
    z = rng.standard_normal(shape + (2,))
    return (sigma / math.sqrt(2.0)) * (z[..., 0] + 1j * z[..., 1])


def sample_complex_normal(sigma: float, count: int, seed: int) -> np.ndarray:
    """``count`` i.i.d. draws from CN(0, sigma**2): independent N(0, sigma**2 / 2) parts."""
    if sigma < 0:
        raise ConfigError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0:
        return np.zeros(count, dtype=np.complex128)
    return _cn_draw(np.random.default_rng(np.random.SeedSequence(int(seed))), sigma, (count,))


def _complex_noise(sigma, n_paths, steps, dim, seed, stream):
    noise = np.zeros((n_paths, steps, dim), dtype=np.complex128)
    if sigma > 0 and steps > 0:
        for p in range(n_paths):
            noise[p] = _cn_draw(path_rng(seed, p, stream), sigma, (steps, dim))
    return noise


def _check_sizes(n_paths, t_len):
    if n_paths < 1:
        raise ConfigError(f"n_paths must be positive, got {n_paths}")
    if t_len < 1:
        raise ConfigError(f"t_len must be positive, got {t_len}")


def simulate_rotation(spec: RotationSpec, n_paths: int, t_len: int, seed: int, stream: int = 0) -> PathEnsemble:
    _check_sizes(n_paths, t_len)
    z0 = np.atleast_1d(np.asarray(spec.z0, dtype=np.complex128))
    noise = _complex_noise(spec.sigma, n_paths, t_len - 1, z0.shape[0], seed, stream)
    values = np.empty((n_paths, t_len, z0.shape[0]), dtype=np.complex128)
    values[:, 0, :] = z0
    alpha = spec.alpha
    for t in range(t_len - 1):
        values[:, t + 1, :] = alpha * values[:, t, :] + noise[:, t, :]
    meta = {"generator": "rotation", **asdict(spec), "seed": seed, "stream": stream}
    return PathEnsemble(values, meta=meta, x0=z0)


def simulate_logistic_rotation(spec: LogisticRotationSpec, n_paths: int, t_len: int, seed: int, stream: int = 0) -> PathEnsemble:
    _check_sizes(n_paths, t_len)
    x0 = np.atleast_1d(np.asarray(spec.x0, dtype=np.complex128))
    noise = _complex_noise(spec.sigma, n_paths, t_len - 1, x0.shape[0], seed, stream)
    values = np.empty((n_paths, t_len, x0.shape[0]), dtype=np.complex128)
    values[:, 0, :] = x0
    alpha = spec.alpha
    for t in range(t_len - 1):
        x = values[:, t, :]
        values[:, t + 1, :] = alpha * x * (1.0 - spec.c * x) + noise[:, t, :]
    meta = {"generator": "logistic_rotation", **asdict(spec), "seed": seed, "stream": stream}
    return PathEnsemble(values, meta=meta, x0=x0)


def simulate_ar(spec: ArSpec, n_paths: int, t_len: int, seed: int, stream: int = 0) -> PathEnsemble:
    _check_sizes(n_paths, t_len)
    d = spec.x0.shape[0]
    factor = spec.noise_factor()
    values = np.empty((n_paths, t_len, d), dtype=float)
    values[:, 0, :] = spec.x0
    for p in range(n_paths):
        xi = path_rng(seed, p, stream).standard_normal((t_len - 1, d)) if t_len > 1 else np.empty((0, d))
        kicks = xi @ factor.T
        for t in range(t_len - 1):
            values[p, t + 1] = spec.A @ values[p, t] + kicks[t]
    meta = {
        "generator": "ar",
        "A": spec.A.tolist(),
        "Sigma": spec.Sigma.tolist(),
        "x0": spec.x0.tolist(),
        "seed": seed,
        "stream": stream,
    }
    return PathEnsemble(values.astype(np.complex128), meta=meta, x0=spec.x0)


def mix_ensembles(X: PathEnsemble, Y: PathEnsemble, phi: float) -> tuple[PathEnsemble, PathEnsemble]:
    """Rotate paired paths: ``(X cos phi + Y sin phi, -X sin phi + Y cos phi)``."""
    if X.values.shape != Y.values.shape:
        raise ConfigError(f"cannot mix ensembles of shapes {X.values.shape} and {Y.values.shape}")
    c, s = math.cos(phi), math.sin(phi)
    xv, yv = X.values, Y.values
    meta = {"generator": "mix", "phi": phi, "x": X.meta, "y": Y.meta}
    return (
        PathEnsemble(c * xv + s * yv, meta={**meta, "role": "x"}),
        PathEnsemble(-s * xv + c * yv, meta={**meta, "role": "y"}),
    )
