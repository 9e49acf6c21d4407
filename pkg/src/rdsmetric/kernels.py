"""Scalar kernels on complex state vectors, Gram blocks and small determinants.

States are complex vectors; real data is embedded with zero imaginary part so a
single code path serves both.  The squared distance between two states is
``sum(|z_i - w_i|**2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rdsmetric import _backend

__all__ = [
    "Kernel",
    "as_state",
    "as_states",
    "eval_kernel",
    "gram",
    "det_small",
    "det_batch",
]

KERNEL_FAMILIES = ("gaussian",)
MAX_DET_ORDER = 8


@dataclass(frozen=True)
class Kernel:
    """Positive definite kernel ``k(z, w) = exp(-gamma * ||z - w||**2)``.

    ``gamma`` is an inverse squared length-scale; the default ``0.5`` gives
    ``exp(-|z - w|**2 / 2)``.
    """

    family: str = "gaussian"
    gamma: float = 0.5

    def __post_init__(self):
        if self.family not in KERNEL_FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}; expected one of {KERNEL_FAMILIES}")
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError(f"kernel bandwidth gamma must be a positive finite number, got {self.gamma!r}")

    def __call__(self, z, w) -> complex:
        return eval_kernel(self, z, w)

    def to_dict(self) -> dict:
        return {"family": self.family, "gamma": self.gamma}


def as_state(z) -> np.ndarray:
    """Coerce a scalar or vector into a finite 1-d complex128 state."""
    arr = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"a state must be a non-empty vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("state contains non-finite coordinates")
    return arr


def as_states(points) -> np.ndarray:
    """Coerce a list of states into an ``(n, d)`` complex128 array.

    A 1-d input is read as ``n`` scalar states.
    """
    arr = np.asarray(points, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValueError(f"expected a list of state vectors, got array of shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("states contain non-finite coordinates")
    return np.ascontiguousarray(arr)


def eval_kernel(kernel: Kernel, z, w) -> complex:
    z = as_state(z)
    w = as_state(w)
    if z.shape != w.shape:
        raise ValueError(f"dimension mismatch: {z.shape[0]} vs {w.shape[0]}")
    diff = z - w
    sq = float(np.sum(diff.real * diff.real + diff.imag * diff.imag))
    return complex(np.exp(-kernel.gamma * sq))


def gram(kernel: Kernel, rows, cols) -> np.ndarray:
    """Return the block ``G[p, q] = k(rows[p], cols[q])``.

    The Gaussian family is real valued, so the block is float64.
    """
    x = as_states(rows)
    y = as_states(cols)
    if x.shape[1] != y.shape[1]:
        raise ValueError(f"dimension mismatch: {x.shape[1]} vs {y.shape[1]}")
    return _backend.gaussian_gram(x, y, kernel.gamma)


def det_small(block) -> complex | float:
    """Determinant of a small square block.

    Orders 1 to 3 use cofactor expansion; orders 4 to 8 use Gaussian
    elimination with partial pivoting.  This is the inner product of two
    wedge products ``x_1 ^ ... ^ x_m`` and ``y_1 ^ ... ^ y_m`` when
    ``block[i][j] = <x_i, y_j>``.
    """
    a = np.asarray(block)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"determinant needs a square block, got shape {a.shape}")
    m = a.shape[0]
    if m == 0 or m > MAX_DET_ORDER:
        raise ValueError(f"block order must be in 1..{MAX_DET_ORDER}, got {m}")
    if m == 1:
        return a[0, 0].item()
    if m == 2:
        return (a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]).item()
    if m == 3:
        return (
            a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
            - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
            + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
        ).item()

    work = [list(row) for row in a.tolist()]
    det = 1.0
    for col in range(m):
        pivot = max(range(col, m), key=lambda r: abs(work[r][col]))
        if work[pivot][col] == 0:
            return 0.0 * det
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            det = -det
        p = work[col][col]
        det *= p
        for r in range(col + 1, m):
            f = work[r][col] / p
            if f != 0:
                row_r, row_c = work[r], work[col]
                for c in range(col + 1, m):
                    row_r[c] -= f * row_c[c]
    return det


def det_batch(blocks: np.ndarray) -> np.ndarray:
    """Determinants of a stack of ``(..., m, m)`` blocks.

    Same cofactor formulas as :func:`det_small` for ``m <= 3``; LAPACK's
    partially pivoted LU beyond that.
    """
    b = np.asarray(blocks)
    m = b.shape[-1]
    if b.ndim < 2 or b.shape[-2] != m:
        raise ValueError(f"expected stacked square blocks, got shape {b.shape}")
    if m == 1:
        return b[..., 0, 0]
    if m == 2:
        return b[..., 0, 0] * b[..., 1, 1] - b[..., 0, 1] * b[..., 1, 0]
    if m == 3:
        return (
            b[..., 0, 0] * (b[..., 1, 1] * b[..., 2, 2] - b[..., 1, 2] * b[..., 2, 1])
            - b[..., 0, 1] * (b[..., 1, 0] * b[..., 2, 2] - b[..., 1, 2] * b[..., 2, 0])
            + b[..., 0, 2] * (b[..., 1, 0] * b[..., 2, 1] - b[..., 1, 1] * b[..., 2, 0])
        )
    return np.linalg.det(b)
