"""Path ensembles: ``n_paths`` sampled trajectories of ``t_len`` complex states."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from rdsmetric.errors import DataError

__all__ = ["PathEnsemble", "fmt17"]


def fmt17(x: float) -> str:
    """Shortest-safe decimal with 17 significant digits."""
    return format(float(x), ".17g")


@dataclass(frozen=True, eq=False)
class PathEnsemble:
    """Sampled trajectories of one random dynamical system.

    Parameters
    ----------
    values : array_like, shape (n_paths, t_len, dim)
        Complex states; index 0 along time is the initial condition for
        simulated ensembles.
    meta : dict
        Free-form provenance (generator, parameters, seed).
    x0 : array_like, optional
        Declared common initial state.  When given, every path must start
        exactly there.
    """

    values: np.ndarray
    meta: dict = field(default_factory=dict)
    x0: np.ndarray | None = None

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.complex128, copy=True)
        if vals.ndim == 2:
            vals = vals[:, :, None]
        if vals.ndim != 3 or 0 in vals.shape:
            raise DataError(f"ensemble values must have shape (n_paths, t_len, dim), got {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise DataError("ensemble contains non-finite values")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        if self.x0 is not None:
            x0 = np.atleast_1d(np.asarray(self.x0, dtype=np.complex128)).copy()
            if x0.shape != (vals.shape[2],):
                raise DataError(f"initial state has shape {x0.shape}, expected ({vals.shape[2]},)")
            if not np.array_equal(vals[:, 0, :], np.broadcast_to(x0, vals[:, 0, :].shape)):
                raise DataError("not every path starts at the declared initial state")
            x0.flags.writeable = False
            object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def n_paths(self) -> int:
        return self.values.shape[0]

    @property
    def t_len(self) -> int:
        return self.values.shape[1]

    @property
    def dim(self) -> int:
        return self.values.shape[2]

    def at_time(self, t: int) -> np.ndarray:
        """States of all paths at stored index ``t`` as an ``(n_paths, dim)`` array."""
        if not 0 <= t < self.t_len:
            raise DataError(f"time index {t} out of range 0..{self.t_len - 1}")
        return self.values[:, t, :]

    def select_times(self, times) -> np.ndarray:
        """Contiguous ``(n_paths, len(times), dim)`` copy of the selected time steps."""
        return np.ascontiguousarray(self.values[:, list(times), :])

    def __repr__(self):
        return f"PathEnsemble(n_paths={self.n_paths}, t_len={self.t_len}, dim={self.dim}, meta={self.meta!r})"

    # -- serialization -------------------------------------------------------

    def to_csv(self, path=None) -> str:
        """Write ``path,t,re_0,im_0,...`` rows; returns the text.

        A leading ``# meta:`` comment records provenance as JSON.
        """
        buf = io.StringIO()
        meta = dict(self.meta)
        if self.x0 is not None:
            meta["x0"] = [[fmt17(z.real), fmt17(z.imag)] for z in self.x0]
        buf.write("# meta: " + json.dumps(meta, sort_keys=True, default=str) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        header = ["path", "t"]
        for i in range(self.dim):
            header += [f"re_{i}", f"im_{i}"]
        writer.writerow(header)
        for p in range(self.n_paths):
            for t in range(self.t_len):
                row = [str(p), str(t)]
                for z in self.values[p, t]:
                    row += [fmt17(z.real), fmt17(z.imag)]
                writer.writerow(row)
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, path) -> "PathEnsemble":
        text = Path(path).read_text()
        return cls.from_csv_text(text, source=str(path))

    @classmethod
    def from_csv_text(cls, text: str, source: str = "<text>") -> "PathEnsemble":
        meta = {}
        body = []
        for line in text.splitlines():
            if line.startswith("#"):
                if line.startswith("# meta:"):
                    meta = json.loads(line[len("# meta:"):])
                continue
            if line.strip():
                body.append(line)
        if not body:
            raise DataError(f"{source}: empty ensemble file")
        rows = list(csv.reader(body))
        header = rows[0]
        if header[:2] != ["path", "t"] or (len(header) - 2) % 2 or len(header) < 4:
            raise DataError(f"{source}: bad header {header!r}; expected path,t,re_0,im_0,...")
        dim = (len(header) - 2) // 2
        records = {}
        for lineno, row in enumerate(rows[1:], start=2):
            if len(row) != len(header):
                raise DataError(f"{source}: row {lineno} has {len(row)} fields, expected {len(header)}")
            try:
                p, t = int(row[0]), int(row[1])
                nums = [float(v) for v in row[2:]]
            except ValueError as exc:
                raise DataError(f"{source}: row {lineno}: {exc}") from None
            records[(p, t)] = [complex(nums[2 * i], nums[2 * i + 1]) for i in range(dim)]
        n_paths = 1 + max(p for p, _ in records)
        t_len = 1 + max(t for _, t in records)
        if len(records) != n_paths * t_len:
            raise DataError(f"{source}: expected {n_paths * t_len} (path, t) rows, found {len(records)}")
        values = np.empty((n_paths, t_len, dim), dtype=np.complex128)
        for (p, t), z in records.items():
            values[p, t] = z
        x0 = meta.pop("x0", None)
        if x0 is not None:
            x0 = [complex(float(re), float(im)) for re, im in x0]
        return cls(values, meta=meta, x0=x0)
