"""UCR-style labelled series: loading, time skipping and grouping into ensembles.

Rows are delimiter-separated numbers with the class label in the first
column.  Tab and comma delimiters are detected from the first row.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from rdsmetric.ensemble import PathEnsemble, fmt17
from rdsmetric.errors import ConfigError, DataError

__all__ = [
    "LabeledSeriesSet",
    "EnsembleGroup",
    "load_ucr",
    "skip_series",
    "make_ensemble_groups",
    "groups_manifest",
]


@dataclass(frozen=True, eq=False)
class LabeledSeriesSet:
    labels: list
    values: np.ndarray
    source: str = ""
    class_ids: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 2 or vals.shape[0] != len(self.labels):
            raise DataError(f"{len(self.labels)} labels for series array of shape {vals.shape}")
        object.__setattr__(self, "values", vals)
        if not self.class_ids:
            ids = {}
            for lab in self.labels:
                ids.setdefault(lab, len(ids))
            object.__setattr__(self, "class_ids", ids)

    @property
    def n_series(self) -> int:
        return self.values.shape[0]

    @property
    def length(self) -> int:
        return self.values.shape[1]

    @property
    def classes(self) -> list:
        """Class labels in order of first appearance."""
        return list(self.class_ids)

    def rows_of(self, label) -> list:
        return [i for i, lab in enumerate(self.labels) if lab == label]

    def to_text(self, delimiter: str = "\t") -> str:
        lines = []
        for lab, row in zip(self.labels, self.values):
            lines.append(delimiter.join([lab] + [fmt17(v) for v in row]))
        return "\n".join(lines) + "\n"

    def skipped(self, s: int) -> "LabeledSeriesSet":
        return LabeledSeriesSet(list(self.labels), skip_series(self.values.T, s).T, self.source, dict(self.class_ids))


@dataclass(frozen=True)
class EnsembleGroup:
    class_label: str
    ensembles: list
    source_rows: list

    def __post_init__(self):
        flat = [r for rows in self.source_rows for r in rows]
        if len(set(flat)) != len(flat):
            raise DataError(f"class {self.class_label}: ensembles share source rows")


def _detect_delimiter(line: str) -> str | None:
    if "\t" in line:
        return "\t"
    if "," in line:
        return ","
    return None


def load_ucr(path) -> LabeledSeriesSet:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DataError(f"{path}: empty file")
    delim = _detect_delimiter(lines[0])
    labels, rows = [], []
    width = None
    for r, line in enumerate(lines, start=1):
        fields = line.strip().split(delim) if delim else line.split()
        if width is None:
            width = len(fields)
            if width < 2:
                raise DataError(f"{path}: row {r} has no series values after the label")
        elif len(fields) != width:
            raise DataError(f"{path}: row {r} has {len(fields)} fields, expected {width} (ragged rows)")
        row = []
        for c, f in enumerate(fields[1:], start=2):
            try:
                row.append(float(f))
            except ValueError:
                raise DataError(f"{path}: row {r}, column {c}: non-numeric value {f!r}") from None
        label = fields[0].strip()
        try:
            # labels like "1.0000000e+00" in older archive releases
            num = float(label)
            if num.is_integer():
                label = str(int(num))
        except ValueError:
            pass
        labels.append(label)
        rows.append(row)
    vals = np.array(rows, dtype=float)
    if not np.all(np.isfinite(vals)):
        r, c = np.argwhere(~np.isfinite(vals))[0]
        raise DataError(f"{path}: row {r + 1}, column {c + 2}: non-finite value")
    return LabeledSeriesSet(labels, vals, source=str(path))


def skip_series(values, s: int):
    """Keep stored indices ``0, s, 2s, ...`` along the first axis."""
    if int(s) != s or s < 1:
        raise ConfigError(f"skip must be a positive integer, got {s!r}")
    return values[:: int(s)]


def make_ensemble_groups(data: LabeledSeriesSet, n_paths: int, n_pairs: int, seed: int) -> list:
    """Draw ``n_paths`` series per class and split them into ``n_pairs`` ensembles.

    Draws are uniform without replacement from a per-class stream of ``seed``;
    each ensemble holds ``n_paths // n_pairs`` series as its sample paths.
    """
    if n_pairs < 1 or n_paths < 1:
        raise ConfigError("n_paths and n_pairs must be positive")
    if n_paths % n_pairs:
        raise ConfigError(f"n_paths={n_paths} is not divisible by n_pairs={n_pairs}")
    sub = n_paths // n_pairs
    groups = []
    for cid, label in enumerate(data.classes):
        rows = data.rows_of(label)
        if len(rows) < n_paths:
            raise DataError(f"class {label} has {len(rows)} series, fewer than n_paths={n_paths}")
        rng = np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(cid,)))
        drawn = [rows[i] for i in rng.choice(len(rows), size=n_paths, replace=False)]
        parts = [drawn[k * sub:(k + 1) * sub] for k in range(n_pairs)]
        ensembles = [
            PathEnsemble(
                data.values[part][:, :, None],
                meta={"class": label, "ensemble_id": k, "source_rows": part, "source": data.source},
            )
            for k, part in enumerate(parts)
        ]
        groups.append(EnsembleGroup(label, ensembles, parts))
    return groups


def groups_manifest(groups) -> str:
    records = [
        {"class": g.class_label, "ensemble_id": k, "source_row_indices": [int(r) for r in rows]}
        for g in groups
        for k, rows in enumerate(g.source_rows)
    ]
    return json.dumps(records, indent=1)
