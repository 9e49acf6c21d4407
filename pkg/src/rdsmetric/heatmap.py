"""Self-contained SVG heatmaps on a linear grayscale ramp over [0, 1]."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["render_heatmap", "emit_heatmap"]

CELL = 28
MARGIN = 110


def _gray(v: float) -> str:
    level = int(round(255 * v))
    return f"#{level:02x}{level:02x}{level:02x}"


def render_heatmap(matrix, labels=None, title: str | None = None, annotate: bool = False) -> str:
    """SVG text for a square matrix; 0 is black, 1 is white.

    Values outside [0, 1] are clamped and counted in a ``clamped`` comment.
    """
    values = np.asarray(getattr(matrix, "values", matrix), dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError(f"heatmap needs a square matrix, got shape {values.shape}")
    n = values.shape[0]
    if labels is None:
        labels = getattr(matrix, "labels", None) or [str(i) for i in range(n)]
    finite = np.where(np.isfinite(values), values, 0.0)
    clipped = np.clip(finite, 0.0, 1.0)
    n_clamped = int(np.count_nonzero(clipped != values))

    size = MARGIN + n * CELL + 10
    top = MARGIN if title is None else MARGIN + 20
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size + top - MARGIN}" '
        f'viewBox="0 0 {size} {size + top - MARGIN}" font-family="sans-serif" font-size="10">'
    ]
    if n_clamped:
        out.append(f"<!-- clamped: {n_clamped} cells outside [0, 1] -->")
    if title is not None:
        out.append(f'<text x="{size / 2:.1f}" y="16" text-anchor="middle" font-size="13">{escape(title)}</text>')
    for i in range(n):
        for j in range(n):
            x, y = MARGIN + j * CELL, top + i * CELL
            v = clipped[i, j]
            out.append(
                f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{_gray(v)}">'
                f"<title>{escape(str(labels[i]))} / {escape(str(labels[j]))}: {values[i, j]:.6g}</title></rect>"
            )
            if annotate:
                ink = "#000000" if v > 0.5 else "#ffffff"
                out.append(
                    f'<text x="{x + CELL / 2:.1f}" y="{y + CELL / 2 + 3:.1f}" text-anchor="middle" '
                    f'font-size="7" fill="{ink}">{v:.2f}</text>'
                )
    for i, lab in enumerate(labels):
        cy = top + i * CELL + CELL / 2 + 3
        out.append(f'<text x="{MARGIN - 4}" y="{cy:.1f}" text-anchor="end">{escape(str(lab))}</text>')
        cx = MARGIN + i * CELL + CELL / 2
        out.append(
            f'<text x="{cx:.1f}" y="{top - 4}" text-anchor="start" '
            f'transform="rotate(-60 {cx:.1f} {top - 4})">{escape(str(lab))}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_heatmap(matrix, path, labels=None, title: str | None = None, annotate: bool = False) -> Path:
    path = Path(path)
    path.write_text(render_heatmap(matrix, labels=labels, title=title, annotate=annotate))
    return path
