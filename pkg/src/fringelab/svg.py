"""Minimal, deterministic SVG line plots for the CSV tables.

No timestamps or random ids, so the same data always gives the same bytes.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

_W, _H = 640, 400
_L, _R, _T, _B = 70, 20, 40, 50


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def line_plot(x, y, path, *, xlabel="", ylabel="", title="", markers=False) -> None:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x0, x1 = float(x.min()), float(x.max())
    y0, y1 = min(0.0, float(y.min())), float(y.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pw, ph = _W - _L - _R, _H - _T - _B
    px = _L + (x - x0) / (x1 - x0) * pw
    py = _T + ph - (y - y0) / (y1 - y0) * ph
    pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(px, py))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{_L}" y="{_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        f'<polyline points="{pts}" fill="none" stroke="#1f5fa8" stroke-width="1.2"/>',
    ]
    if markers:
        parts += [f'<circle cx="{_fmt(a)}" cy="{_fmt(b)}" r="3" fill="#1f5fa8"/>' for a, b in zip(px, py)]
    for frac in (0.0, 0.5, 1.0):
        xv = x0 + frac * (x1 - x0)
        yv = y0 + frac * (y1 - y0)
        parts.append(f'<text x="{_fmt(_L + frac * pw)}" y="{_H - _B + 18}" font-size="11" text-anchor="middle">{xv:.4g}</text>')
        parts.append(f'<text x="{_L - 6}" y="{_fmt(_T + ph - frac * ph + 4)}" font-size="11" text-anchor="end">{yv:.4g}</text>')
    parts.append(f'<text x="{_L + pw / 2}" y="{_H - 10}" font-size="12" text-anchor="middle">{escape(xlabel)}</text>')
    parts.append(
        f'<text x="16" y="{_T + ph / 2}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 16 {_T + ph / 2})">{escape(ylabel)}</text>'
    )
    parts.append(f'<text x="{_W / 2}" y="24" font-size="14" text-anchor="middle">{escape(title)}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")


def step_plot(t, y, path, **kw) -> None:
    """Piecewise-constant trace drawn as a staircase."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    xs = np.repeat(t, 2)[1:]
    ys = np.repeat(y, 2)[:-1]
    line_plot(xs, ys, path, **kw)
