"""Tiny self-contained SVG line plots (no plotting dependency).

Output is a static SVG with a framed axes box, linear ticks, polyline
series and an inline legend. Meant for quick inspection of trajectories,
error curves and spectra, not publication graphics.
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _nice_ticks(lo: float, hi: float, n: int = 5) -> List[float]:
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    start = math.ceil(lo / step) * step
    ticks = []
    v = start
    while v <= hi + 1e-12 * step:
        ticks.append(round(v, 12))
        v += step
    return ticks


def line_plot(series: Sequence[Tuple[str, Sequence[float], Sequence[float]]],
              title: str = "", xlabel: str = "", ylabel: str = "",
              width: int = 640, height: int = 440,
              log_y: bool = False) -> str:
    """Render labeled (x, y) series as an SVG document string."""
    ml, mr, mt, mb = 62, 16, 30, 44
    pw, ph = width - ml - mr, height - mt - mb
    cleaned = []
    for label, xs, ys in series:
        x = np.asarray(xs, dtype=float)
        y = np.asarray(ys, dtype=float)
        good = np.isfinite(x) & np.isfinite(y)
        if log_y:
            good &= y > 0
        x, y = x[good], y[good]
        if log_y:
            y = np.log10(y)
        cleaned.append((label, x, y))
    xs_all = np.concatenate([c[1] for c in cleaned if c[1].size] or [np.array([0.0, 1.0])])
    ys_all = np.concatenate([c[2] for c in cleaned if c[2].size] or [np.array([0.0, 1.0])])
    x0, x1 = float(xs_all.min()), float(xs_all.max())
    y0, y1 = float(ys_all.min()), float(ys_all.max())
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.04 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def px(v: float) -> float:
        return ml + (v - x0) / (x1 - x0) * pw

    def py(v: float) -> float:
        return mt + ph - (v - y0) / (y1 - y0) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>',
    ]
    if title:
        parts.append(f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" '
                     f'font-size="13">{title}</text>')
    for tx in _nice_ticks(x0, x1):
        if x0 <= tx <= x1:
            parts.append(f'<line x1="{px(tx):.1f}" y1="{mt + ph}" x2="{px(tx):.1f}" '
                         f'y2="{mt + ph + 4}" stroke="#444"/>')
            parts.append(f'<text x="{px(tx):.1f}" y="{mt + ph + 16}" '
                         f'text-anchor="middle">{tx:g}</text>')
    for ty in _nice_ticks(y0, y1):
        if y0 <= ty <= y1:
            label = f"1e{ty:g}" if log_y else f"{ty:g}"
            parts.append(f'<line x1="{ml - 4}" y1="{py(ty):.1f}" x2="{ml}" '
                         f'y2="{py(ty):.1f}" stroke="#444"/>')
            parts.append(f'<text x="{ml - 7}" y="{py(ty) + 3.5:.1f}" '
                         f'text-anchor="end">{label}</text>')
    if xlabel:
        parts.append(f'<text x="{ml + pw / 2:.1f}" y="{height - 8}" '
                     f'text-anchor="middle">{xlabel}</text>')
    if ylabel:
        parts.append(f'<text x="16" y="{mt + ph / 2:.1f}" text-anchor="middle" '
                     f'transform="rotate(-90 16 {mt + ph / 2:.1f})">{ylabel}</text>')
    for ci, (label, x, y) in enumerate(cleaned):
        if x.size == 0:
            continue
        color = PALETTE[ci % len(PALETTE)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     f'stroke-width="1"/>')
        if label:
            ly = mt + 14 + 14 * ci
            parts.append(f'<line x1="{ml + pw - 90}" y1="{ly - 4}" x2="{ml + pw - 70}" '
                         f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
            parts.append(f'<text x="{ml + pw - 65}" y="{ly}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_plot(path, series, **kwargs) -> None:
    with open(path, "w") as fh:
        fh.write(line_plot(series, **kwargs))
