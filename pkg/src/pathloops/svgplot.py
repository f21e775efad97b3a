"""Minimal deterministic SVG line charts (no plotting dependency)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 800, 500
PAD_LEFT, PAD_RIGHT, PAD_TOP, PAD_BOTTOM = 80, 30, 45, 55
MAX_TICKS = 6


@dataclass(frozen=True)
class Series:
    label: str
    color: str
    x: np.ndarray
    y: np.ndarray


def nice_ticks(lo: float, hi: float, max_ticks: int = MAX_TICKS) -> list[float]:
    """Ticks at a 1-2-5 step, at most ``max_ticks`` of them inside [lo, hi]."""
    if not hi > lo:
        return [lo]
    span = hi - lo
    exp = math.floor(math.log10(span / max_ticks))
    for e in (exp, exp + 1, exp + 2):
        for m in (1, 2, 5):
            step = m * 10.0**e
            first = math.ceil(lo / step)
            last = math.floor(hi / step)
            if last - first + 1 <= max_ticks:
                return [k * step for k in range(first, last + 1)]
    return [lo, hi]


def _fmt_tick(v: float) -> str:
    if v == 0:
        return "0"
    return format(float(f"{v:.6g}"), "g")


def _padded(lo: float, hi: float) -> tuple[float, float]:
    if hi == lo:
        d = abs(lo) * 0.05 or 1.0
        return lo - d, hi + d
    d = 0.05 * (hi - lo)
    return lo - d, hi + d


def line_chart(series: Sequence[Series], title: str, xlabel: str = "t", ylabel: str = "") -> str:
    xs = np.concatenate([s.x for s in series])
    ys = np.concatenate([s.y for s in series])
    x0, x1 = _padded(float(xs.min()), float(xs.max()))
    y0, y1 = _padded(float(ys.min()), float(ys.max()))
    pw = WIDTH - PAD_LEFT - PAD_RIGHT
    ph = HEIGHT - PAD_TOP - PAD_BOTTOM

    def px(x):
        return PAD_LEFT + (np.asarray(x) - x0) / (x1 - x0) * pw

    def py(y):
        return PAD_TOP + (y1 - np.asarray(y)) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="25" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{escape(title)}</text>',
        f'<rect x="{PAD_LEFT}" y="{PAD_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for v in nice_ticks(x0, x1):
        x = float(px(v))
        out.append(f'<line x1="{x:.2f}" y1="{PAD_TOP + ph}" x2="{x:.2f}" y2="{PAD_TOP + ph + 5}" stroke="black"/>')
        out.append(
            f'<text x="{x:.2f}" y="{PAD_TOP + ph + 20}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="12">{_fmt_tick(v)}</text>'
        )
    for v in nice_ticks(y0, y1):
        y = float(py(v))
        out.append(f'<line x1="{PAD_LEFT - 5}" y1="{y:.2f}" x2="{PAD_LEFT}" y2="{y:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{PAD_LEFT - 8}" y="{y + 4:.2f}" text-anchor="end" font-family="sans-serif" '
            f'font-size="12">{_fmt_tick(v)}</text>'
        )
    out.append(
        f'<text x="{PAD_LEFT + pw / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{escape(xlabel)}</text>'
    )
    if ylabel:
        out.append(
            f'<text x="18" y="{PAD_TOP + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="13" transform="rotate(-90 18 {PAD_TOP + ph / 2:.1f})">{escape(ylabel)}</text>'
        )
    for k, s in enumerate(series):
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px(s.x), py(s.y)))
        out.append(f'<polyline fill="none" stroke="{s.color}" stroke-width="1" points="{pts}"/>')
        ly = PAD_TOP + 15 + 16 * k
        lx = PAD_LEFT + pw - 110
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{s.color}" stroke-width="2"/>')
        out.append(
            f'<text x="{lx + 26}" y="{ly + 4}" font-family="sans-serif" font-size="12">{escape(s.label)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
