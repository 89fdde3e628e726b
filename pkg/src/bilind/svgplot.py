"""Minimal deterministic SVG 1.1 line charts (no plotting dependency)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

WIDTH = 760
HEIGHT = 480
MARGIN_LEFT = 72
MARGIN_RIGHT = 24
MARGIN_TOP = 40
MARGIN_BOTTOM = 56


@dataclass
class Series:
    label: str
    x: Sequence[float]
    y: Sequence[float]
    color: str = "#1f77b4"
    dasharray: str = ""  # empty = solid


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if raw <= step:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * abs(step):
        ticks.append(0.0 if abs(t) < 1e-12 else t)
        t += step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick_label(v: float) -> str:
    return f"{v:.6g}"


def line_chart(series: list[Series], title: str, xlabel: str, ylabel: str) -> str:
    """Render styled polylines with axes, ticks, and a legend as standalone SVG."""
    xs = np.concatenate([np.asarray(s.x, dtype=float) for s in series])
    ys = np.concatenate([np.asarray(s.y, dtype=float) for s in series])
    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = float(ys.min()), float(ys.max())
    if y_hi - y_lo < 1e-12:
        pad = max(1e-6, abs(y_hi) * 0.1, 0.1)
        y_lo, y_hi = y_lo - pad, y_hi + pad
    else:
        pad = 0.05 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad
    if x_hi - x_lo < 1e-12:
        x_hi = x_lo + 1.0

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(v: float) -> float:
        return MARGIN_LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w

    def py(v: float) -> float:
        return MARGIN_TOP + (y_hi - v) / (y_hi - y_lo) * plot_h

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text x="{WIDTH / 2:.0f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{title}</text>',
    ]

    # axes box
    parts.append(
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#000000" stroke-width="1"/>'
    )
    for tx in _nice_ticks(x_lo, x_hi):
        x = px(tx)
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(MARGIN_TOP + plot_h)}" '
            f'x2="{_fmt(x)}" y2="{_fmt(MARGIN_TOP + plot_h + 6)}" stroke="#000000"/>'
        )
        parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(MARGIN_TOP + plot_h + 20)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_tick_label(tx)}</text>'
        )
    for ty in _nice_ticks(y_lo, y_hi):
        y = py(ty)
        parts.append(
            f'<line x1="{_fmt(MARGIN_LEFT - 6)}" y1="{_fmt(y)}" '
            f'x2="{_fmt(MARGIN_LEFT)}" y2="{_fmt(y)}" stroke="#000000"/>'
        )
        parts.append(
            f'<text x="{_fmt(MARGIN_LEFT - 10)}" y="{_fmt(y + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_tick_label(ty)}</text>'
        )
    parts.append(
        f'<text x="{MARGIN_LEFT + plot_w / 2:.0f}" y="{HEIGHT - 14}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{xlabel}</text>'
    )
    parts.append(
        f'<text x="18" y="{MARGIN_TOP + plot_h / 2:.0f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 18 {MARGIN_TOP + plot_h / 2:.0f})">{ylabel}</text>'
    )

    for s in series:
        pts = " ".join(
            f"{_fmt(px(float(xv)))},{_fmt(py(float(yv)))}" for xv, yv in zip(s.x, s.y)
        )
        dash = f' stroke-dasharray="{s.dasharray}"' if s.dasharray else ""
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{s.color}" '
            f'stroke-width="1.5"{dash}/>'
        )

    # legend, top-right inside the frame
    lx = MARGIN_LEFT + plot_w - 220
    ly = MARGIN_TOP + 12
    parts.append(
        f'<rect x="{lx - 8}" y="{ly - 10}" width="216" height="{18 * len(series) + 8}" '
        'fill="#ffffff" fill-opacity="0.85" stroke="#888888" stroke-width="0.5"/>'
    )
    for i, s in enumerate(series):
        ypos = ly + 18 * i
        dash = f' stroke-dasharray="{s.dasharray}"' if s.dasharray else ""
        parts.append(
            f'<line x1="{lx}" y1="{ypos}" x2="{lx + 28}" y2="{ypos}" '
            f'stroke="{s.color}" stroke-width="1.5"{dash}/>'
        )
        parts.append(
            f'<text x="{lx + 34}" y="{ypos + 4}" font-family="sans-serif" '
            f'font-size="11">{s.label}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
