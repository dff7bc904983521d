"""Minimal deterministic SVG line plots.

No plotting library: artifacts must be byte-identical across runs and
platforms, so the file is assembled from fixed-format strings only.
Coordinates are written with two decimals, tick labels with %.4g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidParameterError

WIDTH = 640
HEIGHT = 440
MARGIN_LEFT = 70
MARGIN_RIGHT = 24
MARGIN_TOP = 28
MARGIN_BOTTOM = 52
N_TICKS = 5

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass(frozen=True)
class Series:
    label: str
    x: tuple[float, ...]
    y: tuple[float, ...]

    @staticmethod
    def make(label: str, x, y) -> "Series":
        x = tuple(float(v) for v in np.asarray(x, dtype=float).ravel())
        y = tuple(float(v) for v in np.asarray(y, dtype=float).ravel())
        return Series(label=label, x=x, y=y)


@dataclass(frozen=True)
class AxesConfig:
    title: str = ""
    x_label: str = ""
    y_label: str = ""
    log_x: bool = False
    log_y: bool = False


def _validate(series: Sequence[Series], axes: AxesConfig) -> None:
    if not series:
        raise InvalidParameterError("need at least one series")
    for s in series:
        if len(s.x) == 0:
            raise InvalidParameterError(f"series {s.label!r} is empty")
        if len(s.x) != len(s.y):
            raise InvalidParameterError(f"series {s.label!r} has mismatched x/y lengths")
        if not all(math.isfinite(v) for v in s.x + s.y):
            raise InvalidParameterError(f"series {s.label!r} contains non-finite values")
        if axes.log_x and min(s.x) <= 0:
            raise InvalidParameterError(f"log x-axis requires positive x values ({s.label!r})")
        if axes.log_y and min(s.y) <= 0:
            raise InvalidParameterError(f"log y-axis requires positive y values ({s.label!r})")


def _range(values: list[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if hi == lo:
        return lo - 0.5, hi + 0.5
    pad = 0.04 * (hi - lo)
    return lo - pad, hi + pad


def _fmt_tick(t: float, log: bool) -> str:
    v = 10.0**t if log else t
    return f"{v:.4g}"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_svg_plot(series: Sequence[Series], axes: AxesConfig, path) -> None:
    """Write a standalone SVG with one polyline per series, ticks and legend."""
    _validate(series, axes)
    tx = [[math.log10(v) for v in s.x] if axes.log_x else list(s.x) for s in series]
    ty = [[math.log10(v) for v in s.y] if axes.log_y else list(s.y) for s in series]
    x_lo, x_hi = _range([v for col in tx for v in col])
    y_lo, y_hi = _range([v for col in ty for v in col])

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(v: float) -> float:
        return MARGIN_LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w

    def py(v: float) -> float:
        return HEIGHT - MARGIN_BOTTOM - (v - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#000000" stroke-width="1"/>',
    ]

    for i in range(N_TICKS):
        f = i / (N_TICKS - 1)
        xt = x_lo + f * (x_hi - x_lo)
        yt = y_lo + f * (y_hi - y_lo)
        xp, yp = px(xt), py(yt)
        out.append(
            f'<line x1="{xp:.2f}" y1="{HEIGHT - MARGIN_BOTTOM}" x2="{xp:.2f}" '
            f'y2="{HEIGHT - MARGIN_BOTTOM + 5}" stroke="#000000" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{xp:.2f}" y="{HEIGHT - MARGIN_BOTTOM + 18}" font-family="monospace" '
            f'font-size="11" text-anchor="middle">{_escape(_fmt_tick(xt, axes.log_x))}</text>'
        )
        out.append(
            f'<line x1="{MARGIN_LEFT - 5}" y1="{yp:.2f}" x2="{MARGIN_LEFT}" y2="{yp:.2f}" '
            'stroke="#000000" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{MARGIN_LEFT - 8}" y="{yp + 4:.2f}" font-family="monospace" '
            f'font-size="11" text-anchor="end">{_escape(_fmt_tick(yt, axes.log_y))}</text>'
        )

    if axes.title:
        out.append(
            f'<text x="{WIDTH / 2:.2f}" y="18" font-family="monospace" font-size="13" '
            f'text-anchor="middle">{_escape(axes.title)}</text>'
        )
    if axes.x_label:
        out.append(
            f'<text x="{MARGIN_LEFT + plot_w / 2:.2f}" y="{HEIGHT - 10}" '
            f'font-family="monospace" font-size="12" text-anchor="middle">'
            f"{_escape(axes.x_label)}</text>"
        )
    if axes.y_label:
        yc = MARGIN_TOP + plot_h / 2
        out.append(
            f'<text x="16" y="{yc:.2f}" font-family="monospace" font-size="12" '
            f'text-anchor="middle" transform="rotate(-90 16 {yc:.2f})">'
            f"{_escape(axes.y_label)}</text>"
        )

    for idx, s in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        points = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(tx[idx], ty[idx]))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>')

    legend_x = MARGIN_LEFT + plot_w - 150
    for idx, s in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        ly = MARGIN_TOP + 14 + 16 * idx
        out.append(
            f'<line x1="{legend_x}" y1="{ly}" x2="{legend_x + 18}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{legend_x + 24}" y="{ly + 4}" font-family="monospace" '
            f'font-size="11">{_escape(s.label)}</text>'
        )

    out.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
