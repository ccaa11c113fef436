"""Region diagrams over the unit strategy square, emitted as bare SVG.

Two figures: the equilibrium geometry (shaded zero-gain rectangles plus the
mimic diagonal) and the positive-gain region whose curved edges are the two
indifference boundaries. Paths are emitted directly; there is no plotting
dependency and output is byte-deterministic.
"""

from __future__ import annotations

import math

import numpy as np

from . import game
from .bargaining import GameSpec

_SIZE = 420.0
_MARGIN = 60.0


def _px(x: float) -> float:
    return _MARGIN + x * _SIZE


def _py(y: float) -> float:
    return _MARGIN + (1.0 - y) * _SIZE


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick_label(v: float) -> str:
    return f"{v:.4g}"


def _header(title: str) -> list[str]:
    w = _SIZE + 2 * _MARGIN
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{w:.0f}" '
        f'viewBox="0 0 {w:.0f} {w:.0f}">',
        f'<rect width="{w:.0f}" height="{w:.0f}" fill="white"/>',
        f'<text x="{_px(0.5)}" y="{_MARGIN / 2:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
    ]


def _frame(xlabel: str, ylabel: str) -> list[str]:
    parts = [
        f'<rect x="{_fmt(_px(0))}" y="{_fmt(_py(1))}" width="{_fmt(_SIZE)}" '
        f'height="{_fmt(_SIZE)}" fill="none" stroke="black" stroke-width="1.5"/>',
        f'<text x="{_px(0.5)}" y="{_py(0) + 45:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{xlabel}</text>',
        f'<text x="{_px(0) - 45:.2f}" y="{_py(0.5)}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 {_fmt(_px(0) - 45)} {_fmt(_py(0.5))})">{ylabel}</text>',
    ]
    return parts


def _ticks(values_x, values_y) -> list[str]:
    parts = []
    for v in sorted(set(values_x)):
        x = _px(v)
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(_py(0))}" x2="{_fmt(x)}" y2="{_fmt(_py(0) + 6)}" '
            f'stroke="black"/>'
        )
        parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(_py(0) + 20)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_tick_label(v)}</text>'
        )
    for v in sorted(set(values_y)):
        y = _py(v)
        parts.append(
            f'<line x1="{_fmt(_px(0) - 6)}" y1="{_fmt(y)}" x2="{_fmt(_px(0))}" y2="{_fmt(y)}" '
            f'stroke="black"/>'
        )
        parts.append(
            f'<text x="{_fmt(_px(0) - 9)}" y="{_fmt(y + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_tick_label(v)}</text>'
        )
    return parts


def _shaded_rect(x0: float, x1: float, y0: float, y1: float) -> str:
    return (
        f'<rect x="{_fmt(_px(x0))}" y="{_fmt(_py(y1))}" width="{_fmt((x1 - x0) * _SIZE)}" '
        f'height="{_fmt((y1 - y0) * _SIZE)}" fill="#9ecae1" fill-opacity="0.65" stroke="none"/>'
    )


def nash_regions_svg(report: game.EquilibriumReport, gamma1: float, gamma2: float) -> str:
    """Equilibrium geometry: zero-gain rectangles plus the mimic diagonal."""
    parts = _header("Nash equilibria in the submitted-aversion square")
    if report.every_pair:
        parts.append(_shaded_rect(0.0, 1.0, 0.0, 1.0))
        parts.extend(_frame("zeta1 (insurer submission)", "zeta2 (reinsurer submission)"))
        parts.extend(_ticks([0.0, 1.0], [0.0, 1.0]))
        parts.append(
            f'<text x="{_px(0.5)}" y="{_py(0.5)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13">every pair; zero gains</text>'
        )
        parts.append("</svg>")
        return "\n".join(parts) + "\n"

    bar1, bar2 = report.gamma_bar_1, report.gamma_bar_2
    x_bands = [(0.0, gamma2)]
    if math.isfinite(bar1) and bar1 < 1.0:
        x_bands.append((bar1, 1.0))
    y_bands = [(gamma1, 1.0)]
    if math.isfinite(bar2) and bar2 > 0.0:
        y_bands.append((0.0, bar2))
    for x0, x1 in x_bands:
        for y0, y1 in y_bands:
            parts.append(_shaded_rect(x0, x1, y0, y1))
    if math.isfinite(bar1):
        parts.append(
            f'<line x1="{_fmt(_px(bar1))}" y1="{_fmt(_py(0))}" x2="{_fmt(_px(bar1))}" '
            f'y2="{_fmt(_py(1))}" stroke="#555555" stroke-dasharray="5,4"/>'
        )
    lo, hi = report.diagonal
    parts.append(
        f'<line x1="{_fmt(_px(lo))}" y1="{_fmt(_py(lo))}" x2="{_fmt(_px(hi))}" '
        f'y2="{_fmt(_py(hi))}" stroke="#08519c" stroke-width="3"/>'
    )
    parts.extend(_frame("zeta1 (insurer submission)", "zeta2 (reinsurer submission)"))
    xt = [0.0, gamma2, gamma1, 1.0] + ([bar1] if math.isfinite(bar1) else [])
    yt = [0.0, gamma2, gamma1, 1.0] + ([bar2] if math.isfinite(bar2) else [])
    parts.extend(_ticks(xt, yt))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def wg_region_svg(spec: GameSpec, samples: int = 48) -> str:
    """Shaded region where at least one agent's gain is non-zero."""
    parts = _header("Region of non-zero welfare gains")
    if spec.gamma1 > spec.gamma2:
        pts = _wg_polygon(spec, samples)
        path = " ".join(f"{_fmt(_px(x))},{_fmt(_py(y))}" for x, y in pts)
        parts.append(f'<polygon points="{path}" fill="#a1d99b" fill-opacity="0.7" stroke="#31a354"/>')
        ticks = [0.0, spec.gamma2, spec.gamma1, 1.0]
        parts.extend(_ticks(ticks, ticks))
    else:
        parts.append(
            f'<text x="{_px(0.5)}" y="{_py(0.5)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13">no trade improves on the status quo</text>'
        )
        parts.extend(_ticks([0.0, 1.0], [0.0, 1.0]))
    parts.extend(_frame("zeta1 (insurer submission)", "zeta2 (reinsurer submission)"))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _wg_polygon(spec: GameSpec, samples: int) -> list[tuple[float, float]]:
    bar1 = game.gamma_bar_1(spec)
    bar2 = game.gamma_bar_2(spec)
    top_end = min(bar1, 1.0)
    pts: list[tuple[float, float]] = [(spec.gamma2, spec.gamma2), (spec.gamma1, spec.gamma1)]
    for z1 in np.linspace(spec.gamma1, top_end, samples)[1:]:
        pts.append((float(z1), game.f2(spec, float(z1))))
    if bar1 > 1.0:
        bottom = max(bar2, 0.0)
        pts.append((1.0, bottom))
    else:
        bottom = 0.0
    if spec.gamma2 > bottom + 1e-12:
        for z2 in np.linspace(bottom, spec.gamma2, samples)[:-1][::-1]:
            pts.append((game.f1(spec, float(z2)), float(z2)))
    return pts
