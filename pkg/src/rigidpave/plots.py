"""Minimal SVG line and bar charts.

Output is plain text with fixed number formatting so identical data gives
identical files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

W, H = 480, 320
ML, MR, MT, MB = 64, 16, 32, 48
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _f(x: float) -> str:
    return f"{x:.2f}"


def _scale(lo, hi, a, b):
    if hi == lo:
        hi = lo + 1.0
    return lambda v: a + (v - lo) / (hi - lo) * (b - a)


def _frame(title, xlabel, ylabel, body, ylo, yhi):
    sy = _scale(ylo, yhi, H - MB, MT)
    ticks = []
    for i in range(5):
        v = ylo + (yhi - ylo) * i / 4
        ticks.append(
            f'<line x1="{ML - 4}" y1="{_f(sy(v))}" x2="{ML}" y2="{_f(sy(v))}" stroke="black"/>'
            f'<text x="{ML - 6}" y="{_f(sy(v) + 4)}" font-size="10" text-anchor="end">{v:.4g}</text>'
        )
    return "\n".join(
        [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
            f'<rect width="{W}" height="{H}" fill="white"/>',
            f'<text x="{W / 2}" y="18" font-size="13" text-anchor="middle">{escape(title)}</text>',
            f'<line x1="{ML}" y1="{H - MB}" x2="{W - MR}" y2="{H - MB}" stroke="black"/>',
            f'<line x1="{ML}" y1="{MT}" x2="{ML}" y2="{H - MB}" stroke="black"/>',
            *ticks,
            f'<text x="{(ML + W - MR) / 2}" y="{H - 10}" font-size="11" text-anchor="middle">{escape(xlabel)}</text>',
            f'<text x="14" y="{(MT + H - MB) / 2}" font-size="11" text-anchor="middle" '
            f'transform="rotate(-90 14 {(MT + H - MB) / 2})">{escape(ylabel)}</text>',
            *body,
            "</svg>",
            "",
        ]
    )


def line_chart(path, title, xlabel, ylabel, x: Sequence[float], series: dict) -> None:
    """One polyline with markers per named series, sharing ``x``."""
    ys = [v for s in series.values() for v in s]
    ylo, yhi = min(ys + [0.0]), max(ys + [0.0])
    sx = _scale(min(x), max(x), ML + 8, W - MR - 8)
    sy = _scale(ylo, yhi, H - MB, MT)
    body = []
    for i, (name, vals) in enumerate(series.items()):
        c = COLORS[i % len(COLORS)]
        pts = " ".join(f"{_f(sx(a))},{_f(sy(b))}" for a, b in zip(x, vals))
        body.append(f'<polyline points="{pts}" fill="none" stroke="{c}" stroke-width="1.5"/>')
        body += [f'<circle cx="{_f(sx(a))}" cy="{_f(sy(b))}" r="3" fill="{c}"/>' for a, b in zip(x, vals)]
        body.append(
            f'<text x="{W - MR - 4}" y="{MT + 14 * (i + 1)}" font-size="10" text-anchor="end" fill="{c}">{escape(name)}</text>'
        )
    for a in x:
        body.append(f'<text x="{_f(sx(a))}" y="{H - MB + 14}" font-size="10" text-anchor="middle">{a:.4g}</text>')
    Path(path).write_text(_frame(title, xlabel, ylabel, body, ylo, yhi))


def bar_chart(path, title, ylabel, groups: Sequence[str], series: dict) -> None:
    """Grouped bars: one group per label, one bar per named series."""
    ys = [v for s in series.values() for v in s]
    ylo, yhi = min(ys + [0.0]), max(ys + [0.0])
    sy = _scale(ylo, yhi, H - MB, MT)
    slot = (W - ML - MR) / max(len(groups), 1)
    bw = slot * 0.8 / max(len(series), 1)
    body = []
    for i, (name, vals) in enumerate(series.items()):
        c = COLORS[i % len(COLORS)]
        for g, v in enumerate(vals):
            x0 = ML + g * slot + slot * 0.1 + i * bw
            top, bot = sorted((sy(v), sy(0.0)))
            body.append(f'<rect x="{_f(x0)}" y="{_f(top)}" width="{_f(bw)}" height="{_f(bot - top)}" fill="{c}"/>')
        body.append(
            f'<text x="{W - MR - 4}" y="{MT + 14 * (i + 1)}" font-size="10" text-anchor="end" fill="{c}">{escape(name)}</text>'
        )
    for g, label in enumerate(groups):
        body.append(
            f'<text x="{_f(ML + (g + 0.5) * slot)}" y="{H - MB + 14}" font-size="9" text-anchor="middle">{escape(label)}</text>'
        )
    Path(path).write_text(_frame(title, "", ylabel, body, ylo, yhi))


def scatter_chart(path, title, xlabel, ylabel, x, y) -> None:
    """Predicted-versus-target scatter with the 1:1 line."""
    lo, hi = min(min(x), min(y)), max(max(x), max(y))
    sx = _scale(lo, hi, ML + 8, W - MR - 8)
    sy = _scale(lo, hi, H - MB, MT)
    body = [f'<line x1="{_f(sx(lo))}" y1="{_f(sy(lo))}" x2="{_f(sx(hi))}" y2="{_f(sy(hi))}" stroke="gray"/>']
    body += [f'<circle cx="{_f(sx(a))}" cy="{_f(sy(b))}" r="1.5" fill="{COLORS[0]}"/>' for a, b in zip(x, y)]
    Path(path).write_text(_frame(title, xlabel, ylabel, body, lo, hi))
