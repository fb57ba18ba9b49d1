"""Deterministic CSV / JSON / SVG emission.

Floats are rendered with 17 significant digits so files round-trip exactly
and repeated runs are byte-identical; the SVG writers are self-contained
(fixed canvas, no external plotting dependency).
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path


def fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_json(path, payload) -> None:
    Path(path).write_text(json_text(payload), encoding="utf-8")


def json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------- SVG ----

_WIDTH, _HEIGHT = 860, 620
_MARGIN = 70
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_REGION_FILL = {"I": "#c6dbef", "II": "#fcbba1", "III": "#c7e9c0",
                "on_lower": "#6a51a3", "on_upper": "#6a51a3",
                "beta0": "#d9d9d9", "beta1": "#d9d9d9"}


def _scale(lo, hi, pixels_lo, pixels_hi):
    span = hi - lo if hi > lo else 1.0

    def to_px(v):
        return pixels_lo + (v - lo) / span * (pixels_hi - pixels_lo)

    return to_px


def _axes(parts, x_lo, x_hi, y_lo, y_hi, x_label, y_label, title):
    sx = _scale(x_lo, x_hi, _MARGIN, _WIDTH - _MARGIN)
    sy = _scale(y_lo, y_hi, _HEIGHT - _MARGIN, _MARGIN)
    parts.append(f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>')
    parts.append(f'<text x="{_WIDTH // 2}" y="28" text-anchor="middle" '
                 f'font-size="16" font-family="sans-serif">{title}</text>')
    parts.append(f'<line x1="{_MARGIN}" y1="{_HEIGHT - _MARGIN}" x2="{_WIDTH - _MARGIN}" '
                 f'y2="{_HEIGHT - _MARGIN}" stroke="black"/>')
    parts.append(f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" '
                 f'y2="{_HEIGHT - _MARGIN}" stroke="black"/>')
    for i in range(6):
        xv = x_lo + (x_hi - x_lo) * i / 5
        yv = y_lo + (y_hi - y_lo) * i / 5
        parts.append(f'<text x="{sx(xv):.2f}" y="{_HEIGHT - _MARGIN + 22}" '
                     f'text-anchor="middle" font-size="11" '
                     f'font-family="sans-serif">{xv:.3g}</text>')
        parts.append(f'<text x="{_MARGIN - 8}" y="{sy(yv):.2f}" text-anchor="end" '
                     f'font-size="11" font-family="sans-serif">{yv:.3g}</text>')
        parts.append(f'<line x1="{sx(xv):.2f}" y1="{_HEIGHT - _MARGIN}" x2="{sx(xv):.2f}" '
                     f'y2="{_HEIGHT - _MARGIN + 5}" stroke="black"/>')
        parts.append(f'<line x1="{_MARGIN - 5}" y1="{sy(yv):.2f}" x2="{_MARGIN}" '
                     f'y2="{sy(yv):.2f}" stroke="black"/>')
    parts.append(f'<text x="{_WIDTH // 2}" y="{_HEIGHT - 18}" text-anchor="middle" '
                 f'font-size="13" font-family="sans-serif">{x_label}</text>')
    parts.append(f'<text x="20" y="{_HEIGHT // 2}" text-anchor="middle" font-size="13" '
                 f'font-family="sans-serif" '
                 f'transform="rotate(-90 20 {_HEIGHT // 2})">{y_label}</text>')
    return sx, sy


def svg_line_chart(path, series, *, title, x_label, y_label,
                   x_range=None, y_range=None) -> None:
    """Standalone SVG with one polyline per (label, xs, ys) series."""
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    x_lo, x_hi = (min(xs_all), max(xs_all)) if x_range is None else x_range
    y_lo, y_hi = (min(ys_all), max(ys_all)) if y_range is None else y_range
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
             f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">']
    sx, sy = _axes(parts, x_lo, x_hi, y_lo, y_hi, x_label, y_label, title)
    for i, (label, xs, ys) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     f'stroke-width="1.8"/>')
        parts.append(f'<text x="{_WIDTH - _MARGIN - 8}" y="{_MARGIN + 18 + 16 * i}" '
                     f'text-anchor="end" font-size="12" font-family="sans-serif" '
                     f'fill="{color}">{label}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")


def svg_atlas_chart(path, cells, curves, *, title) -> None:
    """Region-shaded atlas: one rect per cell, curve polylines on top."""
    betas = sorted({c.point.beta for c in cells})
    eccs = sorted({c.point.ecc for c in cells})
    db = betas[1] - betas[0] if len(betas) > 1 else 0.01
    de = eccs[1] - eccs[0] if len(eccs) > 1 else 0.01
    x_lo, x_hi = 0.0, 1.0
    y_lo, y_hi = 0.0, max(eccs) + de
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
             f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">']
    sx, sy = _axes(parts, x_lo, x_hi, y_lo, y_hi, "beta", "eccentricity", title)
    w = abs(sx(db) - sx(0.0)) + 0.5
    h = abs(sy(de) - sy(0.0)) + 0.5
    for c in cells:
        fill = _REGION_FILL.get(c.region, "#ffffff")
        x = sx(c.point.beta - db / 2)
        y = sy(c.point.ecc + de / 2)
        parts.append(f'<rect x="{x:.2f}" y="{y:.2f}" width="{w:.2f}" height="{h:.2f}" '
                     f'fill="{fill}" stroke="none"/>')
    for curve, color in ((curves.lower, "#08306b"), (curves.upper, "#67000d")):
        pts = " ".join(f"{sx(b):.2f},{sy(e):.2f}" for e, b in zip(curve.eccs, curve.betas))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     f'stroke-width="2.2"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")


def check_finite(rows) -> None:
    for row in rows:
        for v in row:
            if isinstance(v, float) and not math.isfinite(v):
                raise ValueError(f"non-finite value {v!r} in output row {row!r}")
