"""CSV and SVG emission for decay curves and suite tables."""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

from .errors import ComputationError, ConfigError
from .vanishing import DecayCurve

CSV_HEADER = ("parameter", "value")
# Zero (or tiny) values are drawn at SVG_FLOOR times the largest value, or at
# SVG_FLOOR itself when the whole curve vanishes.
SVG_FLOOR = 1e-12


def fmt(x: float) -> str:
    """17 significant digits, enough to round-trip a double."""
    return format(float(x), ".17g")


def rows_csv(rows, header=CSV_HEADER) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for key, value in rows:
        w.writerow((fmt(key) if not isinstance(key, str) else key, fmt(value)))
    return buf.getvalue()


def curve_csv(curve: DecayCurve) -> str:
    return rows_csv(curve.points)


def read_curve_csv(path_or_text, axis: str = "small_scale", descriptor: str = "read from CSV") -> DecayCurve:
    text = Path(path_or_text).read_text() if isinstance(path_or_text, Path) else str(path_or_text)
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != CSV_HEADER:
        raise ConfigError("CSV header must be exactly 'parameter,value'")
    pts = [(float(a), float(b)) for a, b in reader]
    return DecayCurve(axis, pts, descriptor)


def curve_svg(curve: DecayCurve, title: str = "") -> str:
    """Single-polyline log-log plot."""
    xs = [p for p, _ in curve.points]
    if min(xs) <= 0:
        raise ConfigError("log-log plot needs positive parameters")
    vals = [v for _, v in curve.points]
    peak = max(vals)
    floor = SVG_FLOOR * peak if peak > 0 else SVG_FLOOR
    ys = [max(v, floor) for v in vals]
    lx = [math.log10(x) for x in xs]
    ly = [math.log10(y) for y in ys]
    W, H, m = 480, 360, 50

    def span(a):
        lo, hi = min(a), max(a)
        return (lo - 0.5, hi + 0.5) if hi - lo < 1e-12 else (lo, hi)

    (x0, x1), (y0, y1) = span(lx), span(ly)
    px = [m + (v - x0) / (x1 - x0) * (W - 2 * m) for v in lx]
    py = [H - m - (v - y0) / (y1 - y0) * (H - 2 * m) for v in ly]
    pts = " ".join(f"{a:.3f},{b:.3f}" for a, b in zip(px, py))
    xlabel = {"small_scale": "cube edge a", "large_scale": "cube edge a",
              "shift_distance": "shift |z|"}[curve.axis]
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<title>{_esc(title or curve.axis)}</title>',
        f'<line x1="{m}" y1="{H - m}" x2="{W - m}" y2="{H - m}" stroke="black"/>',
        f'<line x1="{m}" y1="{m}" x2="{m}" y2="{H - m}" stroke="black"/>',
        f'<text x="{W / 2}" y="{H - 12}" text-anchor="middle">{xlabel} (log10 {x0:.3g} to {x1:.3g})</text>',
        f'<text x="14" y="{H / 2}" text-anchor="middle" transform="rotate(-90 14 {H / 2})">'
        f'sup oscillation (log10 {y0:.3g} to {y1:.3g}, floor {floor:.3g})</text>',
        f'<polyline fill="none" stroke="black" points="{pts}"/>',
        "</svg>",
        "",
    ])


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def write_text(text: str, path) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise ComputationError(f"cannot write {path}: {exc}") from exc


def write_curve(curve: DecayCurve, path, format: str = "csv") -> None:
    if format == "csv":
        write_text(curve_csv(curve), path)
    elif format == "svg":
        write_text(curve_svg(curve), path)
    else:
        raise ConfigError("format must be csv or svg")
