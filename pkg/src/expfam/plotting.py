"""Minimal SVG and tab-separated companions for results.csv.

One figure per (distribution, parameter): relative bias and MSE against n on
a log axis, one polyline per method.
"""

from __future__ import annotations

import math
import re
from collections import defaultdict
from pathlib import Path
from xml.sax.saxutils import escape

__all__ = ["group_results", "render_svg", "render_dat", "write_plots"]

_COLORS = {
    "closed_form": "#1f77b4",
    "map_numeric": "#d62728",
    "ml_numeric": "#2ca02c",
}
_FALLBACK = ("#9467bd", "#8c564b", "#e377c2", "#7f7f7f")
_METRICS = (("rel_bias", "mc_se_bias", "relative bias"), ("mse", "mc_se_mse", "MSE"))

PANEL_W, PANEL_H = 340, 240
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 60, 15, 30, 40


def group_results(rows: list[dict]) -> dict[tuple[str, str], dict[str, list[dict]]]:
    """{(distribution, parameter): {method: rows sorted by n}}."""
    groups: dict = defaultdict(lambda: defaultdict(list))
    for r in rows:
        groups[(r["distribution"], r["parameter"])][r["method"]].append(r)
    return {
        key: {m: sorted(series, key=lambda r: r["n"]) for m, series in sorted(methods.items())}
        for key, methods in sorted(groups.items())
    }


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick(v: float) -> str:
    return f"{v:.3g}"


def _panel(x0: float, series: dict[str, list[dict]], metric: str, title: str) -> list[str]:
    ns = [r["n"] for rows in series.values() for r in rows]
    vals = [r[metric] for rows in series.values() for r in rows if math.isfinite(r[metric])]
    lo_n, hi_n = math.log(min(ns)), math.log(max(ns))
    if hi_n == lo_n:
        lo_n, hi_n = lo_n - 0.5, hi_n + 0.5
    top = max(vals) * 1.05 if vals and max(vals) > 0 else 1.0
    w = PANEL_W - MARGIN_L - MARGIN_R
    h = PANEL_H - MARGIN_T - MARGIN_B
    left, bottom = x0 + MARGIN_L, MARGIN_T + h

    def px(n):
        return left + (math.log(n) - lo_n) / (hi_n - lo_n) * w

    def py(v):
        return bottom - v / top * h

    out = [
        f'<text x="{_fmt(left + w / 2)}" y="18" text-anchor="middle">{escape(title)}</text>',
        f'<line x1="{_fmt(left)}" y1="{_fmt(bottom)}" x2="{_fmt(left + w)}" y2="{_fmt(bottom)}" stroke="black"/>',
        f'<line x1="{_fmt(left)}" y1="{_fmt(bottom)}" x2="{_fmt(left)}" y2="{MARGIN_T}" stroke="black"/>',
    ]
    for n in sorted(set(ns)):
        out.append(
            f'<text x="{_fmt(px(n))}" y="{_fmt(bottom + 15)}" text-anchor="middle" font-size="10">{n}</text>'
        )
    for frac in (0.0, 0.5, 1.0):
        v = top * frac
        out.append(
            f'<text x="{_fmt(left - 5)}" y="{_fmt(py(v) + 3)}" text-anchor="end" font-size="10">{_tick(v)}</text>'
        )
    out.append(
        f'<text x="{_fmt(left + w / 2)}" y="{_fmt(bottom + 32)}" text-anchor="middle" font-size="11">n (log scale)</text>'
    )
    for i, (method, rows) in enumerate(series.items()):
        color = _COLORS.get(method, _FALLBACK[i % len(_FALLBACK)])
        pts = [(px(r["n"]), py(r[metric])) for r in rows if math.isfinite(r[metric])]
        if len(pts) > 1:
            coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
            out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for x, y in pts:
            out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="2.5" fill="{color}"/>')
    return out


def render_svg(distribution: str, parameter: str, series: dict[str, list[dict]]) -> str:
    width = 2 * PANEL_W
    legend_h = 18 * len(series) + 10
    height = PANEL_H + legend_h
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="12">',
        f"<title>{escape(distribution)} - {escape(parameter)}</title>",
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for k, (metric, _, label) in enumerate(_METRICS):
        parts += _panel(k * PANEL_W, series, metric, f"{distribution}, {parameter}: {label}")
    for i, method in enumerate(series):
        color = _COLORS.get(method, _FALLBACK[i % len(_FALLBACK)])
        y = PANEL_H + 10 + 18 * i
        parts.append(f'<line x1="{MARGIN_L}" y1="{y}" x2="{MARGIN_L + 25}" y2="{y}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{MARGIN_L + 32}" y="{y + 4}">{escape(method)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_dat(distribution: str, parameter: str, series: dict[str, list[dict]]) -> str:
    """gnuplot-style blocks (blank-line separated), columns n, value, se."""
    lines = [f"# {distribution} {parameter}"]
    for method, rows in series.items():
        for metric, se_key, _ in _METRICS:
            lines.append("")
            lines.append(f"# series: {method} {metric}")
            lines.append("n\tvalue\tse")
            for r in rows:
                lines.append(f"{r['n']}\t{r[metric]:.17g}\t{r[se_key]:.17g}")
    return "\n".join(lines) + "\n"


def _stem(distribution: str, parameter: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", f"{distribution}_{parameter}")


def write_plots(rows: list[dict], out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for (dist, param), series in group_results(rows).items():
        stem = _stem(dist, param)
        svg = out_dir / f"{stem}.svg"
        dat = out_dir / f"{stem}.dat"
        svg.write_text(render_svg(dist, param, series))
        dat.write_text(render_dat(dist, param, series))
        written += [svg, dat]
    return written
