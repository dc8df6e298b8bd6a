"""Static SVG figures for a sweep.

The SVG is written by hand with fixed two-decimal coordinates and generic
font families, so identical inputs give identical bytes on any machine.
"""
import math
import os
from collections import defaultdict
from xml.sax.saxutils import escape

import numpy as np

from .analysis import summarize
from .records import read_records

WIDTH, HEIGHT = 640, 440
LEFT, RIGHT, TOP, BOTTOM = 80, 150, 50, 60
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]
_LIGHT = (247, 251, 255)
_DARK = (8, 48, 107)


def _f(v):
    return f"{v:.2f}"


def success_color(p):
    """Sequential colormap: every RGB channel decreases as ``p`` goes 0 -> 1."""
    p = min(max(float(p), 0.0), 1.0)
    rgb = [round(a + (b - a) * p) for a, b in zip(_LIGHT, _DARK)]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


class Canvas:
    def __init__(self, title):
        self.parts = []
        self.text(WIDTH / 2, 24, title, size=15, anchor="middle")

    def rect(self, x, y, w, h, fill, stroke="none"):
        self.parts.append(
            f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" '
            f'fill="{fill}" stroke="{stroke}"/>'
        )

    def line(self, x1, y1, x2, y2, stroke="#000000", width=1.0, dash=None):
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke="{stroke}" stroke-width="{_f(width)}"{extra}/>'
        )

    def polyline(self, pts, stroke):
        if len(pts) < 2:
            return
        coords = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="1.50"/>'
        )

    def circle(self, x, y, fill, r=3.5):
        self.parts.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}" fill="{fill}"/>')

    def text(self, x, y, s, size=11, anchor="start", rotate=False, fill="#000000"):
        tr = f' transform="rotate(-90 {_f(x)} {_f(y)})"' if rotate else ""
        self.parts.append(
            f'<text x="{_f(x)}" y="{_f(y)}" font-family="sans-serif" font-size="{size}" '
            f'text-anchor="{anchor}" fill="{fill}"{tr}>{escape(str(s))}</text>'
        )

    def banner(self, message):
        self.rect(LEFT, TOP + 8, WIDTH - LEFT - RIGHT, 26, "#fff3cd", "#c09853")
        self.text(LEFT + 8, TOP + 26, f"warning: {message}", size=12, fill="#8a6d3b")

    def render(self):
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">'
        )
        body = [head, f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>']
        return "\n".join(body + self.parts + ["</svg>", ""])


def _fmt_tick(v):
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-2:
        return f"{v:.0e}"
    return f"{v:.3g}"


class Axes:
    """Maps data to the plot box; ``log`` axes take log10 of positive data."""

    def __init__(self, canvas, xlim, ylim, xlog=False, ylog=False, xlabel="", ylabel=""):
        self.c = canvas
        self.xlog, self.ylog = xlog, ylog
        self.x0, self.x1 = self._lim(xlim, xlog)
        self.y0, self.y1 = self._lim(ylim, ylog)
        self.box = (LEFT, TOP, WIDTH - RIGHT, HEIGHT - BOTTOM)
        l, t, r, b = self.box
        canvas.rect(l, t, r - l, b - t, "none", "#000000")
        canvas.text((l + r) / 2, HEIGHT - 18, xlabel, anchor="middle")
        canvas.text(22, (t + b) / 2, ylabel, anchor="middle", rotate=True)
        self._ticks()

    @staticmethod
    def _lim(lim, log):
        lo, hi = lim
        if log:
            lo, hi = math.log10(lo), math.log10(hi)
        if hi - lo < 1e-12:
            lo, hi = lo - 0.5, hi + 0.5
        pad = 0.05 * (hi - lo)
        return lo - pad, hi + pad

    def px(self, x):
        x = math.log10(x) if self.xlog else x
        l, _, r, _ = self.box
        return l + (x - self.x0) / (self.x1 - self.x0) * (r - l)

    def py(self, y):
        y = math.log10(y) if self.ylog else y
        _, t, _, b = self.box
        return b - (y - self.y0) / (self.y1 - self.y0) * (b - t)

    def _tick_values(self, lo, hi, log):
        if log:
            return [10.0**k for k in range(math.ceil(lo), math.floor(hi) + 1)]
        step = 10 ** math.floor(math.log10((hi - lo) / 4))
        for mult in (1, 2, 5, 10):
            if (hi - lo) / (step * mult) <= 6:
                step *= mult
                break
        start = math.ceil(lo / step) * step
        vals = []
        v = start
        while v <= hi + 1e-12:
            vals.append(round(v, 12))
            v += step
        return vals

    def _ticks(self):
        l, t, r, b = self.box
        for v in self._tick_values(self.x0, self.x1, self.xlog):
            x = self.px(v)
            self.c.line(x, b, x, b + 5)
            self.c.text(x, b + 18, _fmt_tick(v), size=10, anchor="middle")
        for v in self._tick_values(self.y0, self.y1, self.ylog):
            y = self.py(v)
            self.c.line(l - 5, y, l, y)
            self.c.text(l - 8, y + 4, _fmt_tick(v), size=10, anchor="end")


def _legend(canvas, entries):
    x = WIDTH - RIGHT + 12
    for i, (label, color) in enumerate(entries):
        y = TOP + 14 + 18 * i
        canvas.circle(x, y - 4, color)
        canvas.text(x + 10, y, label, size=10)


def heatmap_svg(summary):
    """Certificate success rate over (n, sigma / sqrt(n / log n))."""
    c = Canvas("certificate success rate")
    cells = [x for x in summary["cells"]
             if x["estimator"] == "gpm" and x.get("success_rate") is not None]
    if not cells:
        c.banner("no certified gpm records")
        Axes(c, (0, 1), (0, 1), xlabel="sigma / sqrt(n/log n)", ylabel="n")
        return c.render()
    ns = sorted({x["n"] for x in cells})
    rels = sorted({round(x["sigma_rel"], 9) for x in cells})
    l, t, r, b = LEFT, TOP, WIDTH - RIGHT, HEIGHT - BOTTOM
    cw = (r - l) / len(rels)
    ch = (b - t) / len(ns)
    for cell in cells:
        i = rels.index(round(cell["sigma_rel"], 9))
        j = ns.index(cell["n"])
        p = cell["success_rate"]
        y = b - (j + 1) * ch
        c.rect(l + i * cw, y, cw, ch, success_color(p), "#ffffff")
        c.text(l + (i + 0.5) * cw, y + ch / 2 + 4, f"{p:.2f}", size=10, anchor="middle",
               fill="#000000" if p < 0.5 else "#ffffff")
    c.rect(l, t, r - l, b - t, "none", "#000000")
    for i, v in enumerate(rels):
        c.text(l + (i + 0.5) * cw, b + 18, _fmt_tick(v), size=10, anchor="middle")
    for j, n in enumerate(ns):
        c.text(l - 8, b - (j + 0.5) * ch + 4, str(n), size=10, anchor="end")
    c.text((l + r) / 2, HEIGHT - 18, "sigma / sqrt(n/log n)", anchor="middle")
    c.text(22, (t + b) / 2, "n", anchor="middle", rotate=True)
    for k in range(11):
        p = k / 10
        y = b - (k + 1) * (b - t) / 11
        c.rect(r + 20, y, 18, (b - t) / 11, success_color(p))
        c.text(r + 44, y + 12, f"{p:.1f}", size=10)
    return c.render()


def _series_plot(title, series, xlabel, ylabel, xlog, ylog, notes=None):
    c = Canvas(title)
    pts = [(x, y) for s in series.values() for x, y in s
           if (x > 0 or not xlog) and (y > 0 or not ylog)]
    if not pts:
        c.banner("no data")
        Axes(c, (1, 10) if xlog else (0, 1), (1, 10) if ylog else (0, 1),
             xlog, ylog, xlabel, ylabel)
        return c.render()
    xs, ys = zip(*pts)
    ax = Axes(c, (min(xs), max(xs)), (min(ys), max(ys)), xlog, ylog, xlabel, ylabel)
    legend = []
    for i, (label, s) in enumerate(sorted(series.items())):
        color = PALETTE[i % len(PALETTE)]
        s = sorted(p for p in s if (p[0] > 0 or not xlog) and (p[1] > 0 or not ylog))
        mapped = [(ax.px(x), ax.py(y)) for x, y in s]
        c.polyline(mapped, color)
        for x, y in mapped:
            c.circle(x, y, color)
        text = label if not notes or label not in notes else f"{label} {notes[label]}"
        legend.append((text, color))
    _legend(c, legend)
    return c.render()


def error_scaling_svg(summary):
    series = defaultdict(list)
    for cell in summary["cells"]:
        med = cell["l2_err"]["median"]
        if med is not None and cell["sigma"] > 0:
            series[f"{cell['estimator']} n={cell['n']}"].append((cell["sigma"], med))
    notes = {}
    for fit in summary.get("fits", []):
        if fit.get("l2_loglog_slope") is not None:
            notes[f"{fit['estimator']} n={fit['n']}"] = f"(slope {fit['l2_loglog_slope']:.2f})"
    return _series_plot("median l2 error vs sigma", series, "sigma", "median d2(x, z)",
                        True, True, notes)


def linf_ratio_svg(summary):
    series = defaultdict(list)
    for cell in summary["cells"]:
        med = cell["linf_ratio"]["median"]
        if med is not None:
            series[f"{cell['estimator']} rel={cell['sigma_rel']:.3g}"].append((cell["n"], med))
    return _series_plot("l_inf error / (sigma sqrt(log n / n))", series, "n",
                        "median ratio", False, False)


def contraction_hist_svg(records, bins=20):
    c = Canvas("per-trial max contraction ratio")
    vals = [r.contraction_max for r in records
            if r.estimator == "gpm" and r.contraction_max is not None]
    if not vals:
        c.banner("no contraction ratios")
        Axes(c, (0, 1), (0, 1), xlabel="max ratio", ylabel="trials")
        return c.render()
    hi = max(1.0, max(vals))
    counts, edges = np.histogram(vals, bins=bins, range=(0.0, hi))
    ax = Axes(c, (0.0, hi), (0.0, float(counts.max())), xlabel="max contraction ratio",
              ylabel="trials")
    for k, cnt in enumerate(counts):
        x0, x1 = ax.px(edges[k]), ax.px(edges[k + 1])
        y = ax.py(float(cnt))
        c.rect(x0, y, x1 - x0, ax.py(0.0) - y, "#1f77b4", "#ffffff")
    x = ax.px(0.5)
    c.line(x, TOP, x, HEIGHT - BOTTOM, "#d62728", 1.0, "4,3")
    c.text(x + 4, TOP + 14, "1/2", size=10, fill="#d62728")
    return c.render()


PLOT_FILES = {
    "success_heatmap.svg": "heatmap",
    "l2_error_scaling.svg": "l2",
    "linf_ratio.svg": "linf",
    "contraction_hist.svg": "hist",
}


def emit_plots(summary, records_path, out_dir):
    """Write the four SVG figures; returns their paths.

    ``summary`` may be None, in which case it is recomputed from the CSV.
    """
    records = read_records(records_path)
    if summary is None:
        summary = summarize(records)
    os.makedirs(out_dir, exist_ok=True)
    docs = {
        "success_heatmap.svg": heatmap_svg(summary),
        "l2_error_scaling.svg": error_scaling_svg(summary),
        "linf_ratio.svg": linf_ratio_svg(summary),
        "contraction_hist.svg": contraction_hist_svg(records),
    }
    paths = []
    for name, doc in docs.items():
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(doc)
        paths.append(path)
    return paths
