"""Tiny deterministic SVG line plots (axes, ticks, polylines, legend)."""

import math
from xml.sax.saxutils import escape

_COLOURS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#000000"]
W, H = 640, 480
ML, MR, MT, MB = 70, 150, 40, 55


def _ticks(lo, hi, n=6):
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    out = []
    k = 0
    while start + k * step <= hi + 1e-9 * span:
        out.append(start + k * step)
        k += 1
    return out


def line_plot(series, xlabel, ylabel, title, xlim=None, ylim=None):
    """Render ``series`` = [(label, xs, ys), ...] to an SVG string."""
    xs_all = [x for _, xs, ys in series for x, y in zip(xs, ys) if math.isfinite(y)]
    ys_all = [y for _, xs, ys in series for y in ys if math.isfinite(y)]
    x0, x1 = xlim or (min(xs_all), max(xs_all))
    y0, y1 = ylim or (min(0.0, min(ys_all)), max(ys_all))
    if y1 <= y0:
        y1 = y0 + 1.0
    pw, ph = W - ML - MR, H - MT - MB

    def px(x):
        return ML + (x - x0) / (x1 - x0) * pw

    def py(y):
        return MT + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<rect x="{ML}" y="{MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        X = px(t)
        out.append(f'<line x1="{X:.2f}" y1="{MT + ph}" x2="{X:.2f}" y2="{MT + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{MT + ph + 19}" text-anchor="middle" font-size="11">{t:g}</text>')
    for t in _ticks(y0, y1):
        Y = py(t)
        out.append(f'<line x1="{ML - 5}" y1="{Y:.2f}" x2="{ML}" y2="{Y:.2f}" stroke="black"/>')
        out.append(f'<text x="{ML - 8}" y="{Y + 4:.2f}" text-anchor="end" font-size="11">{t:g}</text>')
    out.append(f'<text x="{ML + pw / 2:.1f}" y="{H - 12}" text-anchor="middle" font-size="13">{escape(xlabel)}</text>')
    out.append(
        f'<text x="18" y="{MT + ph / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 18 {MT + ph / 2:.1f})">{escape(ylabel)}</text>'
    )
    out.append(f'<clipPath id="plot"><rect x="{ML}" y="{MT}" width="{pw}" height="{ph}"/></clipPath>')
    for i, (label, xs, ys) in enumerate(series):
        colour = _COLOURS[i % len(_COLOURS)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys) if math.isfinite(y))
        dash = ' stroke-dasharray="6,4"' if label.endswith("inf") else ""
        out.append(
            f'<polyline clip-path="url(#plot)" fill="none" stroke="{colour}" stroke-width="1.6"{dash} points="{pts}"/>'
        )
        ly = MT + 14 + 18 * i
        out.append(f'<line x1="{W - MR + 12}" y1="{ly}" x2="{W - MR + 36}" y2="{ly}" stroke="{colour}" stroke-width="2"{dash}/>')
        out.append(f'<text x="{W - MR + 42}" y="{ly + 4}" font-size="12">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
