"""Static SVG for the shape triangle and log-log spectra."""
import math

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def _head(w, h):
    return [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
            f'viewBox="0 0 {w} {h}">', '<rect width="100%" height="100%" fill="white"/>']


def triangle_svg(points=(), traces=(), size=420):
    """Shape triangle |chi| < xi < 1 with optional points and traces.

    ``points`` are (chi, xi, label) tuples, ``traces`` sequences of (chi, xi).
    """
    pad = 40
    w, h = size, size // 2 + 2 * pad
    sx = (w - 2 * pad) / 2.0
    sy = h - 2 * pad

    def xy(chi, xi):
        return pad + (chi + 1.0) * sx, h - pad - xi * sy

    out = _head(w, h)
    tri = " ".join("%.2f,%.2f" % xy(c, x) for c, x in ((0, 0), (-1, 1), (1, 1)))
    out.append(f'<polygon class="triangle" points="{tri}" fill="none" stroke="black"/>')
    ax0, ay0 = xy(0, 0)
    ax1, ay1 = xy(0, 1)
    out.append(f'<line x1="{ax0:.2f}" y1="{ay0:.2f}" x2="{ax1:.2f}" y2="{ay1:.2f}" '
               'stroke="#bbbbbb" stroke-dasharray="3,3"/>')
    out.append(f'<text x="{w / 2:.0f}" y="{h - 8}" text-anchor="middle" font-size="12">chi</text>')
    out.append(f'<text x="12" y="{h / 2:.0f}" font-size="12">xi</text>')
    for i, tr in enumerate(traces):
        pts = " ".join("%.2f,%.2f" % xy(c, x) for c, x in tr)
        out.append(f'<polyline class="trace" points="{pts}" fill="none" '
                   f'stroke="{_COLORS[i % len(_COLORS)]}" stroke-width="1.5"/>')
    for chi, xi, label in points:
        px, py = xy(chi, xi)
        out.append(f'<circle class="point" cx="{px:.2f}" cy="{py:.2f}" r="3" fill="black"/>')
        if label:
            out.append(f'<text x="{px + 5:.2f}" y="{py - 5:.2f}" font-size="10">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def loglog_svg(freqs, values, line=None, size=(480, 320)):
    """Log-log scatter of a spectrum with an optional fitted line (slope, intercept, band)."""
    w, h = size
    pad = 45
    pairs = [(f, v) for f, v in zip(freqs, values) if f > 0 and v > 0]
    lx = [math.log10(f) for f, _ in pairs]
    ly = [math.log10(v) for _, v in pairs]
    x0, x1 = min(lx), max(lx)
    y0, y1 = min(ly), max(ly)
    x1 = x1 if x1 > x0 else x0 + 1
    y1 = y1 if y1 > y0 else y0 + 1

    def xy(a, b):
        return pad + (a - x0) / (x1 - x0) * (w - 2 * pad), h - pad - (b - y0) / (y1 - y0) * (h - 2 * pad)

    out = _head(w, h)
    out.append(f'<rect x="{pad}" y="{pad}" width="{w - 2 * pad}" height="{h - 2 * pad}" '
               'fill="none" stroke="black"/>')
    pts = " ".join("%.2f,%.2f" % xy(a, b) for a, b in zip(lx, ly))
    out.append(f'<polyline class="spectrum" points="{pts}" fill="none" stroke="#1f77b4"/>')
    if line is not None:
        slope, icpt, (lo, hi) = line
        a, b = math.log10(lo), math.log10(hi)
        # the fit is in natural logs; log10 y = slope*log10 f + icpt/ln 10
        p, q = xy(a, slope * a + icpt / math.log(10)), xy(b, slope * b + icpt / math.log(10))
        out.append(f'<line class="fit" x1="{p[0]:.2f}" y1="{p[1]:.2f}" x2="{q[0]:.2f}" '
                   f'y2="{q[1]:.2f}" stroke="#d62728" stroke-width="2"/>')
        out.append(f'<text x="{w - pad:.0f}" y="{pad - 8}" text-anchor="end" font-size="12">'
                   f'slope {slope:.3f}</text>')
    out.append(f'<text x="{w / 2:.0f}" y="{h - 10}" text-anchor="middle" font-size="12">'
               'log10 frequency</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
