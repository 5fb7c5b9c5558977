"""Minimal deterministic SVG drawing for curves, regions and approximations."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

WIDTH = 640
MARGIN = 24

# blue-green-yellow ramp for surface heat shading
_RAMP = np.array(
    [[68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37]], dtype=float
)
CURVE_COLORS = ("#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def heat_color(t: float) -> str:
    t = min(max(t, 0.0), 1.0) * (len(_RAMP) - 1)
    i = min(int(t), len(_RAMP) - 2)
    c = _RAMP[i] + (t - i) * (_RAMP[i + 1] - _RAMP[i])
    return "#%02x%02x%02x" % tuple(int(round(v)) for v in c)


class Canvas:
    """World-to-pixel mapping with y pointing up; elements are appended in order."""

    def __init__(self, x_lo, x_hi, y_lo, y_hi, width=WIDTH, title=None):
        if x_hi <= x_lo:
            x_hi = x_lo + 1.0
        if y_hi <= y_lo:
            y_hi = y_lo + 1.0
        self.box = (x_lo, x_hi, y_lo, y_hi)
        self.scale = (width - 2 * MARGIN) / max(x_hi - x_lo, y_hi - y_lo)
        self.width = width
        self.height = int(math.ceil((y_hi - y_lo) * self.scale)) + 2 * MARGIN
        self.items: list[str] = []
        if title:
            self.items.append(
                f'<title>{escape(title)}</title>'
            )

    def px(self, x, y):
        x_lo, _, _, y_hi = self.box
        return MARGIN + (x - x_lo) * self.scale, MARGIN + (y_hi - y) * self.scale

    def _points(self, pts) -> str:
        return " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in (self.px(x, y) for x, y in pts))

    def polyline(self, pts, stroke, width=1.5, closed=False, fill="none", dash=None):
        tag = "polygon" if closed else "polyline"
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(
            f'<{tag} points="{self._points(pts)}" fill="{fill}" stroke="{stroke}" '
            f'stroke-width="{width}"{extra}/>'
        )

    def circle(self, x, y, r_px, fill, stroke="none"):
        cx, cy = self.px(x, y)
        self.items.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r_px)}" fill="{fill}" stroke="{stroke}"/>'
        )

    def text(self, x_px, y_px, label, size=12):
        self.items.append(
            f'<text x="{_fmt(x_px)}" y="{_fmt(y_px)}" font-size="{size}" '
            f'font-family="sans-serif">{escape(label)}</text>'
        )

    def heatmap(self, surface, cells=64):
        """Shade the view box by surface height (skipping points outside the domain)."""
        x_lo, x_hi, y_lo, y_hi = self.box
        xs = np.linspace(x_lo, x_hi, cells + 1)
        ys = np.linspace(y_lo, y_hi, cells + 1)
        xc = 0.5 * (xs[:-1] + xs[1:])
        yc = 0.5 * (ys[:-1] + ys[1:])
        X, Y = np.meshgrid(xc, yc, indexing="ij")
        inside = np.asarray(surface.contains(X, Y))
        Z = np.full(X.shape, np.nan)
        if inside.any():
            Z[inside] = surface.eval(X[inside], Y[inside])
        finite = np.isfinite(Z)
        if not finite.any():
            return
        z_lo, z_hi = float(Z[finite].min()), float(Z[finite].max())
        span = z_hi - z_lo or 1.0
        w = (xs[1] - xs[0]) * self.scale
        h = (ys[1] - ys[0]) * self.scale
        for i in range(cells):
            for j in range(cells):
                if not finite[i, j]:
                    continue
                px, py = self.px(xs[i], ys[j + 1])
                self.items.append(
                    f'<rect x="{_fmt(px)}" y="{_fmt(py)}" width="{_fmt(w + 0.5)}" '
                    f'height="{_fmt(h + 0.5)}" fill="{heat_color((Z[i, j] - z_lo) / span)}"/>'
                )

    def render(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">'
        )
        body = "\n".join(self.items)
        return f'{head}\n<rect width="100%" height="100%" fill="white"/>\n{body}\n</svg>\n'


def curves_svg(curve, families, samples=400) -> str:
    """Base curve in blue plus one imaging curve per ``(d, xs', ys', violation_xs)`` family."""
    lo, hi = curve.domain
    xs = np.linspace(lo, hi, samples)
    ys = curve.eval(xs)
    all_y = [ys]
    for _, xp, yp, _ in families:
        keep = (xp >= lo) & (xp <= hi)
        all_y.append(yp[keep])
    y_all = np.concatenate([a[np.isfinite(a)] for a in all_y])
    y_lo, y_hi = float(y_all.min()), float(y_all.max())
    pad = 0.05 * (y_hi - y_lo or 1.0)
    cv = Canvas(lo, hi, y_lo - pad, y_hi + pad, title=f"imaging curves of {curve.name}")
    cv.polyline(zip(xs, ys), "#1f77b4", width=2)
    for k, (d, xp, yp, bad) in enumerate(families):
        color = CURVE_COLORS[k % len(CURVE_COLORS)]
        keep = (xp >= lo) & (xp <= hi) & np.isfinite(yp)
        # split where the curve leaves the domain so no spurious joins are drawn
        runs = np.split(np.arange(xp.size), np.flatnonzero(np.diff(keep.astype(int)) != 0) + 1)
        for run in runs:
            if run.size > 1 and keep[run[0]]:
                cv.polyline(zip(xp[run], yp[run]), color)
        cv.text(MARGIN + 4, MARGIN + 14 * (k + 1), f"d = {d:g}" + (" (invalid)" if len(bad) else ""))
        if len(bad):
            bx = np.asarray(bad)
            fx = curve.eval(bx)
            for x, y in zip(bx[:: max(1, len(bx) // 50)], fx[:: max(1, len(bx) // 50)]):
                cv.circle(x, y, 3, "none", stroke="#d62728")
    return cv.render()


def region_svg(surface, regions, heat_cells=64) -> str:
    """Heat-shaded surface, regions in white, centers in red."""
    boxes = [r.boundary for r in regions]
    pts = np.vstack(boxes)
    x_lo, y_lo = pts.min(axis=0)
    x_hi, y_hi = pts.max(axis=0)
    pad = 0.25 * max(x_hi - x_lo, y_hi - y_lo)
    cv = Canvas(x_lo - pad, x_hi + pad, y_lo - pad, y_hi + pad, title="orthographic regions")
    cv.heatmap(surface, heat_cells)
    for r in regions:
        cv.polyline(r.boundary, "#ffffff", width=1, closed=True, fill="#ffffff")
    for r in regions:
        cv.circle(r.center[0], r.center[1], 3, "#ff0000")
    return cv.render()


def approx_svg(region, approximations) -> str:
    """Exact boundary in blue, approximations in red, ray endpoints as dots."""
    pts = [region.boundary] + [a.outline() for a in approximations]
    allp = np.vstack(pts)
    x_lo, y_lo = allp.min(axis=0)
    x_hi, y_hi = allp.max(axis=0)
    pad = 0.1 * max(x_hi - x_lo, y_hi - y_lo)
    cv = Canvas(x_lo - pad, x_hi + pad, y_lo - pad, y_hi + pad, title="boundary approximations")
    cv.polyline(region.boundary, "#1f77b4", width=2, closed=True)
    for k, a in enumerate(approximations):
        dash = None if k == 0 else "6,3"
        cv.polyline(a.outline(), "#d62728", width=1.5, closed=True, dash=dash)
        for ray in a.rays:
            cv.circle(*ray.endpoint, 2.5, "#d62728")
        cv.text(MARGIN + 4, MARGIN + 14 * (k + 1), a.method_tag)
    cv.circle(region.center[0], region.center[1], 3, "#000000")
    return cv.render()
