"""Approximate orthographic boundaries and compare them with exact regions.

Four constructions, cheapest last:

* ``polygonal`` (approach-1): march ``N`` equiangular rays, join the endpoints.
* ``elliptical`` (approach-2): ellipse whose major axis is the longest of the
  ``N/2`` diagonals between opposite ray endpoints and whose minor axis has
  the length of the shortest one.
* ``circular_one`` (approach-3): circle at the center with the mean ray length.
* ``circular_two`` (approach-4): circle whose radius shrinks linearly with the
  absolute Gaussian curvature at the center; no marching at all.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import directed_hausdorff

from . import _kernels
from .errors import DegenerateRegionError, OutOfDomainError
from .region import OrthoParams, OrthoRegion, _accept, surface_region
from .surface import HeightField, gaussian_curvature

METHOD_TAGS = {
    "polygonal": "approach-1",
    "elliptical": "approach-2",
    "circular_one": "approach-3",
    "circular_two": "approach-4",
}
METHOD_ALIASES = {
    "polygon": "polygonal",
    "ellipse": "elliptical",
    "circular-i": "circular_one",
    "circular1": "circular_one",
    "circular-ii": "circular_two",
    "circular2": "circular_two",
    **{tag: name for name, tag in METHOD_TAGS.items()},
}

DEFAULT_M = 4.0
DEFAULT_REFINE = 30
OUTLINE_SAMPLES = 256

# cos^2 + cos^2 benchmark used for accuracy/timing comparisons
BENCHMARK_CENTERS = tuple((x, y) for y in (-1.0, -0.5, 0.0) for x in (-1.0, -0.5, 0.0))


def canonical_method(name: str) -> str:
    key = name.strip().lower().replace(" ", "_")
    key = METHOD_ALIASES.get(key, key)
    if key not in METHOD_TAGS:
        raise ValueError(f"unknown approximation method {name!r}; choose from {sorted(METHOD_TAGS)}")
    return key


@dataclass(frozen=True)
class DirectionalBound:
    direction_index: int
    angle: float
    endpoint: tuple[float, float]
    distance_from_center: float


@dataclass(frozen=True, eq=False)
class BoundaryApprox:
    kind: str
    method_tag: str
    center: tuple[float, float]
    polygon: np.ndarray | None = None
    semi_major: float | None = None
    semi_minor: float | None = None
    orientation: float | None = None
    radius: float | None = None
    build_time: float = 0.0
    rays: tuple[DirectionalBound, ...] = ()
    notes: tuple[str, ...] = ()

    def contains(self, x, y) -> np.ndarray:
        """Rasterisation test for world points."""
        x = np.ascontiguousarray(x, dtype=float).ravel()
        y = np.ascontiguousarray(y, dtype=float).ravel()
        cx, cy = self.center
        if self.kind == "polygon":
            return np.asarray(_kernels.polygon_mask(x, y, np.ascontiguousarray(self.polygon)), bool)
        if self.kind == "circle":
            return (x - cx) ** 2 + (y - cy) ** 2 <= self.radius**2
        c, s = math.cos(self.orientation), math.sin(self.orientation)
        u = (x - cx) * c + (y - cy) * s
        v = -(x - cx) * s + (y - cy) * c
        return (u / self.semi_major) ** 2 + (v / self.semi_minor) ** 2 <= 1.0

    def outline(self, samples: int = OUTLINE_SAMPLES) -> np.ndarray:
        if self.kind == "polygon":
            return np.asarray(self.polygon)
        t = np.linspace(0.0, 2 * math.pi, samples, endpoint=False)
        cx, cy = self.center
        if self.kind == "circle":
            return np.column_stack([cx + self.radius * np.cos(t), cy + self.radius * np.sin(t)])
        c, s = math.cos(self.orientation), math.sin(self.orientation)
        u = self.semi_major * np.cos(t)
        v = self.semi_minor * np.sin(t)
        return np.column_stack([cx + u * c - v * s, cy + u * s + v * c])

    @property
    def area(self) -> float:
        if self.kind == "polygon":
            x, y = self.polygon[:, 0], self.polygon[:, 1]
            return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))
        if self.kind == "circle":
            return math.pi * self.radius**2
        return math.pi * self.semi_major * self.semi_minor

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "method_tag": self.method_tag, "center": list(self.center)}
        if self.kind == "polygon":
            out["polygon"] = self.polygon.tolist()
        elif self.kind == "circle":
            out["radius"] = self.radius
        else:
            out.update(semi_major=self.semi_major, semi_minor=self.semi_minor, orientation=self.orientation)
        out["notes"] = list(self.notes)
        return out


@dataclass(frozen=True)
class ApproxComparison:
    method_tag: str
    method: str
    iou: float
    area_ratio: float
    hausdorff: float
    build_time: float
    extra: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "method_tag": self.method_tag,
            "method": self.method,
            "iou": self.iou,
            "area_ratio": self.area_ratio,
            "hausdorff": self.hausdorff,
            "build_time": self.build_time,
        }


# ---------------------------------------------------------------------------
# rays
# ---------------------------------------------------------------------------


def _ray_accepts(surface, x0, y0, p0, q0, norm0, ddx, ddy, params, fast_gradients):
    ddx = np.atleast_1d(np.asarray(ddx, float)).ravel()
    ddy = np.atleast_1d(np.asarray(ddy, float)).ravel()
    inside = np.asarray(surface.contains(x0 + ddx, y0 + ddy))
    ok = np.zeros(ddx.shape, bool)
    if inside.any():
        if fast_gradients:
            fxx, fxy, fyy = (float(v) for v in surface.hessian(x0, y0))
            p = p0 + (fxx * ddx[inside] + fxy * ddy[inside])
            q = q0 + (fxy * ddx[inside] + fyy * ddy[inside])
        else:
            p, q = surface.gradient(x0 + ddx[inside], y0 + ddy[inside])
        ok[inside] = _accept(
            ddx[inside], ddy[inside], p, q, p0, q0, norm0, params.r2max, params.cos_eps
        )
    return ok, inside


def _march_rays(surface, x0, y0, angles, params, refine, fast_gradients):
    """Accepted ray parameter ``t`` (in steps) and step length for each angle."""
    angles = np.asarray(angles, float)
    sx = params.dx * np.cos(angles)
    sy = params.dy * np.sin(angles)
    step = np.hypot(sx, sy)
    p0, q0 = (float(v) for v in surface.gradient(x0, y0))
    norm0 = math.sqrt(p0 * p0 + q0 * q0 + 1.0)
    kmax = int(math.floor(params.radius / float(step.min()))) + 2
    ks = np.arange(1, kmax + 1, dtype=float)
    ok, inside = _ray_accepts(
        surface, x0, y0, p0, q0, norm0, np.outer(sx, ks), np.outer(sy, ks), params, fast_gradients
    )
    ok = ok.reshape(angles.size, kmax)
    inside = inside.reshape(angles.size, kmax)
    failed = ~ok
    has_fail = failed.any(axis=1)
    last = np.where(has_fail, failed.argmax(axis=1), kmax)
    t = last.astype(float)
    # refine only rays that made progress and stopped on a rejection inside the domain
    rows = np.flatnonzero(has_fail & (last > 0))
    rows = rows[inside[rows, last[rows]]]
    if refine and rows.size:
        lo = t[rows].copy()
        hi = lo + 1.0
        for _ in range(refine):
            mid = 0.5 * (lo + hi)
            good, _ = _ray_accepts(
                surface, x0, y0, p0, q0, norm0, mid * sx[rows], mid * sy[rows], params, fast_gradients
            )
            lo = np.where(good, mid, lo)
            hi = np.where(good, hi, mid)
        t[rows] = lo
    return t, sx, sy, step


def ray_bound(
    surface,
    x0: float,
    y0: float,
    angle: float,
    params: OrthoParams,
    direction_index: int = 0,
    refine: int = DEFAULT_REFINE,
    fast_gradients: bool = False,
) -> DirectionalBound:
    """Farthest accepted point along one direction from the center.

    Marches in increments of ``(dx cos a, dy sin a)``, stops at the first
    rejected step and then bisects ``refine`` times inside that last step;
    the returned endpoint always passed both tests. A ray rejected at its
    first step returns the center itself (distance 0).
    """
    if not bool(surface.contains(x0, y0)):
        raise OutOfDomainError(f"center ({x0}, {y0}) outside domain {surface.domain}")
    t, sx, sy, step = _march_rays(surface, x0, y0, [angle], params, refine, fast_gradients)
    end = (x0 + t[0] * sx[0], y0 + t[0] * sy[0])
    return DirectionalBound(direction_index, angle, end, t[0] * step[0])


def directional_bounds(surface, x0, y0, N, params, refine=DEFAULT_REFINE, fast_gradients=False):
    """All ``N`` equiangular ray bounds, marched together."""
    if not bool(surface.contains(x0, y0)):
        raise OutOfDomainError(f"center ({x0}, {y0}) outside domain {surface.domain}")
    angles = 2 * math.pi * np.arange(N) / N
    t, sx, sy, step = _march_rays(surface, x0, y0, angles, params, refine, fast_gradients)
    degenerate = np.flatnonzero(t == 0).tolist()
    if degenerate:
        raise DegenerateRegionError(f"rays {degenerate} are rejected at their first step")
    return tuple(
        DirectionalBound(k, float(angles[k]), (x0 + t[k] * sx[k], y0 + t[k] * sy[k]), float(t[k] * step[k]))
        for k in range(N)
    )


# ---------------------------------------------------------------------------
# the four approaches
# ---------------------------------------------------------------------------


def approx_polygonal(surface, x0, y0, N, params, refine=DEFAULT_REFINE, fast_gradients=False) -> BoundaryApprox:
    if N < 3:
        raise ValueError("polygonal approximation needs N >= 3")
    t0 = time.perf_counter()
    rays = directional_bounds(surface, x0, y0, N, params, refine, fast_gradients)
    poly = np.array([r.endpoint for r in rays])
    elapsed = time.perf_counter() - t0
    return BoundaryApprox("polygon", METHOD_TAGS["polygonal"], (x0, y0), polygon=poly,
                          build_time=elapsed, rays=rays)


def approx_elliptical(surface, x0, y0, N, params, refine=DEFAULT_REFINE, fast_gradients=False) -> BoundaryApprox:
    if N < 4 or N % 2:
        raise ValueError("elliptical approximation needs an even N >= 4")
    t0 = time.perf_counter()
    rays = directional_bounds(surface, x0, y0, N, params, refine, fast_gradients)
    pts = np.array([r.endpoint for r in rays])
    half = N // 2
    diag = pts[half:] - pts[:half]
    lengths = np.hypot(diag[:, 0], diag[:, 1])
    k_max = int(np.argmax(lengths))
    k_min = int(np.argmin(lengths))
    mid = 0.5 * (pts[k_max] + pts[k_max + half])
    orientation = math.atan2(diag[k_max, 1], diag[k_max, 0])
    elapsed = time.perf_counter() - t0
    return BoundaryApprox(
        "ellipse",
        METHOD_TAGS["elliptical"],
        (float(mid[0]), float(mid[1])),
        semi_major=float(lengths[k_max]) / 2,
        semi_minor=float(lengths[k_min]) / 2,
        orientation=orientation,
        build_time=elapsed,
        rays=rays,
    )


def approx_circular_one(surface, x0, y0, N, params, refine=DEFAULT_REFINE, fast_gradients=False) -> BoundaryApprox:
    if N < 3:
        raise ValueError("circular approximation needs N >= 3")
    t0 = time.perf_counter()
    rays = directional_bounds(surface, x0, y0, N, params, refine, fast_gradients)
    radius = sum(r.distance_from_center for r in rays) / N
    elapsed = time.perf_counter() - t0
    return BoundaryApprox("circle", METHOD_TAGS["circular_one"], (x0, y0), radius=radius,
                          build_time=elapsed, rays=rays)


def max_abs_curvature(surface, params: OrthoParams | None = None, spacing=None) -> float:
    """Largest ``|K|`` over the surface bounds, sampled on a lattice.

    Heightfields use their own lattice; analytic surfaces are sampled at
    ``spacing`` (default: the region steps of ``params``).
    """
    if isinstance(surface, HeightField):
        return float(np.max(np.abs(surface.curvature_grid())))
    if spacing is None:
        if params is None:
            raise ValueError("need params or spacing to sample the curvature")
        spacing = (params.dx, params.dy)
    x_lo, x_hi, y_lo, y_hi = surface.domain
    xs = np.linspace(x_lo, x_hi, int(round((x_hi - x_lo) / spacing[0])) + 1)
    ys = np.linspace(y_lo, y_hi, int(round((y_hi - y_lo) / spacing[1])) + 1)
    best = 0.0
    for y in ys:  # row by row keeps memory flat on fine lattices
        k = gaussian_curvature(surface, xs, np.full_like(xs, y))
        best = max(best, float(np.max(np.abs(k))))
    return best


def circular_two_radius(abs_k: float, k_max: float, R: float, m: float) -> float:
    """Circle radius that falls linearly from ``R`` at zero curvature to ``R/m`` at ``k_max``."""
    return R - (abs_k / k_max) * R * (1.0 - 1.0 / m)


def approx_circular_two(surface, x0, y0, m, params, K_max) -> BoundaryApprox:
    if not m > 1:
        raise ValueError("m must exceed 1")
    if not bool(surface.contains(x0, y0)):
        raise OutOfDomainError(f"center ({x0}, {y0}) outside domain {surface.domain}")
    t0 = time.perf_counter()
    R = params.radius
    notes = []
    if K_max <= 0:
        radius = R
        notes.append("K_max <= 0: flat surface, radius = d tan(eps)")
    else:
        k = abs(float(gaussian_curvature(surface, x0, y0)))
        if k > K_max:
            notes.append(f"|K|={k:.6g} exceeds sampled K_max={K_max:.6g}; clamped")
            k = K_max
        radius = circular_two_radius(k, K_max, R, m)
    elapsed = time.perf_counter() - t0
    return BoundaryApprox("circle", METHOD_TAGS["circular_two"], (x0, y0), radius=radius,
                          build_time=elapsed, notes=tuple(notes))


def build_approx(method, surface, x0, y0, params, N=16, m=DEFAULT_M, K_max=None,
                 refine=DEFAULT_REFINE, fast_gradients=False) -> BoundaryApprox:
    method = canonical_method(method)
    if method == "polygonal":
        return approx_polygonal(surface, x0, y0, N, params, refine, fast_gradients)
    if method == "elliptical":
        return approx_elliptical(surface, x0, y0, N, params, refine, fast_gradients)
    if method == "circular_one":
        return approx_circular_one(surface, x0, y0, N, params, refine, fast_gradients)
    if K_max is None:
        K_max = max_abs_curvature(surface, params)
    return approx_circular_two(surface, x0, y0, m, params, K_max)


# ---------------------------------------------------------------------------
# comparison harness
# ---------------------------------------------------------------------------


def _densify(poly: np.ndarray, spacing: float) -> np.ndarray:
    pts = [poly]
    nxt = np.roll(poly, -1, axis=0)
    seg = np.hypot(*(nxt - poly).T)
    for i in np.flatnonzero(seg > spacing):
        k = int(math.ceil(seg[i] / spacing))
        t = np.arange(1, k)[:, None] / k
        pts.append(poly[i] + t * (nxt[i] - poly[i]))
    return np.vstack(pts)


def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    return max(directed_hausdorff(a, b)[0], directed_hausdorff(b, a)[0])


def _lattice(region: OrthoRegion, reach: float):
    p = region.params
    hx = int(math.floor(reach / p.dx)) + 2
    hy = int(math.floor(reach / p.dy)) + 2
    ex, ey = region.half
    hx, hy = max(hx, ex), max(hy, ey)
    n1, n2 = np.meshgrid(np.arange(-hx, hx + 1), np.arange(-hy, hy + 1), indexing="ij")
    exact = np.zeros(n1.shape, bool)
    exact[hx - ex : hx + ex + 1, hy - ey : hy + ey + 1] = region.mask.astype(bool)
    x0, y0 = region.center[:2]
    return x0 + n1 * p.dx, y0 + n2 * p.dy, exact


def compare(
    surface,
    x0: float,
    y0: float,
    params: OrthoParams,
    methods=tuple(METHOD_TAGS),
    N: int = 16,
    m: float = DEFAULT_M,
    K_max: float | None = None,
    repeats: int = 5,
    region: OrthoRegion | None = None,
    refine: int = DEFAULT_REFINE,
    fast_gradients: bool = False,
) -> list[ApproxComparison]:
    """Score each approximation against the exact region at ``(x0, y0)``.

    IoU and area ratio are counted over lattice points; the Hausdorff
    distance is between the exact cell outline and the approximate outline.
    ``build_time`` is the median over ``repeats`` constructions.
    """
    if region is None:
        region = surface_region(surface, x0, y0, params, fast_gradients=fast_gradients)
    if region.count < 2:
        raise DegenerateRegionError(f"exact region at ({x0}, {y0}) has {region.count} member(s)")
    methods = [canonical_method(mt) for mt in methods]
    if "circular_two" in methods and K_max is None:
        K_max = max_abs_curvature(surface, params)
    X, Y, exact = _lattice(region, 2.0 * params.radius)
    exact_count = int(exact.sum())
    spacing = 0.5 * min(params.dx, params.dy)
    exact_outline = _densify(region.boundary, spacing)

    results = []
    for method in methods:
        times = []
        approx = None
        for _ in range(max(1, repeats)):
            approx = build_approx(method, surface, x0, y0, params, N, m, K_max, refine, fast_gradients)
            times.append(approx.build_time)
        inside = approx.contains(X, Y).reshape(X.shape)
        inter = int(np.count_nonzero(inside & exact))
        union = int(np.count_nonzero(inside | exact))
        results.append(
            ApproxComparison(
                METHOD_TAGS[method],
                method,
                inter / union if union else 0.0,
                int(inside.sum()) / exact_count,
                hausdorff(exact_outline, _densify(approx.outline(), spacing)),
                statistics.median(times),
                {"approx": approx},
            )
        )
    return results
