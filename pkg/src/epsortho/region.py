"""Epsilon-orthographic regions.

A probe point belongs to the region of a center when both

* its view angle inside the camera cone, ``theta``, and
* the angle between its normal and the center's normal, ``phi``,

are at most ``epsilon``. Regions are grown ring by ring over the L1 lattice
rings around the center (:func:`pair_gen`), and a brute-force scan is kept
as an independent oracle.

Membership tests are evaluated as ``dx^2 + dy^2 <= (d tan eps)^2`` and
``cos(phi) >= cos(eps)``; both are exact reformulations of the angle
inequalities and are used identically by every code path, so the grown and
brute-force regions can be compared for exact set equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import ndimage

from . import _kernels
from .errors import DegenerateRegionError, NonSmoothPointError, OutOfDomainError
from .surface import AnalyticCurve, ParametricSurface


@dataclass(frozen=True)
class OrthoParams:
    """Half field-of-view ``epsilon`` (radians), working distance ``d`` and lattice steps."""

    epsilon: float
    d: float
    dx: float
    dy: float | None = None

    def __post_init__(self):
        if self.dy is None:
            object.__setattr__(self, "dy", self.dx)
        if not (0 < self.epsilon < math.pi / 2):
            raise ValueError(f"epsilon must lie in (0, pi/2), got {self.epsilon}")
        if not (self.d > 0 and math.isfinite(self.d)):
            raise ValueError(f"d must be positive, got {self.d}")
        if not (self.dx > 0 and self.dy > 0):
            raise ValueError(f"dx and dy must be positive, got {self.dx}, {self.dy}")

    @classmethod
    def from_degrees(cls, epsilon_deg: float, d: float, dx: float, dy: float | None = None):
        return cls(math.radians(epsilon_deg), d, dx, dy)

    @property
    def radius(self) -> float:
        """Planar region radius ``d * tan(epsilon)``."""
        return self.d * math.tan(self.epsilon)

    @property
    def r2max(self) -> float:
        r = self.radius
        return r * r

    @property
    def cos_eps(self) -> float:
        return math.cos(self.epsilon)


@dataclass(frozen=True)
class CurveBounds:
    x_left: float
    x_right: float
    center_x: float

    @property
    def width(self) -> float:
        return self.x_right - self.x_left


# ---------------------------------------------------------------------------
# angle criteria
# ---------------------------------------------------------------------------


def _acos_clamped(c):
    return np.arccos(np.clip(c, -1.0, 1.0))


def phi_curve(p0, p):
    """Angle between the normals of a curve with slopes ``p0`` and ``p``."""
    c = (p0 * p + 1.0) / (np.sqrt(p0 * p0 + 1.0) * np.sqrt(p * p + 1.0))
    out = _acos_clamped(c)
    return float(out) if np.ndim(out) == 0 else out


def theta_curve(delta_x, d):
    """View angle of a point ``delta_x`` away from the foot of the camera."""
    if not d > 0:
        raise ValueError(f"d must be positive, got {d}")
    out = np.arctan(np.abs(delta_x) / d)
    return float(out) if np.ndim(out) == 0 else out


def phi_surface(p0, q0, p, q):
    """Angle between the normals of gradients ``(p0, q0)`` and ``(p, q)``."""
    c = (p0 * p + q0 * q + 1.0) / (np.sqrt(p0 * p0 + q0 * q0 + 1.0) * np.sqrt(p * p + q * q + 1.0))
    out = _acos_clamped(c)
    return float(out) if np.ndim(out) == 0 else out


def theta_surface(delta_x, delta_y, d):
    if not d > 0:
        raise ValueError(f"d must be positive, got {d}")
    out = np.arctan(np.hypot(delta_x, delta_y) / d)
    return float(out) if np.ndim(out) == 0 else out


def _accept(ddx, ddy, p, q, p0, q0, norm0, r2max, cos_eps):
    """Vectorised membership test; same arithmetic as the kernels."""
    c = (p0 * p + q0 * q + 1.0) / (norm0 * np.sqrt(p * p + q * q + 1.0))
    return (ddx * ddx + ddy * ddy <= r2max) & (c >= cos_eps)


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------


def _march_curve(curve, x0, p0, params, side, chunk=4096):
    k0 = 1
    last = 0
    while True:
        ks = np.arange(k0, k0 + chunk, dtype=np.float64)
        xs = x0 + side * ks * params.dx
        inside = curve.contains(xs)
        p = curve.derivative(np.where(inside, xs, x0))
        ok = inside & (theta_curve(ks * params.dx, params.d) <= params.epsilon)
        ok &= phi_curve(p0, p) <= params.epsilon
        bad = np.flatnonzero(~ok)
        if bad.size:
            last = k0 + int(bad[0]) - 1
            break
        k0 += chunk
    return x0 + side * last * params.dx


def curve_bounds(curve: AnalyticCurve, x0: float, params: OrthoParams) -> CurveBounds:
    """Left and right orthographic bounds of a curve around ``x0``.

    Marches outward in steps of ``params.dx`` and returns the last position
    on each side that passed both angle tests; the domain edge also stops
    the march.
    """
    lo, hi = curve.domain
    if not (lo < x0 < hi):
        raise OutOfDomainError(f"x0={x0} is not interior to {curve.domain}")
    if any(x0 == s for s in curve.nonsmooth_points):
        raise NonSmoothPointError(f"curve {curve.name} is not differentiable at x={x0}")
    p0 = float(curve.derivative(x0))
    left = _march_curve(curve, x0, p0, params, -1)
    right = _march_curve(curve, x0, p0, params, +1)
    return CurveBounds(float(left), float(right), float(x0))


def brute_force_curve_bounds(curve: AnalyticCurve, x0: float, params: OrthoParams) -> CurveBounds:
    """Oracle: test every lattice point of the domain, then take the run around ``x0``."""
    lo, hi = curve.domain
    p0 = float(curve.derivative(x0))
    k_lo = -int(math.floor((x0 - lo) / params.dx))
    k_hi = int(math.floor((hi - x0) / params.dx))
    ks = np.arange(k_lo, k_hi + 1)
    ks = ks[ks != 0]
    side = np.sign(ks).astype(float)
    xs = x0 + side * np.abs(ks) * params.dx
    inside = curve.contains(xs)
    ok = inside & (theta_curve(np.abs(ks) * params.dx, params.d) <= params.epsilon)
    ok &= phi_curve(p0, curve.derivative(xs)) <= params.epsilon
    accepted = dict(zip(ks.tolist(), ok.tolist()))
    right = 0
    while accepted.get(right + 1, False):
        right += 1
    left = 0
    while accepted.get(-(left + 1), False):
        left += 1
    return CurveBounds(x0 - left * params.dx, x0 + right * params.dx, x0)


# ---------------------------------------------------------------------------
# rings and regions
# ---------------------------------------------------------------------------


def pair_gen(n: int) -> list[tuple[int, int]]:
    """Integer offsets with ``|n1| + |n2| == n``, counter-clockwise from ``(n, 0)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return [(0, 0)]
    return [_kernels.python.ring_offset(n, k) for k in range(4 * n)]


@dataclass(frozen=True, eq=False)
class OrthoRegion:
    """Accepted lattice points around a center.

    ``mask[a, b]`` refers to the lattice offset ``(a - hx, b - hy)``, i.e. the
    world point ``(x0 + (a - hx) * dx, y0 + (b - hy) * dy)``. For regions
    grown in a tangent frame, ``frame`` holds ``(origin, e1, e2, normal)`` and
    the world coordinates are tangent-plane coordinates.
    """

    center: tuple[float, float, float]
    mask: np.ndarray
    params: OrthoParams
    connectivity_filtered: bool = False
    rings_visited: int = 0
    frame: tuple | None = None

    @property
    def half(self) -> tuple[int, int]:
        return (self.mask.shape[0] - 1) // 2, (self.mask.shape[1] - 1) // 2

    @cached_property
    def offsets(self) -> np.ndarray:
        hx, hy = self.half
        return np.argwhere(self.mask) - np.array([hx, hy])

    @property
    def members(self) -> frozenset[tuple[int, int]]:
        return frozenset(map(tuple, self.offsets.tolist()))

    @property
    def points(self) -> np.ndarray:
        """World ``(x, y)`` of every member."""
        off = self.offsets
        x0, y0 = self.center[:2] if self.frame is None else (0.0, 0.0)
        return np.column_stack([x0 + off[:, 0] * self.params.dx, y0 + off[:, 1] * self.params.dy])

    @property
    def count(self) -> int:
        return int(self.offsets.shape[0])

    @property
    def area(self) -> float:
        return self.count * self.params.dx * self.params.dy

    @cached_property
    def boundary(self) -> np.ndarray:
        return region_boundary(self)


def _check_center(surface, x0, y0):
    if not (math.isfinite(x0) and math.isfinite(y0)) or not bool(surface.contains(x0, y0)):
        raise OutOfDomainError(f"center ({x0}, {y0}) outside domain {surface.domain}")


def _window(params: OrthoParams, slack_cells: float = 0.0):
    r = params.radius
    hx = int(math.floor((r + slack_cells * max(params.dx, params.dy)) / params.dx)) + 1
    hy = int(math.floor((r + slack_cells * max(params.dx, params.dy)) / params.dy)) + 1
    n1 = np.arange(-hx, hx + 1)
    n2 = np.arange(-hy, hy + 1)
    N1, N2 = np.meshgrid(n1, n2, indexing="ij")
    return hx, hy, N1, N2


def _probe_gradients(surface, x0, y0, p0, q0, ddx, ddy, inside, fast_gradients):
    p = np.zeros(ddx.shape)
    q = np.zeros(ddx.shape)
    if fast_gradients:
        fxx, fxy, fyy = (float(v) for v in surface.hessian(x0, y0))
        p[inside] = p0 + (fxx * ddx[inside] + fxy * ddy[inside])
        q[inside] = q0 + (fxy * ddx[inside] + fyy * ddy[inside])
    else:
        gp, gq = surface.gradient(x0 + ddx[inside], y0 + ddy[inside])
        p[inside] = gp
        q[inside] = gq
    return p, q


def _center_gradient(surface, x0, y0):
    p0, q0 = (float(v) for v in surface.gradient(x0, y0))
    return p0, q0, math.sqrt(p0 * p0 + q0 * q0 + 1.0)


def _keep_center_component(mask, hx, hy):
    labels, _ = ndimage.label(mask, structure=np.ones((3, 3), bool))
    return (labels == labels[hx, hy]).astype(np.uint8)


def surface_region(
    surface,
    x0: float,
    y0: float,
    params: OrthoParams,
    connectivity_filter: bool = False,
    fast_gradients: bool = False,
    buff_limit: int = 3,
    reset_buff: bool = False,
    kernels=None,
) -> OrthoRegion:
    """Grow the orthographic region of ``(x0, y0)`` ring by ring.

    Rings are visited in order ``n = 1, 2, ...``. Every empty ring increments
    a counter which, by default, is never reset; growth stops once it exceeds
    ``buff_limit`` or a ring falls completely outside the domain. Rings
    beyond the ``d * tan(eps)`` window cannot contain members and are not
    visited.
    """
    _check_center(surface, x0, y0)
    kernels = kernels or _kernels
    hx, hy, N1, N2 = _window(params)
    ddx = N1 * params.dx
    ddy = N2 * params.dy
    inside = np.asarray(surface.contains(x0 + ddx, y0 + ddy))
    p0, q0, norm0 = _center_gradient(surface, x0, y0)
    p, q = _probe_gradients(surface, x0, y0, p0, q0, ddx, ddy, inside, fast_gradients)
    mask, rings = kernels.grow_rings(
        np.ascontiguousarray(p),
        np.ascontiguousarray(q),
        np.ascontiguousarray(inside, dtype=np.uint8),
        params.dx,
        params.dy,
        params.r2max,
        params.cos_eps,
        p0,
        q0,
        norm0,
        int(buff_limit),
        bool(reset_buff),
    )
    mask = np.asarray(mask, dtype=np.uint8)
    if connectivity_filter:
        mask = _keep_center_component(mask, hx, hy)
    z0 = float(surface.eval(x0, y0))
    return OrthoRegion((float(x0), float(y0), z0), mask, params, connectivity_filter, int(rings))


def brute_force_region(
    surface, x0: float, y0: float, params: OrthoParams, fast_gradients: bool = False
) -> OrthoRegion:
    """Oracle: test every lattice point within ``d tan(eps) + 2 max(dx, dy)`` (L-inf)."""
    _check_center(surface, x0, y0)
    hx, hy, N1, N2 = _window(params, slack_cells=2.0)
    ddx = N1 * params.dx
    ddy = N2 * params.dy
    inside = np.asarray(surface.contains(x0 + ddx, y0 + ddy))
    p0, q0, norm0 = _center_gradient(surface, x0, y0)
    p, q = _probe_gradients(surface, x0, y0, p0, q0, ddx, ddy, inside, fast_gradients)
    ok = inside & _accept(ddx, ddy, p, q, p0, q0, norm0, params.r2max, params.cos_eps)
    ok[hx, hy] = True
    z0 = float(surface.eval(x0, y0))
    return OrthoRegion((float(x0), float(y0), z0), ok.astype(np.uint8), params)


# ---------------------------------------------------------------------------
# regions in a tangent frame (parametric surfaces)
# ---------------------------------------------------------------------------


def _orthonormal_frame(n0):
    helper = np.array([0.0, 0.0, 1.0]) if abs(n0[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(helper, n0)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n0, e1)
    return e1, e2


def _nearest_root(F, base, n0, reach, samples=16, iters=60):
    """Solve ``F(base + t n0) = 0`` for the root nearest ``t = 0`` in ``[-reach, reach]``."""
    ts = np.linspace(-reach, reach, 2 * samples + 1)
    vals = F(base[..., None, :] + ts[:, None] * n0)
    sign_change = np.sign(vals[..., :-1]) * np.sign(vals[..., 1:]) <= 0
    sign_change &= np.isfinite(vals[..., :-1]) & np.isfinite(vals[..., 1:])
    mid = 0.5 * (ts[:-1] + ts[1:])
    score = np.where(sign_change, np.abs(mid), np.inf)
    idx = np.argmin(score, axis=-1)
    found = np.isfinite(np.take_along_axis(score, idx[..., None], -1)[..., 0])
    lo = ts[idx]
    hi = ts[idx + 1]
    f_lo = np.take_along_axis(vals, idx[..., None], -1)[..., 0]
    for _ in range(iters):
        m = 0.5 * (lo + hi)
        fm = F(base + m[..., None] * n0)
        left = np.sign(fm) == np.sign(f_lo)
        lo = np.where(left, m, lo)
        f_lo = np.where(left, fm, f_lo)
        hi = np.where(left, hi, m)
    return 0.5 * (lo + hi), found


def tangent_region(
    psurface: ParametricSurface,
    u: float,
    v: float,
    params: OrthoParams,
    buff_limit: int = 3,
    reset_buff: bool = False,
    kernels=None,
) -> OrthoRegion:
    """Region of a parametric surface point, sampled on its tangent-plane lattice.

    Lattice points are laid out in the tangent plane of the center and
    lifted onto the surface along the center normal, so that ``theta`` is
    measured perpendicular to the viewing axis exactly as on a graph
    surface whose center normal is vertical.
    """
    kernels = kernels or _kernels
    origin = np.asarray(psurface.point(u, v), float)
    n0 = psurface.unit_normal(origin)
    e1, e2 = _orthonormal_frame(n0)
    hx, hy, N1, N2 = _window(params)
    a = N1 * params.dx
    b = N2 * params.dy
    base = origin + a[..., None] * e1 + b[..., None] * e2
    t, found = _nearest_root(psurface.implicit, base, n0, reach=2.0 * params.radius)
    hit = base + t[..., None] * n0
    with np.errstate(invalid="ignore"):
        n = psurface.unit_normal(hit)
        nz = n @ n0
        ok = found & np.isfinite(nz) & (nz > 0)
        nz_safe = np.where(ok, nz, 1.0)
        p = np.where(ok, -(n @ e1) / nz_safe, 0.0)
        q = np.where(ok, -(n @ e2) / nz_safe, 0.0)
    mask, rings = kernels.grow_rings(
        np.ascontiguousarray(p),
        np.ascontiguousarray(q),
        np.ascontiguousarray(ok, dtype=np.uint8),
        params.dx,
        params.dy,
        params.r2max,
        params.cos_eps,
        0.0,
        0.0,
        1.0,
        int(buff_limit),
        bool(reset_buff),
    )
    return OrthoRegion(
        tuple(float(c) for c in origin),
        np.asarray(mask, np.uint8),
        params,
        False,
        int(rings),
        frame=(origin, e1, e2, n0),
    )


# ---------------------------------------------------------------------------
# boundary tracing
# ---------------------------------------------------------------------------

def _trace_loops(mask: np.ndarray) -> list[np.ndarray]:
    """Closed counter-clockwise cell-edge loops of a mask, in corner coordinates.

    Corner ``(i, j)`` is the lower-left corner of cell ``(i, j)``. Where two
    cells touch only diagonally the trace turns right, so 8-connected cells
    share one outline.
    """
    m = np.pad(mask.astype(bool), 1)
    core = m[1:-1, 1:-1]
    edges: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def add(cond, start_off, end_off):
        for a, b in np.argwhere(cond):
            s = (int(a) + start_off[0], int(b) + start_off[1])
            e = (int(a) + end_off[0], int(b) + end_off[1])
            edges.setdefault(s, []).append(e)

    add(core & ~m[1:-1, :-2], (0, 0), (1, 0))  # bottom, cell below empty
    add(core & ~m[2:, 1:-1], (1, 0), (1, 1))  # right
    add(core & ~m[1:-1, 2:], (1, 1), (0, 1))  # top
    add(core & ~m[:-2, 1:-1], (0, 1), (0, 0))  # left

    loops = []
    while edges:
        start = next((k for k, v in edges.items() if len(v) == 1), next(iter(edges)))
        path = [start]
        cur = start
        prev_dir = None
        while True:
            outs = edges[cur]
            if len(outs) == 1 or prev_dir is None:
                nxt = outs[0]
            else:
                right = (prev_dir[1], -prev_dir[0])
                nxt = next(
                    (o for o in outs if (o[0] - cur[0], o[1] - cur[1]) == right), outs[0]
                )
            outs.remove(nxt)
            if not outs:
                del edges[cur]
            prev_dir = (nxt[0] - cur[0], nxt[1] - cur[1])
            cur = nxt
            if cur == start:
                break
            path.append(cur)
        loops.append(_drop_collinear(np.array(path, dtype=float)))
    return loops


def _drop_collinear(poly: np.ndarray) -> np.ndarray:
    prev = np.roll(poly, 1, axis=0)
    nxt = np.roll(poly, -1, axis=0)
    cross = (poly[:, 0] - prev[:, 0]) * (nxt[:, 1] - poly[:, 1]) - (poly[:, 1] - prev[:, 1]) * (
        nxt[:, 0] - poly[:, 0]
    )
    return poly[cross != 0]


def shoelace_area(poly: np.ndarray) -> float:
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def region_boundary(region: OrthoRegion) -> np.ndarray:
    """Outer outline of the member cells around the center, as an ``(K, 2)`` polygon.

    Each member owns the ``dx`` by ``dy`` cell centred on it. The returned
    polygon is counter-clockwise, closed implicitly (last vertex joins the
    first), and traces the component that contains the center.
    """
    if not region.mask.any():
        raise DegenerateRegionError("empty region has no boundary")
    loops = [lp for lp in _trace_loops(region.mask) if shoelace_area(lp) > 0]
    hx, hy = region.half
    c = np.array([hx + 0.5]), np.array([hy + 0.5])
    chosen = None
    for lp in sorted(loops, key=shoelace_area, reverse=True):
        if _kernels.polygon_mask(c[0], c[1], np.ascontiguousarray(lp))[0]:
            chosen = lp
            break
    if chosen is None:
        chosen = max(loops, key=shoelace_area)
    x0, y0 = region.center[:2] if region.frame is None else (0.0, 0.0)
    xs = x0 + (chosen[:, 0] - hx - 0.5) * region.params.dx
    ys = y0 + (chosen[:, 1] - hy - 0.5) * region.params.dy
    return np.column_stack([xs, ys])


# ---------------------------------------------------------------------------
# circle case
# ---------------------------------------------------------------------------


def circle_coverage(epsilon: float) -> tuple[int, float, float]:
    """Captures needed to cover a circle from its center, and arc lengths per unit radius.

    Returns ``(ceil(2 pi / eps), 2 pi, 2 eps)``: the full circumference is
    visible from the center, an eccentric viewpoint sees ``2 eps`` radians.
    """
    if not (0 < epsilon < math.pi):
        raise ValueError(f"epsilon must lie in (0, pi), got {epsilon}")
    return math.ceil(2 * math.pi / epsilon), 2 * math.pi, 2 * epsilon


def recheck_members(surface, region: OrthoRegion) -> np.ndarray:
    """Re-evaluate both angle tests at every member with the angle formulas."""
    pts = region.points
    x0, y0 = region.center[:2]
    p0, q0 = (float(v) for v in surface.gradient(x0, y0))
    p, q = surface.gradient(pts[:, 0], pts[:, 1])
    theta = theta_surface(pts[:, 0] - x0, pts[:, 1] - y0, region.params.d)
    phi = phi_surface(p0, q0, p, q)
    eps = region.params.epsilon
    # the stored test is the cosine/tangent form; allow an ulp of slack on the angles
    return (np.asarray(theta) <= eps * (1 + 1e-12)) & (np.asarray(phi) <= eps * (1 + 1e-12))
