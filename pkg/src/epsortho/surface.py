"""Surfaces and curves: DEM heightfields, the analytic catalog, derivatives.

Every surface is a graph ``z = f(x, y)`` over a rectangular domain and
exposes the same vectorised interface:

``eval(x, y)``, ``gradient(x, y) -> (p, q)``, ``hessian(x, y) -> (fxx, fxy, fyy)``
and ``contains(x, y)``.

Heightfield image convention: ``elevations[0]`` is the top image row and maps
to the *largest* y; column 0 maps to the smallest x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import ndimage

from .errors import (
    DemFormatError,
    DemReadError,
    DemSizeError,
    OutOfDomainError,
    UnknownSurfaceError,
)

__all__ = [
    "HeightField",
    "AnalyticSurface",
    "AnalyticCurve",
    "ParametricSurface",
    "load_dem",
    "smooth",
    "gradient_at",
    "hessian_at",
    "gaussian_curvature",
    "gaussian_curvature_at",
    "builtin_surface",
    "parametric_surface",
    "SURFACE_CATALOG",
    "CURVE_CATALOG",
    "heightfield_to_csv",
    "heightfield_from_csv",
    "sample_heightfield",
]

_DOMAIN_SLACK = 1e-9


def _in_box(x, y, domain, slack=_DOMAIN_SLACK):
    x_lo, x_hi, y_lo, y_hi = domain
    sx = slack * max(1.0, x_hi - x_lo)
    sy = slack * max(1.0, y_hi - y_lo)
    return (x >= x_lo - sx) & (x <= x_hi + sx) & (y >= y_lo - sy) & (y <= y_hi + sy)


# ---------------------------------------------------------------------------
# heightfields
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HeightField:
    """Sampled elevation grid.

    ``elevations`` has shape ``(rows, cols)``; ``spacing`` is ``(dx, dy)`` in
    world units per cell and ``origin`` the world position of the bottom-left
    sample (last row, first column).
    """

    elevations: np.ndarray
    spacing: tuple[float, float]
    origin: tuple[float, float] = (0.0, 0.0)
    elevation_scale: float = 1.0

    def __post_init__(self):
        z = np.array(self.elevations, dtype=np.float64, copy=True)
        if z.ndim != 2:
            raise ValueError("elevations must be a 2-D array")
        if z.shape[0] < 2 or z.shape[1] < 2:
            raise DemSizeError(f"grid must be at least 2x2, got {z.shape}")
        if not np.all(np.isfinite(z)):
            raise ValueError("elevations contain non-finite values")
        dx, dy = (float(s) for s in self.spacing)
        if not (dx > 0 and dy > 0):
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        if not self.elevation_scale > 0:
            raise ValueError(f"elevation_scale must be positive, got {self.elevation_scale}")
        z.setflags(write=False)
        object.__setattr__(self, "elevations", z)
        object.__setattr__(self, "spacing", (dx, dy))
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))
        object.__setattr__(self, "elevation_scale", float(self.elevation_scale))

    @property
    def shape(self) -> tuple[int, int]:
        return self.elevations.shape

    @property
    def nx(self) -> int:
        return self.elevations.shape[1]

    @property
    def ny(self) -> int:
        return self.elevations.shape[0]

    @property
    def domain(self) -> tuple[float, float, float, float]:
        x0, y0 = self.origin
        dx, dy = self.spacing
        return (x0, x0 + (self.nx - 1) * dx, y0, y0 + (self.ny - 1) * dy)

    @property
    def x_coords(self) -> np.ndarray:
        return self.origin[0] + self.spacing[0] * np.arange(self.nx)

    @property
    def y_coords(self) -> np.ndarray:
        """World y of each row, top row first (decreasing)."""
        return self.origin[1] + self.spacing[1] * np.arange(self.ny)[::-1]

    def contains(self, x, y):
        return _in_box(np.asarray(x, float), np.asarray(y, float), self.domain)

    # Internal fields are stored y-up: row k of ``_z`` is y0 + k*dy.
    @cached_property
    def _z(self) -> np.ndarray:
        return np.ascontiguousarray(self.elevations[::-1])

    @cached_property
    def _grad_fields(self) -> tuple[np.ndarray, np.ndarray]:
        dx, dy = self.spacing
        gy, gx = np.gradient(self._z, dy, dx, edge_order=1)
        return gx, gy

    @cached_property
    def _hess_fields(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        dx, dy = self.spacing
        p, q = self._grad_fields
        p_y, p_x = np.gradient(p, dy, dx, edge_order=1)
        q_y, q_x = np.gradient(q, dy, dx, edge_order=1)
        return p_x, 0.5 * (p_y + q_x), q_y

    def _bilinear(self, fields, x, y):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        dx, dy = self.spacing
        u = (x - self.origin[0]) / dx
        v = (y - self.origin[1]) / dy
        j = np.clip(np.floor(u), 0, self.nx - 2).astype(np.intp)
        i = np.clip(np.floor(v), 0, self.ny - 2).astype(np.intp)
        fu = np.clip(u - j, 0.0, 1.0)
        fv = np.clip(v - i, 0.0, 1.0)
        w00 = (1 - fu) * (1 - fv)
        w01 = fu * (1 - fv)
        w10 = (1 - fu) * fv
        w11 = fu * fv
        out = []
        for a in fields:
            val = w00 * a[i, j] + w01 * a[i, j + 1] + w10 * a[i + 1, j] + w11 * a[i + 1, j + 1]
            out.append(val)
        return out

    def eval(self, x, y):
        return self._bilinear((self._z,), x, y)[0]

    def gradient(self, x, y):
        p, q = self._bilinear(self._grad_fields, x, y)
        return p, q

    def hessian(self, x, y):
        fxx, fxy, fyy = self._bilinear(self._hess_fields, x, y)
        return fxx, fxy, fyy

    def curvature_grid(self) -> np.ndarray:
        """Gaussian curvature at every lattice point, image row order."""
        p, q = self._grad_fields
        fxx, fxy, fyy = self._hess_fields
        k = (fxx * fyy - fxy**2) / (1.0 + p**2 + q**2) ** 2
        return k[::-1]


def _read_tokens(data: bytes, count: int, pos: int) -> tuple[list[bytes], int]:
    tokens = []
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos < n and data[pos : pos + 1] == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        if pos >= n:
            raise DemReadError("truncated PGM header")
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos


def _parse_pgm(data: bytes) -> np.ndarray:
    magic = data[:2]
    if magic in (b"P1", b"P3", b"P4", b"P6", b"P7"):
        raise DemFormatError(f"not a grayscale PGM (magic {magic.decode(errors='replace')})")
    if magic not in (b"P2", b"P5"):
        raise DemReadError("not a PGM file")
    try:
        (w, h, maxval), pos = _read_tokens(data, 3, 2)
        w, h, maxval = int(w), int(h), int(maxval)
    except ValueError as exc:
        raise DemReadError(f"malformed PGM header: {exc}") from None
    if maxval > 255:
        raise DemFormatError(f"only 8-bit PGM supported, maxval={maxval}")
    if maxval <= 0:
        raise DemReadError(f"invalid maxval {maxval}")
    if w < 2 or h < 2:
        raise DemSizeError(f"image must be at least 2x2, got {w}x{h}")
    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        raw = np.frombuffer(data, dtype=np.uint8, count=-1, offset=pos)
        if raw.size < w * h:
            raise DemReadError("truncated PGM pixel data")
        pixels = raw[: w * h].astype(np.float64)
    else:
        try:
            toks, _ = _read_tokens(data, w * h, pos)
            pixels = np.array([int(t) for t in toks], dtype=np.float64)
        except ValueError as exc:
            raise DemReadError(f"malformed PGM pixel data: {exc}") from None
        if np.any(pixels > maxval) or np.any(pixels < 0):
            raise DemReadError("pixel value outside [0, maxval]")
    return pixels.reshape(h, w)


def load_dem(
    path,
    spacing: tuple[float, float] = (1.0, 1.0),
    elevation_scale: float = 1.0,
    origin: tuple[float, float] = (0.0, 0.0),
) -> HeightField:
    """Read an 8-bit PGM (P2 or P5) as a heightfield.

    Elevation is ``pixel / 255 * elevation_scale``. Row 0 of the image is the
    northernmost (largest y) row.
    """
    if not elevation_scale > 0:
        raise ValueError(f"invalid elevation scale {elevation_scale!r}: must be > 0")
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise DemReadError(f"cannot read {path}: {exc}") from None
    pixels = _parse_pgm(data)
    return HeightField(pixels / 255.0 * elevation_scale, spacing, origin, elevation_scale)


def smooth(hf: HeightField, sigma: float = 2.0) -> HeightField:
    """Gaussian blur with replicate edges and a kernel radius of ceil(3*sigma) cells."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if sigma == 0:
        z = hf.elevations.copy()
    else:
        radius = math.ceil(3.0 * sigma)
        z = ndimage.gaussian_filter(
            hf.elevations, sigma, mode="nearest", truncate=radius / sigma
        )
    return HeightField(z, hf.spacing, hf.origin, hf.elevation_scale)


def sample_heightfield(surface, spacing, domain=None) -> HeightField:
    """Sample a surface on a lattice; handy for building synthetic DEMs."""
    x_lo, x_hi, y_lo, y_hi = domain if domain is not None else surface.domain
    dx, dy = spacing
    nx = int(math.floor((x_hi - x_lo) / dx + 1e-9)) + 1
    ny = int(math.floor((y_hi - y_lo) / dy + 1e-9)) + 1
    xs = x_lo + dx * np.arange(nx)
    ys = y_lo + dy * np.arange(ny)
    X, Y = np.meshgrid(xs, ys)
    z = surface.eval(X, Y)[::-1]
    return HeightField(z, (dx, dy), (x_lo, y_lo))


def heightfield_to_csv(hf: HeightField, path) -> None:
    """Row-major CSV in image row order, preceded by a two-line header."""
    dx, dy = hf.spacing
    x0, y0 = hf.origin
    lines = [
        "# nx ny dx dy x0 y0 scale",
        f"# {hf.nx} {hf.ny} {dx!r} {dy!r} {x0!r} {y0!r} {hf.elevation_scale!r}",
    ]
    for row in hf.elevations:
        lines.append(",".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def heightfield_from_csv(path) -> HeightField:
    text = Path(path).read_text().splitlines()
    meta = text[1].lstrip("#").split()
    nx, ny = int(meta[0]), int(meta[1])
    dx, dy, x0, y0, scale = (float(v) for v in meta[2:7])
    z = np.array([[float(v) for v in line.split(",")] for line in text[2:] if line.strip()])
    if z.shape != (ny, nx):
        raise ValueError(f"CSV body shape {z.shape} does not match header ({ny}, {nx})")
    return HeightField(z, (dx, dy), (x0, y0), scale)


# ---------------------------------------------------------------------------
# analytic surfaces and curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AnalyticSurface:
    """Closed-form graph surface with exact first and second derivatives.

    ``f``, ``grad`` and ``hess`` accept numpy arrays; ``grad`` returns
    ``(p, q)`` and ``hess`` returns ``(fxx, fxy, fyy)``.
    """

    name: str
    f: Callable
    grad: Callable
    hess: Callable
    domain: tuple[float, float, float, float]
    params: dict = field(default_factory=dict)

    def contains(self, x, y):
        return _in_box(np.asarray(x, float), np.asarray(y, float), self.domain)

    def eval(self, x, y):
        return self.f(np.asarray(x, float), np.asarray(y, float))

    def gradient(self, x, y):
        return self.grad(np.asarray(x, float), np.asarray(y, float))

    def hessian(self, x, y):
        return self.hess(np.asarray(x, float), np.asarray(y, float))

    def hessian_matrix(self, x: float, y: float) -> np.ndarray:
        fxx, fxy, fyy = self.hessian(x, y)
        return np.array([[fxx, fxy], [fxy, fyy]], dtype=float)


@dataclass(frozen=True, eq=False)
class AnalyticCurve:
    """Closed-form curve ``y = f(x)``.

    At a declared kink the derivative callables return the right-hand
    derivative.
    """

    name: str
    f: Callable
    deriv: Callable
    deriv2: Callable
    domain: tuple[float, float]
    nonsmooth_points: tuple[float, ...] = ()
    params: dict = field(default_factory=dict)

    @property
    def smooth_everywhere(self) -> bool:
        return not self.nonsmooth_points

    def contains(self, x):
        lo, hi = self.domain
        s = _DOMAIN_SLACK * max(1.0, hi - lo)
        x = np.asarray(x, float)
        return (x >= lo - s) & (x <= hi + s)

    def eval(self, x):
        return self.f(np.asarray(x, float))

    def derivative(self, x):
        return self.deriv(np.asarray(x, float))

    def second_derivative(self, x):
        return self.deriv2(np.asarray(x, float))


@dataclass(frozen=True, eq=False)
class ParametricSurface:
    """Surface given by a parameterisation plus an implicit equation.

    ``point(u, v)`` returns a 3-vector; ``implicit(X)`` vanishes on the
    surface (NaN where undefined) and ``implicit_grad(X)`` is its gradient,
    whose direction fixes the surface orientation.
    """

    name: str
    point: Callable
    implicit: Callable
    implicit_grad: Callable
    params: dict = field(default_factory=dict)

    def unit_normal(self, X) -> np.ndarray:
        g = np.asarray(self.implicit_grad(np.asarray(X, float)))
        return g / np.linalg.norm(g, axis=-1, keepdims=True)


def _check_point(surface, x, y):
    if not (math.isfinite(x) and math.isfinite(y)) or not bool(surface.contains(x, y)):
        raise OutOfDomainError(f"point ({x}, {y}) outside domain {surface.domain}")


def gradient_at(surface, x: float, y: float) -> tuple[float, float]:
    """Surface gradient ``(p, q)`` at one point."""
    _check_point(surface, x, y)
    p, q = surface.gradient(x, y)
    return float(p), float(q)


def hessian_at(surface, x: float, y: float) -> np.ndarray:
    _check_point(surface, x, y)
    fxx, fxy, fyy = surface.hessian(x, y)
    return np.array([[fxx, fxy], [fxy, fyy]], dtype=float)


def gaussian_curvature(surface, x, y):
    """Vectorised Gaussian curvature of a graph surface (no domain check)."""
    p, q = surface.gradient(x, y)
    fxx, fxy, fyy = surface.hessian(x, y)
    return (fxx * fyy - fxy * fxy) / (1.0 + p * p + q * q) ** 2


def gaussian_curvature_at(surface, x: float, y: float) -> float:
    _check_point(surface, x, y)
    return float(gaussian_curvature(surface, x, y))


# --- catalog ----------------------------------------------------------------


def _positive(params, key, default):
    val = float(params.get(key, default))
    if not (math.isfinite(val) and val > 0):
        raise ValueError(f"parameter {key!r} must be positive, got {val}")
    return val


def _interval(params, default):
    lo, hi = (float(v) for v in params.get("domain", default))
    if not hi > lo:
        raise ValueError(f"empty domain [{lo}, {hi}]")
    return lo, hi


def _box(params, default):
    dom = params.get("domain", default)
    if len(dom) == 2:
        dom = (dom[0], dom[1], dom[0], dom[1])
    x_lo, x_hi, y_lo, y_hi = (float(v) for v in dom)
    if not (x_hi > x_lo and y_hi > y_lo):
        raise ValueError(f"empty domain {dom}")
    return x_lo, x_hi, y_lo, y_hi


def _zeros_like(x):
    return np.zeros_like(np.asarray(x, float))


def _plane(params):
    a = float(params.get("a", 0.0))
    b = float(params.get("b", 0.0))
    c = float(params.get("c", 0.0))
    dom = _box(params, (-5.0, 5.0))
    return AnalyticSurface(
        "plane",
        lambda x, y: a * x + b * y + c,
        lambda x, y: (_zeros_like(x + y) + a, _zeros_like(x + y) + b),
        lambda x, y: (_zeros_like(x + y), _zeros_like(x + y), _zeros_like(x + y)),
        dom,
        {"a": a, "b": b, "c": c},
    )


def _cos_plus_cos(params):
    dom = _box(params, (-5.0, 5.0))
    return AnalyticSurface(
        "cos_plus_cos",
        lambda x, y: np.cos(x) + np.cos(y),
        lambda x, y: (-np.sin(x) + 0 * y, -np.sin(y) + 0 * x),
        lambda x, y: (-np.cos(x) + 0 * y, _zeros_like(x + y), -np.cos(y) + 0 * x),
        dom,
    )


def _cos2_plus_cos2(params):
    dom = _box(params, (-5.0, 5.0))
    return AnalyticSurface(
        "cos2_plus_cos2",
        lambda x, y: np.cos(x) ** 2 + np.cos(y) ** 2,
        lambda x, y: (-np.sin(2 * x) + 0 * y, -np.sin(2 * y) + 0 * x),
        lambda x, y: (-2 * np.cos(2 * x) + 0 * y, _zeros_like(x + y), -2 * np.cos(2 * y) + 0 * x),
        dom,
    )


def _sphere(params):
    R = _positive(params, "radius", 2.0)
    dom = _box(params, (-0.65 * R, 0.65 * R))
    x_lo, x_hi, y_lo, y_hi = dom
    if max(x_lo**2, x_hi**2) + max(y_lo**2, y_hi**2) >= R * R:
        raise ValueError("sphere patch domain must lie strictly inside the disc of radius R")

    def s(x, y):
        return np.sqrt(R * R - x * x - y * y)

    def hess(x, y):
        s3 = s(x, y) ** 3
        return (R * R - y * y) / s3, x * y / s3, (R * R - x * x) / s3

    return AnalyticSurface(
        "sphere",
        lambda x, y: -s(x, y),
        lambda x, y: (x / s(x, y), y / s(x, y)),
        hess,
        dom,
        {"radius": R},
    )


def _tractrix_height(rho, a):
    return a * np.arccosh(a / rho) - np.sqrt(a * a - rho * rho)


def _pseudosphere(params):
    a = _positive(params, "a", 2.0)
    dom = _box(params, (0.2 * a, 0.9 * a, -0.3 * a, 0.3 * a))
    x_lo, x_hi, y_lo, y_hi = dom
    rho_max2 = max(x_lo**2, x_hi**2) + max(y_lo**2, y_hi**2)
    rho_min = math.hypot(min(max(0.0, x_lo), x_hi), min(max(0.0, y_lo), y_hi))
    if rho_max2 >= a * a or rho_min <= 0:
        raise ValueError("pseudosphere patch must lie inside the annulus 0 < rho < a")

    def radial(x, y):
        rho = np.hypot(x, y)
        sq = np.sqrt(a * a - rho * rho)
        g1 = -sq / rho
        g2 = a * a / (rho * rho * sq)
        return rho, g1, g2

    def grad(x, y):
        rho, g1, _ = radial(x, y)
        return g1 * x / rho, g1 * y / rho

    def hess(x, y):
        rho, g1, g2 = radial(x, y)
        r2 = rho * rho
        r3 = r2 * rho
        fxx = g2 * x * x / r2 + g1 * y * y / r3
        fyy = g2 * y * y / r2 + g1 * x * x / r3
        fxy = (g2 - g1 / rho) * x * y / r2
        return fxx, fxy, fyy

    return AnalyticSurface(
        "pseudosphere",
        lambda x, y: _tractrix_height(np.hypot(x, y), a),
        grad,
        hess,
        dom,
        {"a": a},
    )


def _sine(params):
    dom = _interval(params, (-5.0, 5.0))
    return AnalyticCurve("sine", np.sin, np.cos, lambda x: -np.sin(x), dom)


def _square(params):
    dom = _interval(params, (-5.0, 5.0))
    return AnalyticCurve(
        "square", lambda x: x * x, lambda x: 2.0 * x, lambda x: 2.0 + 0.0 * x, dom
    )


def _exp_sqrt_abs(params):
    dom = _interval(params, (-5.0, 5.0))

    def deriv(x):
        r = np.sqrt(np.abs(x))
        sgn = np.where(x >= 0, 1.0, -1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(r > 0, sgn * np.exp(r) / (2.0 * np.where(r > 0, r, 1.0)), np.inf)

    def deriv2(x):
        r = np.sqrt(np.abs(x))
        with np.errstate(divide="ignore", invalid="ignore"):
            rr = np.where(r > 0, r, 1.0)
            return np.where(r > 0, np.exp(r) * (rr - 1.0) / (4.0 * rr**3), -np.inf)

    return AnalyticCurve(
        "exp_sqrt_abs", lambda x: np.exp(np.sqrt(np.abs(x))), deriv, deriv2, dom, (0.0,)
    )


def _absolute_slope(params):
    m = float(params.get("m", 1.0))
    if not (math.isfinite(m) and m != 0):
        raise ValueError(f"slope m must be finite and non-zero, got {m}")
    am = abs(m)
    dom = _interval(params, (-5.0, 5.0))
    return AnalyticCurve(
        "absolute_slope",
        lambda x: np.abs(m * x),
        lambda x: np.where(x >= 0, am, -am),
        lambda x: 0.0 * x,
        dom,
        (0.0,),
        {"m": m},
    )


def _constant(params):
    c = float(params.get("c", 0.0))
    dom = _interval(params, (-5.0, 5.0))
    return AnalyticCurve(
        "constant", lambda x: 0.0 * x + c, lambda x: 0.0 * x, lambda x: 0.0 * x, dom, (), {"c": c}
    )


SURFACE_CATALOG: dict[str, Callable] = {
    "plane": _plane,
    "cos_plus_cos": _cos_plus_cos,
    "cos2_plus_cos2": _cos2_plus_cos2,
    "sphere": _sphere,
    "pseudosphere": _pseudosphere,
}

CURVE_CATALOG: dict[str, Callable] = {
    "sine": _sine,
    "square": _square,
    "exp_sqrt_abs": _exp_sqrt_abs,
    "absolute_slope": _absolute_slope,
    "constant": _constant,
}


def builtin_surface(name: str, **params):
    """Look up a catalog surface or curve by name.

    Surfaces: plane (a, b, c), cos_plus_cos, cos2_plus_cos2, sphere (radius),
    pseudosphere (a). Curves: sine, square, exp_sqrt_abs, absolute_slope (m),
    constant (c). All accept ``domain``.
    """
    factory = SURFACE_CATALOG.get(name) or CURVE_CATALOG.get(name)
    if factory is None:
        known = ", ".join(sorted(SURFACE_CATALOG) + sorted(CURVE_CATALOG))
        raise UnknownSurfaceError(f"unknown surface {name!r}; known: {known}")
    return factory(params)


# --- parametric forms ---------------------------------------------------------


def _param_sphere(params):
    R = _positive(params, "radius", 2.0)

    def point(polar, azimuth):
        return R * np.array(
            [math.sin(polar) * math.cos(azimuth), math.sin(polar) * math.sin(azimuth), math.cos(polar)]
        )

    def implicit(X):
        return np.sum(X * X, axis=-1) - R * R

    def implicit_grad(X):
        return 2.0 * X

    return ParametricSurface("sphere", point, implicit, implicit_grad, {"radius": R})


def _param_pseudosphere(params):
    a = _positive(params, "a", 2.0)

    def point(rho, azimuth):
        if not 0 < rho < a:
            raise ValueError(f"rho must lie in (0, a), got {rho}")
        return np.array(
            [rho * math.cos(azimuth), rho * math.sin(azimuth), float(_tractrix_height(rho, a))]
        )

    def implicit(X):
        rho = np.hypot(X[..., 0], X[..., 1])
        ok = (rho > 0) & (rho < a)
        safe = np.where(ok, rho, 0.5 * a)
        return np.where(ok, X[..., 2] - _tractrix_height(safe, a), np.nan)

    def implicit_grad(X):
        rho = np.hypot(X[..., 0], X[..., 1])
        safe = np.where((rho > 0) & (rho < a), rho, np.nan)
        k = np.sqrt(a * a - safe * safe) / (safe * safe)
        return np.stack([k * X[..., 0], k * X[..., 1], np.ones_like(safe)], axis=-1)

    return ParametricSurface("pseudosphere", point, implicit, implicit_grad, {"a": a})


PARAMETRIC_CATALOG: dict[str, Callable] = {
    "sphere": _param_sphere,
    "pseudosphere": _param_pseudosphere,
}


def parametric_surface(name: str, **params) -> ParametricSurface:
    """Sphere (parameters: polar, azimuth) or pseudosphere (rho, azimuth)."""
    try:
        return PARAMETRIC_CATALOG[name](params)
    except KeyError:
        raise UnknownSurfaceError(f"no parametric form for {name!r}") from None


def is_curve(obj) -> bool:
    return isinstance(obj, AnalyticCurve)


def describe(surface) -> dict:
    """Small JSON-friendly summary used by the CLI."""
    if isinstance(surface, AnalyticCurve):
        return {
            "name": surface.name,
            "kind": "curve",
            "domain": list(surface.domain),
            "nonsmooth_points": list(surface.nonsmooth_points),
            "params": dict(surface.params),
        }
    if isinstance(surface, HeightField):
        return {"name": "heightfield", "kind": "heightfield", "domain": list(surface.domain),
                "shape": list(surface.shape), "spacing": list(surface.spacing)}
    return {"name": surface.name, "kind": "surface", "domain": list(surface.domain),
            "params": dict(surface.params)}

