"""Imaging points, imaging curves and the working-distance upper bound D.

The camera for a surface point sits at distance ``d`` along the surface
normal. By default the normal points *up* (camera above the terrain); pass
``orientation="down"`` to reproduce the literal ``(p, q, -1)`` direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import NonSmoothPointError, OutOfDomainError
from .surface import AnalyticCurve

Orientation = Literal["up", "down"]

DOUBLING_CAP = 1e6
DEFAULT_SCAN_DIVISIONS = 2048
# how many halvings toward a kink the validity scan adds on each side
KINK_REFINEMENT_LEVELS = 30


@dataclass(frozen=True)
class ImagingSample:
    base: tuple[float, float, float]
    image: tuple[float, float, float]
    d: float
    unit_normal: tuple[float, float, float]


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    violations: tuple[float, ...]
    d: float


@dataclass(frozen=True)
class UpperBound:
    kind: Literal["finite", "infinite", "zero"]
    value: float | None
    tolerance: float
    domain: tuple[float, float]
    probes: tuple[tuple[float, bool], ...] = field(default=(), repr=False)

    def __str__(self):
        if self.kind == "finite":
            return f"finite {self.value:.6g}"
        return self.kind


def _check_orientation(orientation):
    if orientation not in ("up", "down"):
        raise ValueError(f"orientation must be 'up' or 'down', got {orientation!r}")


def unit_normal(p: float, q: float, orientation: Orientation = "down") -> np.ndarray:
    """Unit normal of a graph surface with gradient ``(p, q)``.

    ``"down"`` gives ``(p, q, -1) / sqrt(p^2 + q^2 + 1)``; ``"up"`` its negation.
    """
    _check_orientation(orientation)
    if not (math.isfinite(p) and math.isfinite(q)):
        raise ValueError(f"gradient must be finite, got ({p}, {q})")
    norm = math.sqrt(p * p + q * q + 1.0)
    n = np.array([p / norm, q / norm, -1.0 / norm])
    return -n if orientation == "up" else n


def imaging_point(surface, x: float, y: float, d: float, orientation: Orientation = "up") -> ImagingSample:
    """Camera position ``P + d * n`` for the surface point above ``(x, y)``."""
    if not d > 0:
        raise ValueError(f"working distance must be positive, got {d}")
    if not bool(surface.contains(x, y)):
        raise OutOfDomainError(f"point ({x}, {y}) outside domain {surface.domain}")
    p, q = (float(v) for v in surface.gradient(x, y))
    z = float(surface.eval(x, y))
    n = unit_normal(p, q, orientation)
    base = np.array([x, y, z], dtype=float)
    image = base + d * n
    return ImagingSample(tuple(base), tuple(float(v) for v in image), float(d), tuple(float(v) for v in n))


def imaging_surface(surface, xs, ys, d: float, orientation: Orientation = "up"):
    """Vectorised imaging surface: returns ``(X', Y', Z')`` arrays."""
    _check_orientation(orientation)
    xs = np.asarray(xs, float)
    ys = np.asarray(ys, float)
    p, q = surface.gradient(xs, ys)
    z = surface.eval(xs, ys)
    norm = np.sqrt(p * p + q * q + 1.0)
    sign = -1.0 if orientation == "up" else 1.0
    return xs + sign * d * p / norm, ys + sign * d * q / norm, z - sign * d / norm


def _curve_offsets(curve: AnalyticCurve, x, d, orientation="up"):
    fp = curve.derivative(x)
    norm = np.sqrt(1.0 + fp * fp)
    sign = 1.0 if orientation == "up" else -1.0
    with np.errstate(invalid="ignore", divide="ignore"):
        # a vertical tangent (infinite slope) sends the camera horizontally
        dxn = np.where(np.isinf(fp), np.sign(fp), fp / norm)
        dyn = np.where(np.isinf(fp), 0.0, 1.0 / norm)
    return x - sign * d * dxn, curve.eval(x) + sign * d * dyn


def imaging_curve(curve: AnalyticCurve, x: float, d: float, orientation: Orientation = "up") -> tuple[float, float]:
    """Imaging-curve point ``(x', y')`` for base point ``x`` at distance ``d``."""
    _check_orientation(orientation)
    if not d > 0:
        raise ValueError(f"working distance must be positive, got {d}")
    if not bool(curve.contains(x)):
        raise OutOfDomainError(f"x={x} outside domain {curve.domain}")
    if any(x == s for s in curve.nonsmooth_points):
        raise NonSmoothPointError(f"curve {curve.name} is not differentiable at x={x}")
    xp, yp = _curve_offsets(curve, np.float64(x), d, orientation)
    return float(xp), float(yp)


def scan_points(curve: AnalyticCurve, scan_resolution: float | None = None) -> np.ndarray:
    """Sample abscissae for a validity scan.

    A regular lattice over the domain; samples within half a step of a kink
    are replaced by points at ``h/2, h/4, ...`` on either side of it.
    """
    lo, hi = curve.domain
    h = scan_resolution if scan_resolution is not None else (hi - lo) / DEFAULT_SCAN_DIVISIONS
    if not h > 0:
        raise ValueError("scan_resolution must be positive")
    n = int(math.floor((hi - lo) / h + 1e-9))
    xs = lo + h * np.arange(n + 1)
    if xs[-1] < hi:
        xs = np.append(xs, hi)
    if curve.nonsmooth_points:
        keep = np.ones(xs.shape, bool)
        extra = []
        offsets = h * 0.5 ** np.arange(1, KINK_REFINEMENT_LEVELS + 1)
        for s in curve.nonsmooth_points:
            keep &= np.abs(xs - s) >= 0.5 * h
            for x in np.concatenate([s - offsets, s + offsets]):
                if lo <= x <= hi:
                    extra.append(x)
        xs = np.sort(np.concatenate([xs[keep], np.array(extra, float)]))
    return xs


def curve_validity(
    curve: AnalyticCurve,
    d: float,
    scan_resolution: float | None = None,
    orientation: Orientation = "up",
    xs: np.ndarray | None = None,
) -> ValidityReport:
    """Flag every sampled ``x`` whose imaging point falls strictly below the curve.

    Samples whose ``x'`` leaves the domain are skipped. Tangency (equality)
    is not a violation.
    """
    if xs is None:
        xs = scan_points(curve, scan_resolution)
    xp, yp = _curve_offsets(curve, xs, d, orientation)
    inside = curve.contains(xp) & np.isfinite(xp)
    fx = np.full(xs.shape, np.nan)
    fx[inside] = curve.eval(xp[inside])
    bad = inside & (yp < fx)
    violations = tuple(float(v) for v in xs[bad])
    return ValidityReport(not violations, violations, float(d))


def upper_bound_D(
    curve: AnalyticCurve,
    tolerance: float = 1e-3,
    scan_resolution: float | None = None,
    cap: float = DOUBLING_CAP,
) -> UpperBound:
    """Largest valid working distance, by doubling then bisection.

    Returns ``kind="zero"`` if the curve is already invalid at
    ``d = tolerance`` and ``kind="infinite"`` if doubling passes ``cap``
    without failing.
    """
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    xs = scan_points(curve, scan_resolution)
    probes: list[tuple[float, bool]] = []

    def valid(d):
        ok = curve_validity(curve, d, xs=xs).valid
        probes.append((d, ok))
        return ok

    if not valid(tolerance):
        return UpperBound("zero", None, tolerance, curve.domain, tuple(probes))
    upper = 1.0
    while valid(upper):
        upper *= 2.0
        if upper > cap:
            return UpperBound("infinite", None, tolerance, curve.domain, tuple(probes))

    lower = 0.0
    while upper - lower > tolerance:
        mid = 0.5 * (lower + upper)
        if valid(mid):
            lower = mid
        else:
            upper = mid
    return UpperBound("finite", 0.5 * (lower + upper), tolerance, curve.domain, tuple(probes))


def circle_imaging_point(radius: float, angle: float, d: float, inward: bool = True) -> tuple[float, float]:
    """Imaging point of a circle centred at the origin; inward normals converge on the centre."""
    r = radius - d if inward else radius + d
    return r * math.cos(angle), r * math.sin(angle)
