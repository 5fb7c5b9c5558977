"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 computation error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import approx as approx_mod
from . import imaging, region, surface, svg
from .errors import DegenerateRegionError, DemError, EpsOrthoError, NonSmoothPointError, OutOfDomainError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3

FORMATS = ("csv", "json", "svg", "all")


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# config
# ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    subcommand: str
    surface: object = None
    params: region.OrthoParams | None = None
    centers: list = field(default_factory=list)
    orientation: str = "up"
    fast_gradients: bool = False
    connectivity: bool = False
    buff_reset: bool = False
    n_directions: int = 16
    m_ratio: float = approx_mod.DEFAULT_M
    methods: tuple = tuple(approx_mod.METHOD_TAGS)
    out: Path | None = None
    formats: frozenset = frozenset({"csv", "json", "svg"})
    seed_test: bool = False
    extra: dict = field(default_factory=dict)


def _floats(text: str, n: int | None = None, what: str = "value") -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"invalid {what} {text!r}") from None
    if n is not None and len(vals) != n:
        raise ConfigError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    if not all(math.isfinite(v) for v in vals):
        raise ConfigError(f"{what} must be finite: {text!r}")
    return vals


def _surface_params(pairs) -> dict:
    params = {}
    for item in pairs or ():
        if "=" not in item:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        key, val = item.split("=", 1)
        params[key.strip()] = _floats(val, 1, f"parameter {key}")[0]
    return params


def _build_surface(ns):
    if bool(ns.surface) == bool(ns.dem):
        raise ConfigError("specify exactly one of --surface or --dem")
    if ns.dem:
        spacing = _floats(ns.spacing, 2, "--spacing")
        if min(spacing) <= 0:
            raise ConfigError("--spacing must be positive")
        if not ns.scale > 0:
            raise ConfigError("--scale must be positive")
        if ns.sigma < 0:
            raise ConfigError("--sigma must be >= 0")
        try:
            hf = surface.load_dem(ns.dem, tuple(spacing), ns.scale)
        except DemError as exc:
            raise ConfigError(f"cannot load DEM: {exc}") from None
        return surface.smooth(hf, ns.sigma)
    params = _surface_params(ns.param)
    if ns.domain:
        dom = _floats(ns.domain, None, "--domain")
        if len(dom) not in (2, 4):
            raise ConfigError("--domain takes lo,hi or x_lo,x_hi,y_lo,y_hi")
        params["domain"] = tuple(dom)
    try:
        return surface.builtin_surface(ns.surface, **params)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"invalid surface: {exc}") from None


def _config(ns) -> RunConfig:
    cfg = RunConfig(ns.command)
    if ns.command == "surfaces":
        cfg.out = Path(ns.out) if ns.out else None
        return cfg
    cfg.surface = _build_surface(ns)
    if not (0 < ns.epsilon_deg < 90):
        raise ConfigError("--epsilon-deg must lie in (0, 90)")
    if not ns.distance > 0:
        raise ConfigError("--distance must be positive")
    dy = ns.dy if ns.dy is not None else ns.dx
    if not (ns.dx > 0 and dy > 0):
        raise ConfigError("--dx/--dy must be positive")
    cfg.params = region.OrthoParams.from_degrees(ns.epsilon_deg, ns.distance, ns.dx, dy)
    cfg.centers = [tuple(_floats(c, 2, "--center")) for c in (ns.center or [])]
    cfg.orientation = ns.orientation
    cfg.fast_gradients = ns.fast_gradients
    cfg.connectivity = ns.connectivity
    cfg.buff_reset = ns.buff_reset
    if ns.n_directions < 3:
        raise ConfigError("--n-directions must be >= 3")
    cfg.n_directions = ns.n_directions
    if not ns.m_ratio > 1:
        raise ConfigError("--m-ratio must exceed 1")
    cfg.m_ratio = ns.m_ratio
    try:
        cfg.methods = tuple(approx_mod.canonical_method(m) for m in ns.methods.split(","))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if "elliptical" in cfg.methods and ns.n_directions % 2 and ns.command in ("approx", "compare"):
        raise ConfigError("elliptical approximation needs an even --n-directions")
    cfg.out = Path(ns.out) if ns.out else None
    cfg.formats = frozenset({"csv", "json", "svg"}) if ns.format == "all" else frozenset({ns.format})
    cfg.seed_test = ns.seed_test

    curve_cmds = ("bound-d", "curve-bounds")
    is_curve = surface.is_curve(cfg.surface)
    if ns.command in curve_cmds and not is_curve:
        raise ConfigError(f"{ns.command} needs a curve (e.g. --surface sine)")
    if ns.command in ("region", "approx", "compare") and is_curve:
        raise ConfigError(f"{ns.command} needs a surface, got curve {cfg.surface.name!r}")
    if ns.command in ("region", "approx", "compare", "curve-bounds") and not cfg.centers:
        raise ConfigError("at least one --center is required")
    if ns.command == "imaging":
        d_values = _floats(ns.d_values, None, "--d-values") if ns.d_values else [ns.distance]
        if not d_values or min(d_values) <= 0:
            raise ConfigError("imaging distances must be positive")
        if ns.samples < 2:
            raise ConfigError("--samples must be >= 2")
        cfg.extra.update(d_values=d_values, samples=ns.samples)
    if ns.command == "bound-d":
        if not ns.tolerance > 0:
            raise ConfigError("--tolerance must be positive")
        if ns.scan_resolution is not None and not ns.scan_resolution > 0:
            raise ConfigError("--scan-resolution must be positive")
        cfg.extra.update(tolerance=ns.tolerance, scan_resolution=ns.scan_resolution)
    if ns.command == "dem" and not ns.dem:
        raise ConfigError("dem needs --dem PATH")
    return cfg


# ---------------------------------------------------------------------------
# output staging: nothing touches the output directory until every file is ready
# ---------------------------------------------------------------------------


class Outputs:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.files: dict[str, str] = {}

    def add(self, name: str, text: str, kind: str):
        if kind in self.cfg.formats:
            self.files[name] = text

    def commit(self) -> list[Path]:
        out = self.cfg.out
        if out is None or not self.files:
            return []
        out.mkdir(parents=True, exist_ok=True)
        written = []
        try:
            for name in sorted(self.files):
                target = out / name
                fd, tmp = tempfile.mkstemp(dir=out, prefix=f".{name}.", suffix=".tmp")
                with os.fdopen(fd, "w", newline="\n") as fh:
                    fh.write(self.files[name])
                os.replace(tmp, target)
                written.append(target)
        except OSError:
            for path in written:
                path.unlink(missing_ok=True)
            raise
        return written


def _num(v) -> str:
    return repr(float(v))


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_num(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_surfaces(cfg, out: Outputs):
    listing = {
        "surfaces": {name: surface.describe(f({})) for name, f in surface.SURFACE_CATALOG.items()},
        "curves": {name: surface.describe(f({})) for name, f in surface.CURVE_CATALOG.items()},
    }
    out.cfg.formats = frozenset({"json"})
    out.add("surfaces.json", _json(listing), "json")
    print(_json(listing), end="")


def cmd_dem(cfg, out: Outputs):
    hf = cfg.surface
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "hf.csv"
        surface.heightfield_to_csv(hf, path)
        out.add("heightfield.csv", path.read_text(), "csv")
    z = hf.elevations
    info = {
        "shape": list(hf.shape),
        "spacing": list(hf.spacing),
        "domain": list(hf.domain),
        "min": float(z.min()),
        "max": float(z.max()),
        "mean": float(z.mean()),
    }
    out.add("heightfield.json", _json(info), "json")
    print(_json(info), end="")


def cmd_imaging(cfg, out: Outputs):
    s = cfg.surface
    d_values = cfg.extra["d_values"]
    n = cfg.extra["samples"]
    if surface.is_curve(s):
        xs = imaging.scan_points(s, (s.domain[1] - s.domain[0]) / (n - 1))
        rows, families, summary = [], [], []
        for d in d_values:
            xp, yp = imaging._curve_offsets(s, xs, d, cfg.orientation)
            report = imaging.curve_validity(s, d, orientation=cfg.orientation)
            families.append((d, xp, yp, report.violations))
            summary.append({"d": d, "valid": report.valid, "violations": len(report.violations)})
            rows.extend(zip(xs, s.eval(xs), xp, yp, np.full(xs.shape, d)))
        out.add("imaging.csv", _csv(["x", "y", "x'", "y'", "d"], rows), "csv")
        out.add("imaging.svg", svg.curves_svg(s, families), "svg")
    else:
        x_lo, x_hi, y_lo, y_hi = s.domain
        X, Y = np.meshgrid(np.linspace(x_lo, x_hi, n), np.linspace(y_lo, y_hi, n), indexing="ij")
        X, Y = X.ravel(), Y.ravel()
        Z = s.eval(X, Y)
        rows, summary = [], []
        for d in d_values:
            xp, yp, zp = imaging.imaging_surface(s, X, Y, d, cfg.orientation)
            below = np.asarray(s.contains(xp, yp)) & np.isfinite(zp)
            zb = np.full(xp.shape, np.nan)
            zb[below] = s.eval(xp[below], yp[below])
            bad = int(np.count_nonzero(below & (zp < zb)))
            summary.append({"d": d, "points_below_surface": bad})
            rows.extend(zip(X, Y, Z, xp, yp, zp, np.full(X.shape, d)))
        out.add("imaging.csv", _csv(["x", "y", "z", "x'", "y'", "z'", "d"], rows), "csv")
    out.add("imaging.json", _json({"orientation": cfg.orientation, "families": summary}), "json")
    for item in summary:
        print(" ".join(f"{k}={v}" for k, v in item.items()))


def cmd_bound_d(cfg, out: Outputs):
    ub = imaging.upper_bound_D(cfg.surface, cfg.extra["tolerance"], cfg.extra["scan_resolution"])
    print(str(ub))
    out.add(
        "bound_d.json",
        _json({"curve": cfg.surface.name, "kind": ub.kind, "value": ub.value,
               "tolerance": ub.tolerance, "domain": list(ub.domain)}),
        "json",
    )


def cmd_curve_bounds(cfg, out: Outputs):
    rows, records = [], []
    for x0, _ in cfg.centers:
        b = region.curve_bounds(cfg.surface, x0, cfg.params)
        rows.append((b.center_x, b.x_left, b.x_right, b.width))
        records.append({"center_x": b.center_x, "x_left": b.x_left, "x_right": b.x_right})
        print(f"x0={b.center_x:g} left={b.x_left:.6g} right={b.x_right:.6g}")
    out.add("curve_bounds.csv", _csv(["center_x", "x_left", "x_right", "width"], rows), "csv")
    out.add("curve_bounds.json", _json(records), "json")


def _regions(cfg):
    regs = []
    for x0, y0 in cfg.centers:
        r = region.surface_region(
            cfg.surface, x0, y0, cfg.params,
            connectivity_filter=cfg.connectivity,
            fast_gradients=cfg.fast_gradients,
            reset_buff=cfg.buff_reset,
        )
        if cfg.seed_test and not cfg.connectivity:
            oracle = region.brute_force_region(cfg.surface, x0, y0, cfg.params, cfg.fast_gradients)
            if oracle.members != r.members:
                raise DegenerateRegionError(f"oracle mismatch at ({x0}, {y0})")
        regs.append(r)
    return regs


def cmd_region(cfg, out: Outputs):
    regs = _regions(cfg)
    summary = []
    for k, r in enumerate(regs):
        out.add(f"region_{k}_members.csv", _csv(["x", "y"], r.points.tolist()), "csv")
        out.add(f"region_{k}_boundary.csv", _csv(["x", "y"], r.boundary.tolist()), "csv")
        summary.append({"center": list(r.center), "members": r.count, "area": r.area,
                        "rings_visited": r.rings_visited, "connectivity_filtered": r.connectivity_filtered})
        print(f"center=({r.center[0]:g}, {r.center[1]:g}) members={r.count} area={r.area:.6g}")
    out.add("region.svg", svg.region_svg(cfg.surface, regs), "svg")
    out.add("region.json", _json(summary), "json")


def _kmax(cfg):
    if "circular_two" in cfg.methods:
        return approx_mod.max_abs_curvature(cfg.surface, cfg.params)
    return None


def cmd_approx(cfg, out: Outputs):
    k_max = _kmax(cfg)
    records = []
    for k, (x0, y0) in enumerate(cfg.centers):
        reg = region.surface_region(cfg.surface, x0, y0, cfg.params, fast_gradients=cfg.fast_gradients)
        approxes = [
            approx_mod.build_approx(m, cfg.surface, x0, y0, cfg.params, cfg.n_directions,
                                    cfg.m_ratio, k_max, fast_gradients=cfg.fast_gradients)
            for m in cfg.methods
        ]
        for a in approxes:
            rec = a.to_dict()
            records.append(rec)
            out.add(f"approx_{k}_{a.method_tag}.csv", _csv(["x", "y"], a.outline().tolist()), "csv")
        out.add(f"approx_{k}.svg", svg.approx_svg(reg, approxes), "svg")
        print(f"center=({x0:g}, {y0:g}) " + " ".join(a.method_tag for a in approxes))
    out.add("approx.json", _json(records), "json")


def cmd_compare(cfg, out: Outputs):
    k_max = _kmax(cfg)
    records, rows = [], []
    for k, (x0, y0) in enumerate(cfg.centers):
        reg = region.surface_region(cfg.surface, x0, y0, cfg.params, fast_gradients=cfg.fast_gradients)
        results = approx_mod.compare(
            cfg.surface, x0, y0, cfg.params, cfg.methods, cfg.n_directions, cfg.m_ratio, k_max,
            region=reg, fast_gradients=cfg.fast_gradients,
        )
        for res in results:
            rec = {"center": [x0, y0], **res.to_dict()}
            records.append(rec)
            rows.append(f"{_num(x0)},{_num(y0)},{res.method_tag},{res.method},"
                        f"{_num(res.iou)},{_num(res.area_ratio)},{_num(res.hausdorff)},{_num(res.build_time)}")
            print(f"center=({x0:g}, {y0:g}) {res.method:<13} iou={res.iou:.4f} "
                  f"area_ratio={res.area_ratio:.4f} hausdorff={res.hausdorff:.4g} t={res.build_time * 1e3:.3f}ms")
        out.add(f"compare_{k}.svg", svg.approx_svg(reg, [r.extra["approx"] for r in results]), "svg")
    header = "center_x,center_y,method_tag,method,iou,area_ratio,hausdorff,build_time"
    out.add("compare.csv", header + "\n" + "\n".join(rows) + "\n", "csv")
    out.add("compare.json", _json(records), "json")


COMMANDS = {
    "surfaces": cmd_surfaces,
    "dem": cmd_dem,
    "imaging": cmd_imaging,
    "bound-d": cmd_bound_d,
    "curve-bounds": cmd_curve_bounds,
    "region": cmd_region,
    "approx": cmd_approx,
    "compare": cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="epsortho", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    g = common.add_argument_group("surface")
    g.add_argument("--surface", help="catalog name (see `epsortho surfaces`)")
    g.add_argument("--param", action="append", metavar="KEY=VALUE", help="catalog parameter")
    g.add_argument("--domain", help="lo,hi for curves or x_lo,x_hi,y_lo,y_hi for surfaces")
    g.add_argument("--dem", help="8-bit PGM heightmap")
    g.add_argument("--spacing", default="1,1", help="DEM cell size dx,dy (default 1,1)")
    g.add_argument("--scale", type=float, default=1.0, help="elevation of a white pixel")
    g.add_argument("--sigma", type=float, default=2.0, help="Gaussian smoothing in cells")
    o = common.add_argument_group("orthography")
    o.add_argument("--epsilon-deg", type=float, default=10.0)
    o.add_argument("--distance", type=float, default=2.0, help="working distance d")
    o.add_argument("--dx", type=float, default=0.01)
    o.add_argument("--dy", type=float, default=None)
    o.add_argument("--center", action="append", metavar="X,Y", help="region center (repeatable)")
    o.add_argument("--orientation", choices=("up", "down"), default="up")
    o.add_argument("--fast-gradients", action="store_true", help="first-order gradient updates")
    o.add_argument("--connectivity", action="store_true", help="keep the 8-connected center component")
    o.add_argument("--buff-reset", action="store_true", help="reset the empty-ring counter on success")
    o.add_argument("--n-directions", type=int, default=16)
    o.add_argument("--m-ratio", type=float, default=approx_mod.DEFAULT_M)
    o.add_argument("--methods", default=",".join(approx_mod.METHOD_TAGS))
    o.add_argument("--out", help="output directory")
    o.add_argument("--format", choices=FORMATS, default="all")
    o.add_argument("--seed-test", action="store_true", help=argparse.SUPPRESS)

    sub.add_parser("surfaces", help="list the analytic catalog").add_argument("--out")
    sub.add_parser("dem", parents=[common], help="load, smooth and export a DEM")
    p = sub.add_parser("imaging", parents=[common], help="imaging curves/surfaces")
    p.add_argument("--d-values", help="comma-separated working distances")
    p.add_argument("--samples", type=int, default=401)
    p = sub.add_parser("bound-d", parents=[common], help="upper bound D on d for a curve")
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.add_argument("--scan-resolution", type=float, default=None)
    sub.add_parser("curve-bounds", parents=[common], help="orthographic bounds on a curve")
    sub.add_parser("region", parents=[common], help="orthographic regions on a surface")
    sub.add_parser("approx", parents=[common], help="boundary approximations")
    sub.add_parser("compare", parents=[common], help="accuracy/time comparison")
    return parser


def _join_negative_values(argv):
    # "--center -1,-0.5" would otherwise be read as an unknown option
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt[:1] == "-" and (nxt[1:2].isdigit() or nxt[1:2] == "."):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


_VALUE_FLAGS = {"--center", "--domain", "--d-values"}


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    ns = parser.parse_args(_join_negative_values(argv))
    try:
        cfg = _config(ns)
    except (ConfigError, ValueError) as exc:
        print(f"epsortho: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Outputs(cfg)
    try:
        COMMANDS[cfg.subcommand](cfg, out)
    except (OutOfDomainError, DegenerateRegionError, NonSmoothPointError, EpsOrthoError, ValueError) as exc:
        print(f"epsortho: computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    try:
        for path in out.commit():
            print(f"wrote {path}", file=sys.stderr)
    except OSError as exc:
        print(f"epsortho: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
