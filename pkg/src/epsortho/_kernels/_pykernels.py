"""Pure-Python kernels; reference semantics for the compiled backend."""

import math

import numpy as np


def ring_offset(n, k):
    s, t = divmod(k, n)
    if s == 0:
        return n - t, t
    if s == 1:
        return -t, n - t
    if s == 2:
        return -n + t, -t
    return t, -n + t


def grow_rings(p, q, inside, dx, dy, r2max, cos_eps, p0, q0, norm0, buff_limit=3, reset_buff=False):
    hx = (p.shape[0] - 1) // 2
    hy = (p.shape[1] - 1) // 2
    mask = np.zeros(p.shape, dtype=np.uint8)
    mask[hx, hy] = 1
    pl = p.tolist()
    ql = q.tolist()
    il = inside.tolist()
    buff = 0
    rings = 0
    for n in range(1, hx + hy + 1):
        rings = n
        count = 0
        any_inside = False
        for k in range(4 * n):
            n1, n2 = ring_offset(n, k)
            a = n1 + hx
            b = n2 + hy
            if a < 0 or a > 2 * hx or b < 0 or b > 2 * hy or not il[a][b]:
                continue
            any_inside = True
            ddx = n1 * dx
            ddy = n2 * dy
            if ddx * ddx + ddy * ddy <= r2max:
                pp = pl[a][b]
                qq = ql[a][b]
                c = (p0 * pp + q0 * qq + 1.0) / (norm0 * math.sqrt(pp * pp + qq * qq + 1.0))
                if c >= cos_eps:
                    mask[a, b] = 1
                    count += 1
        if not any_inside:
            break
        if count == 0:
            buff += 1
        elif reset_buff:
            buff = 0
        if buff > buff_limit:
            break
    return mask, rings


def polygon_mask(xs, ys, poly):
    """Even-odd point-in-polygon test for each ``(xs[i], ys[i])``."""
    pts = poly.tolist()
    m = len(pts)
    out = np.zeros(len(xs), dtype=bool)
    for i, (x, y) in enumerate(zip(xs.tolist(), ys.tolist())):
        inside = False
        j = m - 1
        for k in range(m):
            xi, yi = pts[k]
            xj, yj = pts[j]
            if (yi > y) != (yj > y) and x < (xj - xi) * (y - yi) / (yj - yi) + xi:
                inside = not inside
            j = k
        out[i] = inside
    return out
