# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled region-growing and rasterisation kernels.

Semantics match ``_pykernels`` exactly, including floating-point operation
order, so both backends produce identical masks.
"""

import numpy as np

from libc.math cimport sqrt


cdef inline void _ring_offset(int n, int k, int* n1, int* n2) noexcept nogil:
    cdef int s = k // n
    cdef int t = k - s * n
    if s == 0:
        n1[0] = n - t
        n2[0] = t
    elif s == 1:
        n1[0] = -t
        n2[0] = n - t
    elif s == 2:
        n1[0] = -n + t
        n2[0] = -t
    else:
        n1[0] = t
        n2[0] = -n + t


def grow_rings(
    const double[:, ::1] p,
    const double[:, ::1] q,
    const unsigned char[:, ::1] inside,
    double dx,
    double dy,
    double r2max,
    double cos_eps,
    double p0,
    double q0,
    double norm0,
    int buff_limit=3,
    bint reset_buff=False,
):
    cdef int hx = (p.shape[0] - 1) // 2
    cdef int hy = (p.shape[1] - 1) // 2
    cdef int nmax = hx + hy
    mask_arr = np.zeros((p.shape[0], p.shape[1]), dtype=np.uint8)
    cdef unsigned char[:, ::1] mask = mask_arr
    cdef int n, k, n1, n2, a, b, count, buff = 0, rings = 0
    cdef bint any_inside
    cdef double ddx, ddy, pp, qq, c
    mask[hx, hy] = 1
    with nogil:
        for n in range(1, nmax + 1):
            rings = n
            count = 0
            any_inside = False
            for k in range(4 * n):
                _ring_offset(n, k, &n1, &n2)
                a = n1 + hx
                b = n2 + hy
                if a < 0 or a > 2 * hx or b < 0 or b > 2 * hy:
                    continue
                if not inside[a, b]:
                    continue
                any_inside = True
                ddx = n1 * dx
                ddy = n2 * dy
                if ddx * ddx + ddy * ddy <= r2max:
                    pp = p[a, b]
                    qq = q[a, b]
                    c = (p0 * pp + q0 * qq + 1.0) / (norm0 * sqrt(pp * pp + qq * qq + 1.0))
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
    return mask_arr, rings


def polygon_mask(const double[::1] xs, const double[::1] ys, const double[:, ::1] poly):
    """Even-odd point-in-polygon test for each ``(xs[i], ys[i])``."""
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t m = poly.shape[0]
    out_arr = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    cdef Py_ssize_t i, j, k
    cdef double x, y, xi, yi, xj, yj
    cdef bint inside
    with nogil:
        for i in range(n):
            x = xs[i]
            y = ys[i]
            inside = False
            j = m - 1
            for k in range(m):
                xi = poly[k, 0]
                yi = poly[k, 1]
                xj = poly[j, 0]
                yj = poly[j, 1]
                if (yi > y) != (yj > y):
                    if x < (xj - xi) * (y - yi) / (yj - yi) + xi:
                        inside = not inside
                j = k
            out[i] = inside
    return out_arr.view(np.bool_)
