import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epsortho import _kernels
from epsortho.region import OrthoParams, surface_region, tangent_region

needs_compiled = pytest.mark.skipif(_kernels.compiled is None, reason="compiled extension not built")


def _random_field(rng, hx, hy):
    shape = (2 * hx + 1, 2 * hy + 1)
    p = rng.normal(0, 0.2, shape)
    q = rng.normal(0, 0.2, shape)
    inside = (rng.random(shape) > 0.1).astype(np.uint8)
    inside[hx, hy] = 1
    return p, q, inside


@needs_compiled
@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    hx=st.integers(1, 25),
    hy=st.integers(1, 25),
    cos_eps=st.floats(0.9, 1.0),
    buff=st.integers(0, 4),
    reset=st.booleans(),
)
def test_grow_rings_backends_agree(seed, hx, hy, cos_eps, buff, reset):
    rng = np.random.default_rng(seed)
    p, q, inside = _random_field(rng, hx, hy)
    args = (p, q, inside, 0.01, 0.012, (0.01 * min(hx, hy)) ** 2, cos_eps, 0.05, -0.02,
            float(np.sqrt(0.05**2 + 0.02**2 + 1)), buff, reset)
    m_py, r_py = _kernels.python.grow_rings(*args)
    m_c, r_c = _kernels.compiled.grow_rings(*args)
    np.testing.assert_array_equal(np.asarray(m_c), m_py)
    assert r_c == r_py


@needs_compiled
@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(3, 40))
def test_polygon_mask_backends_agree(seed, n):
    rng = np.random.default_rng(seed)
    ang = np.sort(rng.uniform(0, 2 * np.pi, n))
    rad = rng.uniform(0.3, 1.0, n)
    poly = np.ascontiguousarray(np.column_stack([rad * np.cos(ang), rad * np.sin(ang)]))
    xs = rng.uniform(-1.1, 1.1, 500)
    ys = rng.uniform(-1.1, 1.1, 500)
    np.testing.assert_array_equal(
        np.asarray(_kernels.compiled.polygon_mask(xs, ys, poly), bool), _kernels.python.polygon_mask(xs, ys, poly)
    )


def test_polygon_mask_square():
    sq = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    xs = np.array([0.5, 1.5, -0.1, 0.99])
    ys = np.array([0.5, 0.5, 0.5, 0.01])
    np.testing.assert_array_equal(_kernels.polygon_mask(xs, ys, sq), [True, False, False, True])


def test_center_always_member():
    p = np.full((5, 5), 10.0)
    q = np.zeros((5, 5))
    inside = np.ones((5, 5), np.uint8)
    mask, _ = _kernels.grow_rings(p, q, inside, 1.0, 1.0, 100.0, 0.99, 0.0, 0.0, 1.0)
    assert np.asarray(mask).sum() == 1 and np.asarray(mask)[2, 2] == 1


@needs_compiled
@pytest.mark.parametrize("center", [(0.0, 0.0), (-1.0, -0.5), (2.0, 1.3)])
def test_regions_identical_across_backends(cos2, center):
    params = OrthoParams.from_degrees(12, 2.0, 0.01)
    a = surface_region(cos2, *center, params, kernels=_kernels.python)
    b = surface_region(cos2, *center, params, kernels=_kernels.compiled)
    assert a.members == b.members
    assert a.rings_visited == b.rings_visited


@needs_compiled
def test_tangent_region_identical_across_backends():
    from epsortho import parametric_surface

    params = OrthoParams.from_degrees(10, 2.0, 0.02)
    sph = parametric_surface("sphere", radius=2.0)
    a = tangent_region(sph, 1.0, 0.5, params, kernels=_kernels.python)
    b = tangent_region(sph, 1.0, 0.5, params, kernels=_kernels.compiled)
    assert a.members == b.members


def test_backend_name():
    assert _kernels.BACKEND in ("compiled", "python")


def test_env_forces_python_backend():
    import os
    import subprocess
    import sys

    env = dict(os.environ, EPSORTHO_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import epsortho._kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
