import math

import numpy as np
import pytest

from epsortho import builtin_surface, load_dem, smooth


def write_pgm(path, pixels, binary=True, maxval=255):
    pixels = np.asarray(pixels, dtype=np.uint8)
    h, w = pixels.shape
    if binary:
        path.write_bytes(f"P5\n{w} {h}\n{maxval}\n".encode() + pixels.tobytes())
    else:
        rows = "\n".join(" ".join(str(int(v)) for v in row) for row in pixels)
        path.write_text(f"P2\n# test\n{w} {h}\n{maxval}\n{rows}\n")
    return path


def terrain_pixels(n=96, seed=7):
    """Rolling synthetic terrain quantised to 8 bits."""
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:n, 0:n] / n
    z = np.zeros_like(x)
    for _ in range(6):
        cx, cy = rng.uniform(0, 1, 2)
        w = rng.uniform(0.1, 0.3)
        z += rng.uniform(0.3, 1.0) * np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2 * w * w))
    z = (z - z.min()) / (z.max() - z.min())
    return np.round(255 * z).astype(np.uint8)


@pytest.fixture
def pgm_file(tmp_path):
    return write_pgm(tmp_path / "terrain.pgm", terrain_pixels())


@pytest.fixture
def smoothed_dem(pgm_file):
    return smooth(load_dem(pgm_file, spacing=(0.05, 0.05), elevation_scale=1.5), 2.0)


@pytest.fixture
def plane():
    return builtin_surface("plane")


@pytest.fixture
def cos2():
    return builtin_surface("cos2_plus_cos2")


TAN10 = math.tan(math.radians(10))


# --- acceptance report ---------------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
