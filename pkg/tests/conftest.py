import numpy as np
import pytest

from qso_dynamics import kernels
from qso_dynamics.rng import SplitMix64
from qso_dynamics.simplex import SimplexPoint, make_point


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the numba kernels once so timed tests measure run time only."""
    P = np.full((3, 3, 3), 1.0 / 3.0)
    x = np.array([0.5, 0.3, 0.2])
    X = np.array([[0.5, 0.3, 0.2], [0.2, 0.5, 0.3]])
    PB = np.stack([P, P])
    kernels.raw_image(P, x)
    kernels.iterate_full(P, x, 2)
    kernels.iterate_tail(P, x, 1, 2)
    kernels.batch_advance(P, X.copy(), 2)
    kernels.batch_advance_per_row(PB, X.copy(), 2)
    kernels.batch_window_per_row(PB, X.copy(), 4, 2)
    kernels.batch_first_hit(P, X.copy(), 4, x, 1e-3)
    kernels.batch_phi_product_stats(P, X.copy(), 2)
    kernels.benettin(P, x, 4, 2)
    kernels.pair_distance_band(P, x, X[1], 1, 4)

    P2 = np.array([[[0.9, 0.1], [0.5, 0.5]], [[0.5, 0.5], [0.2, 0.8]]])
    x2 = np.array([0.4, 0.6])
    kernels.iterate_full(P2, x2, 2)


@pytest.fixture
def gen():
    return SplitMix64(20240901)


def random_points(gen: SplitMix64, n: int, m: int = 3) -> list:
    return [make_point(gen.simplex_point(m)) for _ in range(n)]


def random_interior_points(gen: SplitMix64, n: int, m: int = 3,
                           margin: float = 1e-3) -> list:
    return [make_point(gen.interior_simplex_point(m, margin))
            for _ in range(n)]


@pytest.fixture
def points_array():
    def make(gen: SplitMix64, n: int, m: int = 3) -> np.ndarray:
        return np.array([gen.simplex_point(m) for _ in range(n)])
    return make
