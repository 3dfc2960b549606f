"""Fixed-point location, non-degeneracy, and spectral stability classification.

Fixed points are found by Newton iteration on the two-dimensional chart
(x1, x2) with x3 = 1 - x1 - x2, which eliminates the simplex constraint
analytically.  Stability is read off the Jacobian spectrum after removing
the structural eigenvalue: a quadratic stochastic operator preserves the
coordinate sum, so its Jacobian always has left eigenvector (1, 1, 1) with
eigenvalue 2, which says nothing about stability inside the simplex.  The
remaining pair of eigenvalue moduli drives the classification.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numba
import numpy as np

from .errors import DimensionError, NotAFixedPointError
from .operators import OperatorSpec, apply, jacobian
from .simplex import CENTER, SimplexPoint, distance, make_point

FP_RESIDUAL_TOL = 1e-10     # residual bound for a reported fixed point
SPECTRAL_TOL = 1e-9         # |modulus - 1| below this means non-hyperbolic
DEDUP_RADIUS = 1e-8
NEWTON_SINGULAR_TOL = 1e-14

NEWTON_CONVERGED = 0
NEWTON_NO_CONVERGENCE = 1
NEWTON_SINGULAR = 2


class Stability(Enum):
    ATTRACTING = "attracting"
    REPELLING = "repelling"
    NON_HYPERBOLIC = "non-hyperbolic"
    SADDLE = "saddle"


@dataclass(frozen=True)
class FixedPointReport:
    location: SimplexPoint
    residual: float
    nondegeneracy: float
    spectrum: tuple          # all eigenvalues of the full Jacobian
    in_simplex_moduli: tuple  # moduli of the two non-structural eigenvalues
    stability: Stability

    def to_dict(self) -> dict:
        return {
            "location": list(self.location.coords),
            "residual": self.residual,
            "nondegeneracy": self.nondegeneracy,
            "spectrum": [[z.real, z.imag] for z in self.spectrum],
            "in_simplex_moduli": list(self.in_simplex_moduli),
            "stability": self.stability.value,
        }


def nondegeneracy_det(spec: OperatorSpec, x: SimplexPoint) -> float:
    """Determinant of the map-minus-identity matrix with its last row
    replaced by ones; nonzero means the fixed point is non-degenerate."""
    if spec.m != 3:
        raise DimensionError("non-degeneracy determinant needs m = 3")
    J = jacobian(spec, x)
    M = np.array([
        [J[0, 0] - 1.0, J[0, 1], J[0, 2]],
        [J[1, 0], J[1, 1] - 1.0, J[1, 2]],
        [1.0, 1.0, 1.0],
    ])
    return float(np.linalg.det(M))


@numba.njit(cache=True)
def _newton_chart3(P, seeds, max_iter, tol, singular_tol):
    n = seeds.shape[0]
    roots = np.empty((n, 2))
    status = np.empty(n, dtype=np.int8)
    for s in range(n):
        u1 = seeds[s, 0]
        u2 = seeds[s, 1]
        st = NEWTON_NO_CONVERGENCE
        for _ in range(max_iter):
            x1, x2 = u1, u2
            x3 = 1.0 - x1 - x2
            # image and Jacobian of the quadratic map at (x1, x2, x3)
            f1 = 0.0
            f2 = 0.0
            j = np.zeros((2, 3))
            for k in range(2):
                for l in range(3):
                    jkl = (P[0, l, k] * x1 + P[1, l, k] * x2
                           + P[2, l, k] * x3)
                    j[k, l] = 2.0 * jkl
            for i in range(3):
                xi = x1 if i == 0 else (x2 if i == 1 else x3)
                in1 = P[i, 0, 0] * x1 + P[i, 1, 0] * x2 + P[i, 2, 0] * x3
                in2 = P[i, 0, 1] * x1 + P[i, 1, 1] * x2 + P[i, 2, 1] * x3
                f1 += xi * in1
                f2 += xi * in2
            r1 = f1 - u1
            r2 = f2 - u2
            if abs(r1) <= tol and abs(r2) <= tol:
                st = NEWTON_CONVERGED
                break
            a = j[0, 0] - j[0, 2] - 1.0
            b = j[0, 1] - j[0, 2]
            c = j[1, 0] - j[1, 2]
            d = j[1, 1] - j[1, 2] - 1.0
            det = a * d - b * c
            if abs(det) < singular_tol:
                st = NEWTON_SINGULAR
                break
            u1 -= (d * r1 - b * r2) / det
            u2 -= (a * r2 - c * r1) / det
            if abs(u1) > 1e6 or abs(u2) > 1e6:
                break
        roots[s, 0] = u1
        roots[s, 1] = u2
        status[s] = st
    return roots, status


def triangular_lattice(points_per_edge: int = 15) -> list:
    """Barycentric lattice with the given number of points per edge."""
    n = points_per_edge - 1
    pts = []
    for i in range(n + 1):
        for jj in range(n + 1 - i):
            k = n - i - jj
            pts.append(SimplexPoint((i / n, jj / n, k / n)))
    return pts


def default_seeds() -> list:
    """Deterministic Newton seeds: a 15-per-edge lattice, the vertices,
    and the center."""
    seeds = triangular_lattice(15)
    seeds.append(CENTER)
    return seeds


def find_fixed_points(
    spec: OperatorSpec,
    seeds: list | None = None,
    max_iter: int = 60,
    tol: float = 1e-12,
) -> list:
    """Newton from every seed, deduplicated roots inside the simplex,
    each classified into a full report.  Seeds that fail to converge or hit
    a singular Newton matrix are skipped (recorded in report order only)."""
    if spec.m != 3:
        raise DimensionError("fixed-point search needs m = 3")
    if tol < 1e-14:
        raise ValueError("tol below 1e-14 is not resolvable in float64")
    if seeds is None:
        seeds = default_seeds()
    if not seeds:
        raise ValueError("need at least one seed")
    arr = np.array([[p[0], p[1]] for p in seeds], dtype=float)
    roots, status = _newton_chart3(
        spec.tensor.P, arr, max_iter, tol, NEWTON_SINGULAR_TOL)

    found = []
    for (u1, u2), st in zip(roots, status):
        if st != NEWTON_CONVERGED:
            continue
        coords = (u1, u2, 1.0 - u1 - u2)
        if min(coords) < -1e-9 or max(coords) > 1.0 + 1e-9:
            continue
        x = make_point(coords)
        if any(distance(x, prev) <= DEDUP_RADIUS for prev in found):
            continue
        found.append(x)
    found.sort(key=lambda p: p.coords)
    return [classify(spec, x) for x in found]


def _split_spectrum(J: np.ndarray):
    """Eigenvalues of J with the structural one identified by the left
    eigenvector best aligned with (1, ..., 1)."""
    vals, left = np.linalg.eig(J.T)
    ones = np.ones(J.shape[0])
    align = np.abs(left.conj().T @ ones) / np.linalg.norm(left, axis=0)
    k = int(np.argmax(align))
    in_moduli = tuple(sorted(abs(vals[i]) for i in range(len(vals)) if i != k))
    return tuple(vals), vals[k], in_moduli


def _stability_from_moduli(moduli, tol: float = SPECTRAL_TOL) -> Stability:
    if any(abs(m - 1.0) <= tol for m in moduli):
        return Stability.NON_HYPERBOLIC
    if all(m < 1.0 for m in moduli):
        return Stability.ATTRACTING
    if all(m > 1.0 for m in moduli):
        return Stability.REPELLING
    return Stability.SADDLE


def classify(
    spec: OperatorSpec,
    x: SimplexPoint,
    residual_tol: float = 1e-8,
) -> FixedPointReport:
    """Full spectral report at a (near-)fixed point."""
    residual = distance(apply(spec, x), x)
    if residual > residual_tol:
        raise NotAFixedPointError(
            f"residual {residual:.3e} exceeds {residual_tol:.1e}")
    J = jacobian(spec, x)
    spectrum, _, in_moduli = _split_spectrum(J)
    return FixedPointReport(
        location=x,
        residual=residual,
        nondegeneracy=nondegeneracy_det(spec, x),
        spectrum=spectrum,
        in_simplex_moduli=in_moduli,
        stability=_stability_from_moduli(in_moduli),
    )


def in_simplex_modulus_at_center(spec: OperatorSpec) -> float:
    """Largest in-simplex eigenvalue modulus of the Jacobian at the center."""
    _, _, moduli = _split_spectrum(jacobian(spec, CENTER))
    return moduli[-1]


def unit_modulus_alphas(
    family,
    grid_step: float = 1e-4,
    fit_halfwidth: int = 50,
) -> list:
    """Parameter values where the in-simplex modulus at the center passes
    through 1.

    Transversal sign changes of (modulus - 1) on the grid are refined by
    bisection.  A tangential touch (a grid minimum of |modulus - 1| near
    zero without a sign change) cannot be bisected and is refined instead
    by the vertex of a least-squares parabola through modulus^2 - 1 on the
    surrounding grid window; for the quadratic-in-alpha moduli of the
    mutation families this recovers the touch point to ~1e-12.

    ``family`` is a callable mapping alpha to an OperatorSpec.  Returns the
    refined alpha values in increasing order.
    """
    alphas = np.arange(grid_step, 1.0, grid_step)
    f = np.array([in_simplex_modulus_at_center(family(a)) - 1.0
                  for a in alphas])

    roots = []
    for i in range(len(alphas) - 1):
        if f[i] == 0.0:
            roots.append(float(alphas[i]))
        if f[i] * f[i + 1] < 0.0:
            lo, hi = alphas[i], alphas[i + 1]
            flo = f[i]
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                fm = in_simplex_modulus_at_center(family(mid)) - 1.0
                if fm == 0.0:
                    lo = hi = mid
                    break
                if flo * fm < 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            roots.append(float(0.5 * (lo + hi)))

    # tangential touches: interior local minima of |f| within grid resolution
    touch_scale = grid_step * grid_step  # curvature-limited depth of a touch
    for i in range(1, len(alphas) - 1):
        if f[i - 1] > f[i] < f[i + 1] and 0.0 < f[i] < touch_scale:
            lo = max(0, i - fit_halfwidth)
            hi = min(len(alphas), i + fit_halfwidth + 1)
            window = alphas[lo:hi]
            g = (1.0 + f[lo:hi]) ** 2 - 1.0
            c2, c1, _ = np.polyfit(window, g, 2)
            roots.append(float(-c1 / (2.0 * c2)))

    return sorted(roots)
