"""Trajectories, iterated Cesaro means, convergence verdicts, Lyapunov-function
monitors, and line/sector cycle tracing.

The k-th order Cesaro mean is the k-fold running average of the trajectory:
order 0 is the trajectory itself and order k at row n is the mean of the
order (k-1) rows 0..n-1.  Row 0 of every order is the starting point by
convention (the defining average is empty there).  Divergence of these means
distinguishes the non-ergodic operators: their time averages keep swinging
on ever longer timescales instead of settling.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .errors import DimensionError, OrderTooLargeError, WindowTooLargeError
from .operators import Family, OperatorSpec, apply
from .simplex import Region, RegionLabel, SimplexPoint, classify_region, make_point

MAX_CESARO_ORDER = 5
CONV_TOL = 1e-9
DEFAULT_P_MAX = 12


@dataclass(frozen=True)
class Trajectory:
    operator: OperatorSpec
    start: SimplexPoint
    points: np.ndarray  # (n+1, m), row 0 is the start

    def __len__(self) -> int:
        return self.points.shape[0]

    def point(self, n: int) -> SimplexPoint:
        return make_point(self.points[n])


def iterate(spec: OperatorSpec, x0: SimplexPoint, n: int) -> Trajectory:
    """n applications of the operator, all n+1 points recorded."""
    if x0.m != spec.m:
        raise DimensionError(f"operator is {spec.m}-dimensional, point is {x0.m}")
    if n < 1:
        raise ValueError("need at least one step")
    pts = kernels.iterate_full(spec.tensor.P, x0.array, n)
    return Trajectory(spec, x0, pts)


@dataclass(frozen=True)
class CesaroTable:
    operator: OperatorSpec
    start: SimplexPoint
    order: int
    tables: tuple  # tables[k] is the (n+1, m) array of order-k rows

    def rows(self, k: int) -> np.ndarray:
        return self.tables[k]


def cesaro(spec: OperatorSpec, x0: SimplexPoint, k: int, n: int) -> CesaroTable:
    """Cesaro tables of all orders 0..k along an n-step trajectory."""
    if k < 0:
        raise ValueError("order must be non-negative")
    if k > MAX_CESARO_ORDER:
        raise OrderTooLargeError(f"order {k} exceeds {MAX_CESARO_ORDER}")
    traj = iterate(spec, x0, n).points
    tables = [traj]
    counts = np.arange(1, n + 1)[:, None]
    for _ in range(k):
        prev = tables[-1]
        nxt = np.empty_like(prev)
        nxt[0] = prev[0]
        nxt[1:] = np.cumsum(prev, axis=0)[:-1] / counts
        tables.append(nxt)
    return CesaroTable(spec, x0, k, tuple(tables))


class VerdictStatus(Enum):
    CONVERGED = "converged"
    PERIODIC = "periodic"
    OSCILLATING = "oscillating"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class ConvergenceVerdict:
    status: VerdictStatus
    limit: SimplexPoint | None = None
    period: int | None = None
    orbit: tuple | None = None
    window_diameter: float | None = None
    window: int = 0
    tol: float = CONV_TOL

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "limit": list(self.limit.coords) if self.limit else None,
            "period": self.period,
            "orbit": [list(p.coords) for p in self.orbit] if self.orbit else None,
            "window_diameter": self.window_diameter,
            "window": self.window,
            "tol": self.tol,
        }


def window_diameter(rows: np.ndarray) -> float:
    """Euclidean diameter of the coordinate-wise bounding box of the rows."""
    return float(np.linalg.norm(rows.max(axis=0) - rows.min(axis=0)))


def verdict(
    rows: np.ndarray,
    window: int | None = None,
    tol_conv: float = CONV_TOL,
    p_max: int = DEFAULT_P_MAX,
) -> ConvergenceVerdict:
    """Convergence / minimal-period / oscillation verdict on a row tail.

    The tail window (default: last 10 percent, at least 2 rows) is checked
    for collapse to a point, then for the minimal period p <= p_max with
    d(row[t+p], row[t]) < tol throughout.  A tail whose consecutive steps
    are below tol while its overall diameter is not (drift slower than the
    resolution) is UNDECIDED; anything else is OSCILLATING with the
    measured diameter.
    """
    rows = np.asarray(rows, dtype=float)
    n = rows.shape[0]
    if window is None:
        window = max(2, n // 10)
    if window > n:
        raise WindowTooLargeError(f"window {window} exceeds {n} rows")
    if window < 2:
        raise WindowTooLargeError("window must cover at least 2 rows")
    tail = rows[n - window:]
    diam = window_diameter(tail)
    if diam < tol_conv:
        return ConvergenceVerdict(
            VerdictStatus.CONVERGED, limit=make_point(tail[-1]),
            window_diameter=diam, window=window, tol=tol_conv)
    for p in range(1, min(p_max, window - 1) + 1):
        gaps = np.linalg.norm(tail[p:] - tail[:-p], axis=1)
        if gaps.max() < tol_conv:
            if p == 1:
                return ConvergenceVerdict(
                    VerdictStatus.UNDECIDED, window_diameter=diam,
                    window=window, tol=tol_conv)
            orbit = tuple(make_point(tail[-p + i]) for i in range(p))
            return ConvergenceVerdict(
                VerdictStatus.PERIODIC, period=p, orbit=orbit,
                window_diameter=diam, window=window, tol=tol_conv)
    return ConvergenceVerdict(
        VerdictStatus.OSCILLATING, window_diameter=diam,
        window=window, tol=tol_conv)


class LyapunovKind(Enum):
    PHI_PRODUCT = "product"
    PHI_QUADRATIC = "quadratic"


@dataclass(frozen=True)
class LyapunovTrace:
    kind: LyapunovKind
    values: np.ndarray
    multiplier_residuals: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "values": self.values.tolist(),
            "multiplier_residuals": (
                None if self.multiplier_residuals is None
                else self.multiplier_residuals.tolist()),
        }


def phi_product(coords: np.ndarray) -> np.ndarray:
    """|x1-x2| |x1-x3| |x2-x3| per row."""
    a = np.atleast_2d(coords)
    return (np.abs(a[:, 0] - a[:, 1]) * np.abs(a[:, 0] - a[:, 2])
            * np.abs(a[:, 1] - a[:, 2]))


def phi_quadratic(coords: np.ndarray) -> np.ndarray:
    """x1^2 + x2^2 + x3^2 - 1/3 per row (zero exactly at the center)."""
    a = np.atleast_2d(coords)
    return (a * a).sum(axis=1) - 1.0 / 3.0


def _is_v_half(spec: OperatorSpec) -> bool:
    return (spec.family is Family.V_ALPHA and spec.alpha is not None
            and abs(spec.alpha - 0.5) < 1e-15)


def lyapunov_trace(
    spec: OperatorSpec,
    traj: Trajectory,
    kind: LyapunovKind,
) -> LyapunovTrace:
    """Evaluate the requested Lyapunov function along a trajectory.

    For the product function on the half-mixing V operator the trace also
    reports the residual of the exact step identity
    phi(next) = phi(x) * prod_i (1 + 3 x_i) / 2.
    """
    if spec.m != 3:
        raise DimensionError("Lyapunov traces are defined on the 2-simplex")
    pts = traj.points
    if kind is LyapunovKind.PHI_QUADRATIC:
        return LyapunovTrace(kind, phi_quadratic(pts))
    values = phi_product(pts)
    residuals = None
    if _is_v_half(spec):
        mult = np.prod((1.0 + 3.0 * pts[:-1]) / 2.0, axis=1)
        residuals = values[1:] - values[:-1] * mult
    return LyapunovTrace(kind, values, residuals)


LINE_SUCCESSOR = {
    RegionLabel.L1: RegionLabel.L2,
    RegionLabel.L2: RegionLabel.L3,
    RegionLabel.L3: RegionLabel.L1,
}

SECTOR_SUCCESSOR = {
    RegionLabel.S1: RegionLabel.S2,
    RegionLabel.S2: RegionLabel.S3,
    RegionLabel.S3: RegionLabel.S4,
    RegionLabel.S4: RegionLabel.S5,
    RegionLabel.S5: RegionLabel.S6,
    RegionLabel.S6: RegionLabel.S1,
}


@dataclass(frozen=True)
class CycleTrace:
    regions: tuple           # Region per trajectory point
    violations: tuple        # indices t where successor rule broke t -> t+1
    boundary_landings: tuple  # indices t of exempted line/center landings

    @property
    def labels(self) -> tuple:
        return tuple(r.label for r in self.regions)

    def to_dict(self) -> dict:
        return {
            "labels": [r.label.value for r in self.regions],
            "orders": [list(r.order) for r in self.regions],
            "violations": list(self.violations),
            "boundary_landings": list(self.boundary_landings),
        }


def cycle_trace(spec: OperatorSpec, traj: Trajectory) -> CycleTrace:
    """Region labels along a trajectory with successor-rule bookkeeping.

    The expected successions are l1 -> l2 -> l3 -> l1 for line labels and
    S1 -> S2 -> ... -> S6 -> S1 for sector labels.  A step is a violation
    when both endpoints carry labels of the same kind and the successor is
    wrong; a sector point landing on a line or the center is exempted and
    recorded separately (a sector interior maps into the next closed
    sector, whose boundary includes lines).
    """
    if spec.m != 3:
        raise DimensionError("cycle tracing is defined on the 2-simplex")
    regions = tuple(classify_region(make_point(p)) for p in traj.points)
    violations = []
    landings = []
    for t in range(len(regions) - 1):
        cur, nxt = regions[t].label, regions[t + 1].label
        if cur.is_sector:
            if nxt.is_sector:
                if nxt is not SECTOR_SUCCESSOR[cur]:
                    violations.append(t)
            else:
                landings.append(t)
        elif cur.is_line:
            if nxt.is_line:
                if nxt is not LINE_SUCCESSOR[cur]:
                    violations.append(t)
            elif nxt is not RegionLabel.CENTER:
                violations.append(t)
            else:
                landings.append(t)
        # center maps to center; any exit would be a violation
        elif nxt is not RegionLabel.CENTER:
            violations.append(t)
    return CycleTrace(regions, tuple(violations), tuple(landings))


def step_identity_residuals(spec: OperatorSpec, coords: np.ndarray) -> np.ndarray:
    """Residuals of the three pairwise-difference identities of the
    half-mixing V operator at the given points:

        x'_1 - x'_2 = (x_1 - x_3)(1 + 3 x_2)/2
        x'_1 - x'_3 = (x_2 - x_3)(1 + 3 x_1)/2
        x'_2 - x'_3 = (x_2 - x_1)(1 + 3 x_3)/2

    Returns an (n, 3) array of absolute residuals, images taken through the
    operator's own evaluation path before renormalization.
    """
    from .operators import raw_image

    a = np.atleast_2d(np.asarray(coords, dtype=float))
    out = np.empty((a.shape[0], 3))
    for r, row in enumerate(a):
        y = raw_image(spec, make_point(row))
        x1, x2, x3 = row / row.sum()
        out[r, 0] = abs((y[0] - y[1]) - (x1 - x3) * (1.0 + 3.0 * x2) / 2.0)
        out[r, 1] = abs((y[0] - y[2]) - (x2 - x3) * (1.0 + 3.0 * x1) / 2.0)
        out[r, 2] = abs((y[1] - y[2]) - (x2 - x1) * (1.0 + 3.0 * x3) / 2.0)
    return out
