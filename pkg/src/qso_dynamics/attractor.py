"""Attractor estimation from trajectory tails: connected-component counts,
boundary proximity, rotation diagnostics, top Lyapunov exponents, scrambled
pair scanning, and parameter sweeps.

A cloud is the burn-in-discarded tail of one orbit.  Component counting is
single linkage on the epsilon-neighborhood graph, computed exactly for the
given epsilon (k-d tree range pairs plus union of the resulting graph).  The
calibrated epsilon is a multiple of the median nearest-neighbor distance of
the cloud; counts should be read together with their stability across an
epsilon ladder, since a quasiperiodic tail whose sampling window is too long
azimuthally fills its arcs and honestly merges into one component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from . import kernels
from .errors import (
    DimensionError,
    EpsilonNonPositiveError,
    NumericOverflowError,
    SamplesEmptyError,
)
from .operators import Family, OperatorSpec, v_alpha, w_alpha
from .simplex import SimplexPoint, to_planar
from .dynamics import VerdictStatus, verdict, window_diameter

ORIENTATION_EPS = 1e-6  # |angle sum| below samples * this is undetermined


class Orientation(Enum):
    CLOCKWISE = "clockwise"
    ANTICLOCKWISE = "anticlockwise"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class AttractorCloud:
    operator: OperatorSpec
    start: SimplexPoint
    burn_in: int
    samples: np.ndarray          # (n, m) tail points, trajectory order
    min_coordinate_seen: float
    orientation: Orientation
    angle_sum: float             # accumulated signed angle around the center
    mean_step_angle: float       # angle_sum / steps; -pi/3 is the pure 6-hop

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def hop_drift(self) -> float:
        """Mean step angle relative to the exact -60 degree hop.

        The families rotate clockwise around the center by roughly 60
        degrees per step for every mixing parameter; what distinguishes a
        parameter from its mirror 1 - alpha is the sign of this residual
        precession of the six-arc pattern.
        """
        return self.mean_step_angle + math.pi / 3.0


def _signed_angle_sum(samples: np.ndarray) -> float:
    uv = to_planar(samples)
    center = to_planar(np.array([1.0, 1.0, 1.0]) / 3.0)
    rel = uv - center
    r = np.hypot(rel[:, 0], rel[:, 1])
    theta = np.arctan2(rel[:, 1], rel[:, 0])
    d = np.diff(theta)
    d = (d + np.pi) % (2.0 * np.pi) - np.pi
    valid = (r[:-1] > 1e-14) & (r[1:] > 1e-14)
    return float(d[valid].sum())


def sample_attractor(
    spec: OperatorSpec,
    x0: SimplexPoint,
    burn_in: int = 100_000,
    n_samples: int = 100_000,
) -> AttractorCloud:
    """Iterate through the burn-in, then record the next n_samples points."""
    if x0.m != spec.m:
        raise DimensionError(f"operator is {spec.m}-dimensional, point is {x0.m}")
    if burn_in < 0:
        raise ValueError("burn_in must be non-negative")
    if n_samples < 1:
        raise SamplesEmptyError("need at least one sample after burn-in")
    samples, min_coord = kernels.iterate_tail(
        spec.tensor.P, x0.array, burn_in, n_samples)
    if spec.m == 3:
        angle_sum = _signed_angle_sum(samples)
    else:
        angle_sum = 0.0
    steps = max(1, n_samples - 1)
    if abs(angle_sum) < n_samples * ORIENTATION_EPS:
        orientation = Orientation.UNDETERMINED
    elif angle_sum > 0:
        orientation = Orientation.ANTICLOCKWISE
    else:
        orientation = Orientation.CLOCKWISE
    return AttractorCloud(
        operator=spec,
        start=x0,
        burn_in=burn_in,
        samples=samples,
        min_coordinate_seen=float(min_coord),
        orientation=orientation,
        angle_sum=angle_sum,
        mean_step_angle=angle_sum / steps,
    )


@dataclass(frozen=True)
class ComponentReport:
    epsilon: float
    component_count: int
    component_sizes: tuple
    diameter: float

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "component_count": self.component_count,
            "component_sizes": list(self.component_sizes),
            "diameter": self.diameter,
        }


def cloud_diameter(samples: np.ndarray) -> float:
    """Largest pairwise distance in the cloud.

    Exact via convex hull of the planar projection; degenerate (collinear
    or near-pointlike) clouds fall back to pairwise distances over the
    coordinate extremes, which is exact for segments and points.
    """
    n = samples.shape[0]
    if n == 1:
        return 0.0
    if samples.shape[1] == 2:
        return float((samples[:, 0].max() - samples[:, 0].min()) * math.sqrt(2.0))
    uv = to_planar(samples)
    cand = None
    if n > 512:
        try:
            from scipy.spatial import ConvexHull
            cand = uv[ConvexHull(uv).vertices]
        except Exception:
            cand = None
    if cand is None:
        if n <= 4096:
            cand = uv
        else:
            idx = set()
            for w in (uv[:, 0], uv[:, 1], uv[:, 0] + uv[:, 1], uv[:, 0] - uv[:, 1]):
                idx.add(int(w.argmin()))
                idx.add(int(w.argmax()))
            cand = uv[sorted(idx)]
    diff = cand[:, None, :] - cand[None, :, :]
    d2 = (diff * diff).sum(-1)
    return float(math.sqrt(d2.max()) * math.sqrt(2.0))


def median_nn_distance(samples: np.ndarray) -> float:
    """Median distance from each sample to its nearest neighbor."""
    if samples.shape[0] < 2:
        return 0.0
    tree = cKDTree(samples)
    d, _ = tree.query(samples, k=2)
    return float(np.median(d[:, 1]))


def calibrate_epsilon(samples: np.ndarray, multiplier: float = 3.0) -> float:
    """Clustering radius: multiplier times the median nearest-neighbor
    distance, floored away from zero for pointlike clouds."""
    return max(multiplier * median_nn_distance(samples), 1e-15)


def count_components(samples: np.ndarray, epsilon: float) -> ComponentReport:
    """Connected components of the epsilon-neighborhood graph (single
    linkage), exact for the given epsilon."""
    if epsilon <= 0.0:
        raise EpsilonNonPositiveError(f"epsilon={epsilon}")
    samples = np.asarray(samples, dtype=float)
    n = samples.shape[0]
    if n == 0:
        raise SamplesEmptyError("empty cloud")
    tree = cKDTree(samples)
    pairs = tree.query_pairs(r=epsilon, output_type="ndarray")
    if len(pairs) == 0:
        count, labels = n, np.arange(n)
    else:
        graph = coo_matrix(
            (np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
        count, labels = connected_components(graph, directed=False)
    sizes = tuple(sorted(np.bincount(labels).tolist(), reverse=True))
    return ComponentReport(
        epsilon=float(epsilon),
        component_count=int(count),
        component_sizes=sizes,
        diameter=cloud_diameter(samples),
    )


def hausdorff_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two point clouds."""
    ta, tb = cKDTree(a), cKDTree(b)
    d_ab = tb.query(a, k=1)[0].max()
    d_ba = ta.query(b, k=1)[0].max()
    return float(max(d_ab, d_ba))


@dataclass(frozen=True)
class TangentMap:
    """Duck-typed stand-in for an operator in exponent estimation: a step
    function on coordinate arrays and its Jacobian."""

    step: callable
    jacobian: callable


def top_lyapunov(
    spec,
    x0: SimplexPoint,
    n: int = 1_000_000,
    renorm_every: int = 1,
) -> float:
    """Benettin estimate of the top Lyapunov exponent along the orbit.

    A tangent vector is propagated through the analytic Jacobians restricted
    to the simplex tangent plane (coordinates summing to zero) and
    renormalized every ``renorm_every`` steps; the estimate is the average
    log growth per step.  Raises on overflow, which signals a renormalization
    interval too long for the expansion rate.
    """
    if n < 1000:
        raise ValueError("need at least 1000 steps for a stable estimate")
    if renorm_every < 1:
        raise ValueError("renorm_every must be positive")
    if isinstance(spec, OperatorSpec):
        acc, overflow = kernels.benettin(
            spec.tensor.P, x0.array, n, renorm_every)
        if overflow:
            raise NumericOverflowError(
                "tangent norm overflowed; decrease renorm_every")
        return float(acc / n)
    # duck path for synthetic maps
    x = x0.array.copy()
    m = x.shape[0]
    u = np.zeros(m)
    u[0] = 1.0 / math.sqrt(2.0)
    u[1] = -1.0 / math.sqrt(2.0)
    acc = 0.0
    for t in range(n):
        v = spec.jacobian(x) @ u
        u = v - v.mean()
        if (t + 1) % renorm_every == 0 or t == n - 1:
            nrm = float(np.linalg.norm(u))
            if not math.isfinite(nrm) or nrm == 0.0:
                raise NumericOverflowError(
                    "tangent norm overflowed; decrease renorm_every")
            acc += math.log(nrm)
            u /= nrm
        x = spec.step(x)
    return acc / n


@dataclass(frozen=True)
class LiYorkeReport:
    pairs: tuple                 # (i, j) seed index pairs examined
    liminf_estimates: tuple
    limsup_estimates: tuple
    scrambled_candidates: tuple  # indices into pairs
    delta_low: float
    delta_high: float
    horizon: int
    burn_in: int

    def to_dict(self) -> dict:
        return {
            "pairs": [list(p) for p in self.pairs],
            "liminf_estimates": list(self.liminf_estimates),
            "limsup_estimates": list(self.limsup_estimates),
            "scrambled_candidates": list(self.scrambled_candidates),
            "delta_low": self.delta_low,
            "delta_high": self.delta_high,
            "horizon": self.horizon,
            "burn_in": self.burn_in,
        }


def li_yorke_scan(
    spec: OperatorSpec,
    seeds: list,
    horizon: int = 10_000,
    delta_low: float = 1e-3,
    delta_high: float = 0.1,
) -> LiYorkeReport:
    """Pairwise orbit-distance bands over the horizon tail.

    Seeds are consumed as disjoint consecutive pairs.  A pair whose distance
    dips below delta_low while also exceeding delta_high is flagged as a
    scrambled candidate: numerical evidence of sensitive, recurrent mixing,
    never a proof.
    """
    if len(seeds) < 2:
        raise ValueError("need at least two seeds")
    if horizon < 1000:
        raise ValueError("horizon below 1000 resolves nothing")
    burn = horizon // 10
    pairs = []
    liminfs = []
    limsups = []
    flagged = []
    for k in range(len(seeds) // 2):
        i, j = 2 * k, 2 * k + 1
        dmin, dmax = kernels.pair_distance_band(
            spec.tensor.P, seeds[i].array, seeds[j].array, burn, horizon)
        pairs.append((i, j))
        liminfs.append(float(dmin))
        limsups.append(float(dmax))
        if dmin < delta_low and dmax > delta_high:
            flagged.append(k)
    return LiYorkeReport(
        pairs=tuple(pairs),
        liminf_estimates=tuple(liminfs),
        limsup_estimates=tuple(limsups),
        scrambled_candidates=tuple(flagged),
        delta_low=delta_low,
        delta_high=delta_high,
        horizon=horizon,
        burn_in=burn,
    )


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    component_count: int
    top_lyapunov_estimate: float
    min_coordinate_seen: float
    attractor_diameter: float
    verdict_summary: str

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "components": self.component_count,
            "lyapunov": self.top_lyapunov_estimate,
            "min_coord": self.min_coordinate_seen,
            "diameter": self.attractor_diameter,
            "verdict": self.verdict_summary,
        }


DEFAULT_SWEEP_START = SimplexPoint((0.6, 0.3, 0.1))


def _family_ctor(family):
    if isinstance(family, Family):
        family = family.value
    if family in ("V", "v"):
        return v_alpha
    if family in ("W", "w"):
        return w_alpha
    raise ValueError(f"sweep family must be V or W, got {family!r}")


def sweep(
    family,
    alphas,
    start: SimplexPoint = DEFAULT_SWEEP_START,
    burn_in: int = 100_000,
    n_samples: int = 20_000,
    lyap_steps: int = 100_000,
    epsilon_multiplier: float = 3.0,
) -> list:
    """One diagnostic row per grid value, deterministic for a fixed start
    and budget."""
    ctor = _family_ctor(family)
    rows = []
    for a in alphas:
        if not 0.0 < a < 1.0:
            raise ValueError(f"grid value {a} outside (0, 1)")
        spec = ctor(a)
        cloud = sample_attractor(spec, start, burn_in, n_samples)
        eps = calibrate_epsilon(cloud.samples, epsilon_multiplier)
        report = count_components(cloud.samples, eps)
        lam = top_lyapunov(spec, start, lyap_steps)
        v = verdict(cloud.samples)
        summary = v.status.value
        if v.status is VerdictStatus.PERIODIC:
            summary = f"periodic({v.period})"
        elif v.status is VerdictStatus.OSCILLATING:
            summary = f"oscillating(diam={v.window_diameter:.3e})"
        rows.append(SweepRow(
            alpha=float(a),
            component_count=report.component_count,
            top_lyapunov_estimate=lam,
            min_coordinate_seen=cloud.min_coordinate_seen,
            attractor_diameter=report.diameter,
            verdict_summary=summary,
        ))
    return rows
