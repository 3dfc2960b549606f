"""Simplex geometry: points, the cyclic permutation, and the line/sector
partition of the 2-simplex.

Coordinates are barycentric frequencies: m non-negative reals summing to 1,
with m = 2 or 3.  Construction always clamps tiny negatives and renormalizes,
so million-step orbits stay on the simplex to within SIMPLEX_TOL.

The 2-simplex is partitioned by the three coordinate-equality lines

    l1: x2 = x3,   l2: x1 = x3,   l3: x1 = x2,

which intersect at the center C = (1/3, 1/3, 1/3) and bound six closed
sectors S1..S6, one per coordinate ordering (S1: x1 >= x2 >= x3, S2:
x1 >= x3 >= x2, S3: x3 >= x1 >= x2, S4: x3 >= x2 >= x1, S5: x2 >= x3 >= x1,
S6: x2 >= x1 >= x3).  Classification resolves boundary ties to the line
labels so that both the line cycle and the sector cycle of the dynamics are
checkable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple

import numpy as np

from .errors import DimensionError, NegativeMassError, ZeroSumError

SIMPLEX_TOL = 1e-12       # post-normalization sum/negativity tolerance
CLAMP_TOL = 1e-9          # inputs below -CLAMP_TOL are rejected outright
REGION_TOL = 1e-12        # coordinate-equality tolerance for line labels

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class SimplexPoint:
    """Immutable barycentric coordinate vector (m = 2 or 3)."""

    coords: tuple

    @property
    def m(self) -> int:
        return len(self.coords)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


def make_point(raw: Iterable[float]) -> SimplexPoint:
    """Validate, clamp tiny negatives to zero, and renormalize to sum 1."""
    vals = tuple(float(v) for v in raw)
    if len(vals) not in (2, 3):
        raise DimensionError(f"need 2 or 3 coordinates, got {len(vals)}")
    for v in vals:
        if v < -CLAMP_TOL:
            raise NegativeMassError(f"coordinate {v} below -{CLAMP_TOL}")
    clamped = tuple(v if v > 0.0 else 0.0 for v in vals)
    s = sum(clamped)
    if s <= 0.0:
        raise ZeroSumError("coordinates sum to zero")
    return SimplexPoint(tuple(v / s for v in clamped))


CENTER = SimplexPoint((1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0))
E1 = SimplexPoint((1.0, 0.0, 0.0))
E2 = SimplexPoint((0.0, 1.0, 0.0))
E3 = SimplexPoint((0.0, 0.0, 1.0))


@dataclass(frozen=True)
class Permutation:
    """Cyclic reindexing of 3 coordinates: output k takes input source[k]."""

    source: tuple

    def __call__(self, x: SimplexPoint) -> SimplexPoint:
        return permute(self, x)

    def compose(self, other: "Permutation") -> "Permutation":
        return Permutation(tuple(other.source[i] for i in self.source))


#: The canonical cycle (x1, x2, x3) -> (x2, x3, x1), i.e. the matrix with
#: rows (0,1,0), (0,0,1), (1,0,0) applied to the coordinate column.
CYCLE = Permutation((1, 2, 0))


def permute(p: Permutation, x: SimplexPoint) -> SimplexPoint:
    if x.m != 3:
        raise DimensionError("permutation is defined on the 2-simplex")
    c = x.coords
    return SimplexPoint(tuple(c[i] for i in p.source))


def distance(x: SimplexPoint, y: SimplexPoint) -> float:
    """Euclidean distance between coordinate vectors."""
    if x.m != y.m:
        raise DimensionError(f"dimension mismatch: {x.m} vs {y.m}")
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(x.coords, y.coords)))


class RegionLabel(Enum):
    L1 = "l1"
    L2 = "l2"
    L3 = "l3"
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"
    S5 = "S5"
    S6 = "S6"
    CENTER = "C"

    @property
    def is_line(self) -> bool:
        return self in (RegionLabel.L1, RegionLabel.L2, RegionLabel.L3)

    @property
    def is_sector(self) -> bool:
        return self.name.startswith("S")


class Region(NamedTuple):
    label: RegionLabel
    order: tuple  # coordinate indices sorted by non-increasing value


_ORDER_TO_SECTOR = {
    (0, 1, 2): RegionLabel.S1,
    (0, 2, 1): RegionLabel.S2,
    (2, 0, 1): RegionLabel.S3,
    (2, 1, 0): RegionLabel.S4,
    (1, 2, 0): RegionLabel.S5,
    (1, 0, 2): RegionLabel.S6,
}

_LINES = (RegionLabel.L1, RegionLabel.L2, RegionLabel.L3)


def classify_region(x: SimplexPoint, tol: float = REGION_TOL) -> Region:
    """Label a point as a line l_i, a sector S_i, or the center.

    Exactly one coordinate pair equal within ``tol`` gives the corresponding
    line (l1: x2=x3, l2: x1=x3, l3: x1=x2); two or more equal pairs give the
    center; otherwise the unique sector determined by the coordinate order.
    """
    if x.m != 3:
        raise DimensionError("region labels are defined on the 2-simplex")
    x1, x2, x3 = x.coords
    eq = (abs(x2 - x3) <= tol, abs(x1 - x3) <= tol, abs(x1 - x2) <= tol)
    order = tuple(sorted(range(3), key=lambda i: -x.coords[i]))
    n_eq = sum(eq)
    if n_eq >= 2:
        return Region(RegionLabel.CENTER, order)
    if n_eq == 1:
        return Region(_LINES[eq.index(True)], order)
    return Region(_ORDER_TO_SECTOR[order], order)


def to_planar(coords) -> np.ndarray:
    """Barycentric to planar map u = x2 + x3/2, v = (sqrt(3)/2) x3.

    Sends e1 to the origin, e2 to (1, 0), e3 to (1/2, sqrt(3)/2).  The map is
    a similarity: planar distances equal barycentric Euclidean distances
    divided by sqrt(2), so it preserves the neighborhood structure exactly.
    """
    a = np.atleast_2d(np.asarray(coords, dtype=float))
    uv = np.empty((a.shape[0], 2))
    uv[:, 0] = a[:, 1] + 0.5 * a[:, 2]
    uv[:, 1] = (SQRT3 / 2.0) * a[:, 2]
    return uv if np.ndim(coords) > 1 else uv[0]


#: Ratio of barycentric Euclidean distance to planar distance.
PLANAR_RATIO = math.sqrt(2.0)
