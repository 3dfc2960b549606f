"""Quadratic stochastic operators: generic tensor form, named families,
and analytic Jacobians.

A heredity tensor P[i,j,k] gives the probability that parent types i and j
produce offspring type k; it is symmetric in (i, j) and stochastic in k.
The induced map on the simplex is x'_k = sum_ij P[i,j,k] x_i x_j.

Named families (m = 3 unless stated otherwise):

* ``v_alpha(a)`` -- cyclic-mutation family: offspring of the pure pair
  (i, i) mutate with probability ``a`` into type i-1 (cyclically).  At
  a = 0 this is the classical non-ergodic operator x'_1 = x1^2 + 2 x1 x2
  (cyclically); a interpolates linearly to its relabeled twin at a = 1.
* ``w_alpha(a)`` -- counter-rotating family: pure-pair offspring mutate
  with probability ``a`` into type i+1 (cyclically).  Defined for every
  ``a`` by the single displayed formula below; in particular W_1 is its
  a = 1 instance x'_1 = 2 x1 x2 + x3^2 (cyclically), which is what the
  convex decomposition W_a = (1-a) W_0 + a W_1 requires.
* ``two_allele(a, b, p_het)`` -- m = 2 model with mutation probabilities
  ``a`` (first allele to second) and ``b`` (second to first) applying to
  same-allele parents only, and heterozygote transmission ``p_het`` (an
  explicit free parameter).

Formulas (barycentric coordinates, primes denote the image):

    V_a: x'_1 = (1-a) x1^2 + 2 x1 x2 + a x2^2   (and cyclic shifts)
    W_a: x'_1 = (1-a) x1^2 + 2 x1 x2 + a x3^2   (and cyclic shifts)
    two-allele: x'_1 = (1-a) x1^2 + 2 p_het x1 x2 + b x2^2
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernels
from .errors import DimensionError, ParamRangeError, TensorInvariantError
from .simplex import SimplexPoint, make_point

TENSOR_TOL = 1e-12


@dataclass(frozen=True)
class HeredityTensor:
    """Cubic stochastic coefficient array P[i,j,k], validated on creation."""

    P: np.ndarray = field(compare=False)

    def __post_init__(self):
        P = np.ascontiguousarray(np.asarray(self.P, dtype=float))
        object.__setattr__(self, "P", P)
        validate_tensor(P)

    @property
    def m(self) -> int:
        return self.P.shape[0]

    def to_json(self) -> str:
        return json.dumps({"m": self.m, "P": self.P.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "HeredityTensor":
        data = json.loads(text)
        P = np.asarray(data["P"], dtype=float)
        if "m" in data and P.shape != (data["m"],) * 3:
            raise TensorInvariantError(
                f"declared m={data['m']} but P has shape {P.shape}")
        return cls(P)


def validate_tensor(P: np.ndarray) -> None:
    if P.ndim != 3 or len(set(P.shape)) != 1:
        raise TensorInvariantError(f"tensor must be cubic, got shape {P.shape}")
    m = P.shape[0]
    if m not in (2, 3):
        raise DimensionError(f"tensor dimension {m} not supported")
    if P.min() < -TENSOR_TOL or P.max() > 1.0 + TENSOR_TOL:
        raise TensorInvariantError("entries outside [0, 1]")
    if np.max(np.abs(P - P.transpose(1, 0, 2))) > TENSOR_TOL:
        raise TensorInvariantError("tensor not symmetric in parent indices")
    sums = P.sum(axis=2)
    if np.max(np.abs(sums - 1.0)) > TENSOR_TOL:
        raise TensorInvariantError("offspring probabilities do not sum to 1")


class Family(Enum):
    GENERIC = "generic"
    V_ALPHA = "V"
    W_ALPHA = "W"
    TWO_ALLELE = "two-allele"


def _check_prob(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ParamRangeError(f"{name}={value} outside [0, 1]")
    return value


def _cyclic_tensor(alpha: float, target_shift: int) -> np.ndarray:
    """Tensor for the m=3 families: cross pair (i, i+1) produces type i,
    cross pair (i, i+2) produces type i+2, and the pure pair (i, i) splits
    between type i (weight 1-alpha) and type i + target_shift (weight alpha).
    target_shift = 2 gives the V family of the module docstring, 1 gives W."""
    P = np.zeros((3, 3, 3))
    for i in range(3):
        nxt = (i + 1) % 3
        prv = (i + 2) % 3
        P[i, i, i] = 1.0 - alpha
        P[i, i, (i + target_shift) % 3] = alpha
        P[i, nxt, i] = 1.0
        P[nxt, i, i] = 1.0
        P[i, prv, prv] = 1.0
        P[prv, i, prv] = 1.0
    return P


@dataclass(frozen=True)
class OperatorSpec:
    """A named operator family with parameters, evaluable and differentiable."""

    family: Family
    alpha: float | None = None
    beta: float | None = None
    p_het: float | None = None
    tensor: HeredityTensor = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.family is Family.GENERIC:
            if self.tensor is None:
                raise ParamRangeError("generic operator needs a tensor")
            return
        if self.tensor is None:
            object.__setattr__(self, "tensor", expand_family(self))

    @property
    def m(self) -> int:
        return self.tensor.m


def v_alpha(alpha: float) -> OperatorSpec:
    return OperatorSpec(Family.V_ALPHA, alpha=_check_prob("alpha", alpha))


def w_alpha(alpha: float) -> OperatorSpec:
    return OperatorSpec(Family.W_ALPHA, alpha=_check_prob("alpha", alpha))


def two_allele(alpha: float, beta: float, p_het: float) -> OperatorSpec:
    return OperatorSpec(
        Family.TWO_ALLELE,
        alpha=_check_prob("alpha", alpha),
        beta=_check_prob("beta", beta),
        p_het=_check_prob("p_het", p_het),
    )


def generic(tensor: HeredityTensor) -> OperatorSpec:
    return OperatorSpec(Family.GENERIC, tensor=tensor)


def expand_family(spec: OperatorSpec) -> HeredityTensor:
    """Expand a named family into its heredity tensor."""
    if spec.family is Family.GENERIC:
        return spec.tensor
    if spec.family is Family.V_ALPHA:
        a = _check_prob("alpha", spec.alpha)
        return HeredityTensor(_cyclic_tensor(a, target_shift=2))
    if spec.family is Family.W_ALPHA:
        a = _check_prob("alpha", spec.alpha)
        return HeredityTensor(_cyclic_tensor(a, target_shift=1))
    if spec.family is Family.TWO_ALLELE:
        a = _check_prob("alpha", spec.alpha)
        b = _check_prob("beta", spec.beta)
        p = _check_prob("p_het", spec.p_het)
        P = np.array([
            [[1.0 - a, a], [p, 1.0 - p]],
            [[p, 1.0 - p], [b, 1.0 - b]],
        ])
        return HeredityTensor(P)
    raise ParamRangeError(f"unknown family {spec.family}")


def raw_image(spec: OperatorSpec, x: SimplexPoint) -> np.ndarray:
    """The quadratic image before renormalization (sums to 1 up to rounding)."""
    if x.m != spec.m:
        raise DimensionError(f"operator is {spec.m}-dimensional, point is {x.m}")
    return kernels.raw_image(spec.tensor.P, x.array)


def apply(spec: OperatorSpec, x: SimplexPoint) -> SimplexPoint:
    """One generation: evaluate the quadratic map, then renormalize."""
    return make_point(raw_image(spec, x))


def jacobian(spec: OperatorSpec, x: SimplexPoint) -> np.ndarray:
    """Analytic partials J[k,l] = d x'_k / d x_l = 2 sum_i P[i,l,k] x_i.

    No renormalization term is included; on the simplex each column sums
    to 2 (twice the offspring-probability sum).
    """
    if x.m != spec.m:
        raise DimensionError(f"operator is {spec.m}-dimensional, point is {x.m}")
    S = np.tensordot(x.array, spec.tensor.P, axes=(0, 0))  # S[l,k]
    return 2.0 * S.T


def convex_combine(a: OperatorSpec, b: OperatorSpec, alpha: float) -> HeredityTensor:
    """Entrywise mixture (1-alpha) * tensor(a) + alpha * tensor(b)."""
    alpha = _check_prob("alpha", alpha)
    if a.m != b.m:
        raise DimensionError(f"dimension mismatch: {a.m} vs {b.m}")
    return HeredityTensor((1.0 - alpha) * a.tensor.P + alpha * b.tensor.P)
