"""Quadratic stochastic operators on the simplex: mutation families,
fixed-point spectra, trajectory diagnostics, and attractor structure."""

from .simplex import (
    CENTER,
    CYCLE,
    E1,
    E2,
    E3,
    Permutation,
    Region,
    RegionLabel,
    SimplexPoint,
    classify_region,
    distance,
    make_point,
    permute,
)
from .operators import (
    Family,
    HeredityTensor,
    OperatorSpec,
    apply,
    convex_combine,
    expand_family,
    generic,
    jacobian,
    raw_image,
    two_allele,
    v_alpha,
    w_alpha,
)
from .fixed_points import (
    FixedPointReport,
    Stability,
    classify,
    find_fixed_points,
    nondegeneracy_det,
    unit_modulus_alphas,
)
from .dynamics import (
    CesaroTable,
    ConvergenceVerdict,
    CycleTrace,
    LyapunovKind,
    LyapunovTrace,
    Trajectory,
    VerdictStatus,
    cesaro,
    cycle_trace,
    iterate,
    lyapunov_trace,
    verdict,
)
from .attractor import (
    AttractorCloud,
    ComponentReport,
    LiYorkeReport,
    Orientation,
    SweepRow,
    calibrate_epsilon,
    count_components,
    li_yorke_scan,
    sample_attractor,
    sweep,
    top_lyapunov,
)
from .rng import SplitMix64

__version__ = "0.1.0"
