"""Exact Le-Greuel type invariants of singularities."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CodimMismatch,
    ConsistencyViolation,
    DimensionMismatch,
    HypothesisViolation,
    InfiniteDimension,
    LeGreuelError,
    ParseError,
    PolarDimensionTooHigh,
    RetriesExhausted,
    RingMismatch,
)
from .ring import GLOBAL, LOCAL, MonomialOrder, PolyMatrix, Polynomial, RingSpec  # noqa: E402
from .stdbasis import Ideal, ideal_contains, ideal_equal, mora_normal_form, std_basis  # noqa: E402
from .ideal_ops import (  # noqa: E402
    INFINITE,
    eliminate,
    hilbert_multiplicity,
    ideal_colon,
    ideal_intersect,
    ideal_saturate,
    ideal_sum,
    krull_dim,
    squarefree_part,
    vdim,
)
from .pipeline import (  # noqa: E402
    ComputationReport,
    VarietyPresentation,
    check_isolated_singularity,
    chi_fiber,
    curve_invariants,
    euler_diff,
    gorenstein_mu,
    icis_legreuel,
    ids_invariants,
    jacobian_ideal,
    pfaffians,
    skew_matrix,
)
