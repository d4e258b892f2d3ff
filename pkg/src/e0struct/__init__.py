"""Structure of the good-reduction subgroup E0(Q_p) for curves with additive reduction."""
from .classify import (
    ClassificationResult,
    Structure,
    classify,
    classify_congruence,
    classify_oracle,
    torsion_witness,
    verify_paper_examples,
)
from .curve import (
    INFINITY,
    CurvePoint,
    WeierstrassCurve,
    compute_invariants,
    filtration_level,
    mul_point,
    negate,
    normalize_additive,
    point_add,
    psi,
    psi_inverse,
    random_point,
    reduce_point,
    reduction_type,
)
from .errors import E0Error
from .formal import GENERIC, CoefficientRing, TruncatedSeries, compute_group_law, compute_w, mul_by_n
from .padic import PadicNumber
from .wpoly import WeightedPoly

__version__ = "0.1.0"
