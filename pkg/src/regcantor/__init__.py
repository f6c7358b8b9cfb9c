"""Exact strong Cantor realiser and the operations on regulated functions equivalent to it.

Points are exact (rationals and q + r*sqrt2), real outputs are fast
Cauchy sequences with separation certificates, and every answer can be
replayed by the independent checkers in ``regcantor.verification``.
"""

from ._kernels import BACKEND
from .analysis import (
    BandCertificate,
    FtcCertificate,
    IntegralZeroCertificate,
    StrictMaxWitness,
    continuity_point,
    continuity_point_near,
    enumerate_strict_maxima,
    ftc_point,
    infinite_band,
    integral_zero_point,
    non_strict_max_point,
    riemann_integral,
    volterra_dense,
    volterra_pair,
    volterra_rational,
    weak_continuity_point,
)
from .exact import (
    CReal,
    DomainError,
    Interval,
    Ordering,
    TaggedPoint,
    approx,
    compare,
    creal_of,
    format_rational,
    is_rational,
    parse_point,
    parse_rational,
)
from .presentations import (
    HeightSet,
    PreconditionError,
    PresentationError,
    RegulatedPresentation,
    SpikeStream,
    Step,
    classify_point,
    evaluate,
    jump_set,
    pl,
    pl_identity,
    rationals,
    spike_indicator,
    thomae,
    weak_continuity_at,
)
from .realisers import (
    ContractViolation,
    DenseOpen,
    Disjunct,
    OracleKind,
    SeparationCertificate,
    baire_point,
    cantor_outside,
    strong_cantor,
    strong_cantor_from_oracle,
    strong_cantor_via_baire,
)
from .verification import (
    VerificationReport,
    band_checker,
    check_separation,
    grid_continuity_oracle,
    volterra_impossibility,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BandCertificate",
    "CReal",
    "ContractViolation",
    "DenseOpen",
    "Disjunct",
    "DomainError",
    "FtcCertificate",
    "HeightSet",
    "IntegralZeroCertificate",
    "Interval",
    "OracleKind",
    "Ordering",
    "PreconditionError",
    "PresentationError",
    "RegulatedPresentation",
    "SeparationCertificate",
    "SpikeStream",
    "Step",
    "StrictMaxWitness",
    "TaggedPoint",
    "VerificationReport",
    "approx",
    "baire_point",
    "band_checker",
    "cantor_outside",
    "check_separation",
    "classify_point",
    "compare",
    "continuity_point",
    "continuity_point_near",
    "creal_of",
    "enumerate_strict_maxima",
    "evaluate",
    "format_rational",
    "ftc_point",
    "grid_continuity_oracle",
    "infinite_band",
    "integral_zero_point",
    "is_rational",
    "jump_set",
    "non_strict_max_point",
    "parse_point",
    "parse_rational",
    "pl",
    "pl_identity",
    "rationals",
    "riemann_integral",
    "spike_indicator",
    "strong_cantor",
    "strong_cantor_from_oracle",
    "strong_cantor_via_baire",
    "thomae",
    "volterra_dense",
    "volterra_impossibility",
    "volterra_pair",
    "volterra_rational",
    "weak_continuity_at",
    "weak_continuity_point",
]
