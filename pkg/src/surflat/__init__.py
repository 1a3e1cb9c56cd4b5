"""Exact-arithmetic birational geometry of surfaces via intersection lattices.

The package models a projective surface as a finitely generated lattice with
a rational intersection pairing, a canonical class, and a list of tracked
curve classes.  On top of that it computes Zariski decompositions with
negative definiteness certificates, transports them through blow-ups at
redundant points, measures log discrepancies and asymptotic orders along
chains of infinitely near points, runs anticanonical minimal model programs,
and classifies resolution dual graphs of germ singularities.  All arithmetic
is exact (fractions.Fraction); nothing is floating point.
"""

from .birational import (
    BlowUpRecord,
    ContractionResult,
    PointSpec,
    SurfaceModel,
    TrackedCurve,
    apply_chain,
    blow_up,
    chain_log_discrepancy,
    chain_names,
    chain_order,
    contract,
    pull_back_combination,
    pullback,
)
from .dualgraph import (
    DualGraph,
    GraphRecord,
    GraphVerdict,
    TheoremReport,
    canonical_form,
    classify,
    enumerate_and_verify,
    germ_surface,
    has_redundant_point,
    resolve_coefficients,
)
from .errors import (
    DimensionMismatchError,
    InconsistentIncidenceError,
    InvariantViolationError,
    NoZariskiDecompositionError,
    NotNegativeDefiniteError,
    NotRedundantError,
    SceneFormatError,
    SingularSystemError,
    SurflatError,
    UnknownNameError,
)
from .lattice import (
    DivisorClass,
    IntersectionLattice,
    NegDefCertificate,
    definiteness_certificate,
    gram_matrix,
    intersect,
    is_negative_definite,
)
from .pairs import (
    ChainRatio,
    FactorizationReport,
    FactorizationStep,
    LctSigmaEstimate,
    MMPStep,
    MMPTrace,
    PairModel,
    PkltCertificate,
    RedundancyVerdict,
    check_mmp_redundant_factorization,
    enumerate_chains,
    epsilon_gap,
    is_redundant_point,
    lct_sigma_estimate,
    pklt_certificate,
    potential_log_discrepancy,
    redundant_blow_up,
    run_anticanonical_mmp,
)
from .scene import (
    BUILTIN_SCENES,
    Scene,
    SceneBundle,
    build_bundle,
    builtin_scene_text,
    load_bundle,
    load_scene,
    make_scene,
    parse_scene_data,
    parse_scene_text,
    resolve_scene_text,
    scene_to_json,
)
from .zariski import ZariskiDecomp, sigma, transport_redundant, zariski_decompose

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_SCENES",
    "BlowUpRecord",
    "ChainRatio",
    "ContractionResult",
    "DimensionMismatchError",
    "DivisorClass",
    "DualGraph",
    "FactorizationReport",
    "FactorizationStep",
    "GraphRecord",
    "GraphVerdict",
    "InconsistentIncidenceError",
    "IntersectionLattice",
    "InvariantViolationError",
    "LctSigmaEstimate",
    "MMPStep",
    "MMPTrace",
    "NegDefCertificate",
    "NoZariskiDecompositionError",
    "NotNegativeDefiniteError",
    "NotRedundantError",
    "PairModel",
    "PkltCertificate",
    "PointSpec",
    "RedundancyVerdict",
    "Scene",
    "SceneBundle",
    "SceneFormatError",
    "SingularSystemError",
    "SurfaceModel",
    "SurflatError",
    "TheoremReport",
    "TrackedCurve",
    "UnknownNameError",
    "ZariskiDecomp",
    "apply_chain",
    "blow_up",
    "build_bundle",
    "builtin_scene_text",
    "canonical_form",
    "chain_log_discrepancy",
    "chain_names",
    "chain_order",
    "check_mmp_redundant_factorization",
    "classify",
    "contract",
    "definiteness_certificate",
    "enumerate_and_verify",
    "enumerate_chains",
    "epsilon_gap",
    "germ_surface",
    "gram_matrix",
    "has_redundant_point",
    "intersect",
    "is_negative_definite",
    "is_redundant_point",
    "lct_sigma_estimate",
    "load_bundle",
    "load_scene",
    "make_scene",
    "parse_scene_data",
    "parse_scene_text",
    "pklt_certificate",
    "potential_log_discrepancy",
    "pull_back_combination",
    "pullback",
    "redundant_blow_up",
    "resolve_coefficients",
    "resolve_scene_text",
    "run_anticanonical_mmp",
    "scene_to_json",
    "sigma",
    "transport_redundant",
    "zariski_decompose",
]
