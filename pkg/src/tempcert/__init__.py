"""Certify d-outcome projective measurements from sequential (temporal) statistics.

The main entry points are :func:`canonical_quartet`, :func:`tau_from_stats`,
:func:`sos_residuals`, :func:`certify`, :func:`robustness_check` and
:func:`entropy_sweep`.
"""

__version__ = "0.1.0"

from .certification import (
    CertificationReport,
    Lemma2Report,
    RobustnessReport,
    algebraic_residuals,
    certify,
    fingerprint_distance,
    lemma2_demo,
    overlap_fingerprint,
    perturb_quartet,
    robustness_check,
    robustness_trials,
)
from .exceptions import (
    ConsistencyError,
    ConstructionError,
    DimensionError,
    DomainError,
    NonUniformOverlapError,
    NumericError,
    PreconditionError,
    RealnessError,
    SpectrumError,
    TempcertError,
    ValidationError,
)
from .inequality import (
    InequalityReport,
    classical_bound_bruteforce,
    classical_bound_closed,
    classical_bound_enumeration,
    classical_decomposition,
    evaluate_inequality,
    fourier_correlator,
    tau_from_stats,
    tau_operator,
    tau_tilde,
)
from .numerics import DEFAULT_TOL, ToleranceConfig, haar_unitary, hs_norm, omega
from .observables import (
    Quartet,
    RootOfUnityObservable,
    build_t,
    build_z,
    canonical_quartet,
    observable_from_projectors,
    observable_from_unitary,
    random_quartet,
)
from .randomness import entropy_closed_form, entropy_sweep, pair_entropy, zt_overlap
from .sequential import (
    JointTable,
    Povm,
    PreparedState,
    luders_joint,
    maximally_mixed,
    projectivity_check,
    pure_state,
    quartet_tables,
)
from .sos import SosReport, build_b, build_c, sos_residuals
