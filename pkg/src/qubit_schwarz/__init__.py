"""Qubit GKLS generators: positive / Schwarz / CP classification and relaxation-rate bounds."""
from ._config import DEFAULT_PLAN, DEFAULT_TOLERANCES, SamplingPlan, Tolerances
from .classification import (
    ClassVerdict,
    Method,
    Status,
    check_cp,
    check_kadison_phase_cov,
    check_positive_closed,
    check_positive_numeric,
    check_schwarz_closed,
    check_schwarz_numeric,
    kadison_matrix,
    kadison_quartic,
    schwarz_defect,
    schwarz_oracle,
)
from .constraints import (
    ALPHA_CP,
    ALPHA_POSITIVE,
    ALPHA_SCHWARZ,
    RelaxationRates,
    alpha_bound,
    char_poly_criterion,
    critical_alpha,
    f_expansion_check,
    g_inequalities,
    rates_from_eigenvalues,
    relaxation_rates,
    tl_check,
)
from .dynamics import propagate, propagators, semigroup_map, stationary_state, trajectory
from .errors import (
    ConvergenceFailure,
    DomainError,
    InvalidAlpha,
    InvalidSamplingPlan,
    NegativeTime,
    NonFiniteInput,
    NonHermitianInput,
    NotUnital,
    PreconditionViolated,
    QubitSchwarzError,
    UnsupportedForm,
)
from .generators import (
    CanonicalForm,
    GeneratorSpec,
    apply,
    apply_dual,
    bloch_affine,
    build_general,
    canonical_form,
    damping_matrix,
    lab_bloch_affine,
    pauli,
    phase_covariant,
)
from .linalg import eig_general, eig_hermitian, expm, hs_inner, pauli_basis
from .maps import (
    MapSpectrum,
    QubitMap,
    bisect_psi_boundary,
    dephasing,
    map_spectrum,
    markov_spectral_bound,
    psi_a,
    psi_generator_check,
    psi_slice_defect,
    reduction,
    schwarz_map_check,
    schwarz_map_defect,
    spectral_alpha_constraint,
    transposition,
    transposition_deformation,
    unitary_phase,
)

__version__ = "0.1.0"
