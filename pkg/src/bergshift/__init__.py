"""bergshift: quasihomogeneous Toeplitz operators on the Bergman space as
exact weighted shifts, with Mellin-transform weights, Beta-formula operator
roots, Gamma-ratio rationality tests, and a desk-scale commutation harness.
"""

__version__ = "0.1.0"

from .errors import (
    BergshiftError,
    CalibrationError,
    DomainError,
    PoleError,
    PreconditionError,
    QuadratureError,
    RootOrderError,
    SamplingError,
    SymbolParseError,
    TruncationError,
)
from .mellin import (
    INCONCLUSIVE,
    SATISFIED,
    VIOLATED,
    MellinDomainPoint,
    Monomial,
    MonomialSum,
    RadialSymbol,
    Sampled,
    adaptive_quadrature,
    mellin_eval,
    mellin_monomial,
    muntz_szasz_check,
)
from .special import (
    GammaFactor,
    GammaRatio,
    RationalFn,
    beta,
    gamma_ratio,
    gamma_ratio_eval,
    is_rational_criterion,
    log_gamma,
    proportionality_test,
    rational_detect_oracle,
    rationalfn_reduce,
    signed_log_gamma,
)
from .operators import (
    BasisVector,
    ShiftSum,
    WeightedShift,
    add_shifts,
    apply,
    brute_force_toeplitz,
    commutator,
    compose,
    identity_shift,
    matrix,
    operator_norm_estimate,
    power,
    read_matrix_csv,
    scale,
    shift_from_symbol,
    shift_sum,
    sum_commutator,
    write_matrix_csv,
    zero_shift,
)
from .roots import (
    RootSpec,
    RootVerification,
    build_root,
    calibrate_root,
    root_mellin_grid,
    root_weight_raw,
    verify_root,
)
from .commutant import (
    CommutantConfig,
    DivisibilityProfile,
    ResidualReport,
    ScanCell,
    ScanResult,
    build_candidates,
    commutator_residual,
    component_commutation_check,
    divisibility_profile,
    fit_constants,
    gamma_form_residual,
    hypothesis_check,
    product_identity_residual,
    ratio_equation_residual,
    scan,
)
