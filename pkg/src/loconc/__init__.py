"""Concentration functions of weighted sums of independent random variables.

Exact and Monte-Carlo evaluation of the Levy concentration function,
Esseen-type characteristic-function integrals, arithmetic-structure
functionals of coefficient vectors (lattice distance, interval
admissibility, essential least common denominator), and the family of
concentration bounds built from them, with explicit fitted constants.
"""

from .bounds import (
    BoundReport,
    ConstantSet,
    CorollaryBound,
    UNIT_CONSTANTS,
    corollary_bound,
    esseen_prop_bound,
    fs_bound,
    kr_bound,
    make_report,
    rv_bound,
    thm1_bound,
    thm2_bound,
)
from .charfun import (
    EnvelopeReport,
    QuadratureError,
    QuadratureSettings,
    adaptive_simpson,
    char_fn,
    check_bound_6,
    check_bounds_7,
    esseen_lower,
    esseen_symmetric,
    esseen_upper,
    h_char,
    sum_char_fn,
)
from .concentration import (
    ConcentrationEstimate,
    exact_convolution,
    q_exact,
    q_monte_carlo,
    regularity_factor,
)
from .distributions import (
    Distribution,
    DyadicProfile,
    SumSpec,
    as_discrete,
    bernoulli,
    dist_from_json,
    dist_to_json,
    dyadic_profile,
    gaussian_sampler,
    is_symmetric,
    m_tau,
    make_discrete,
    pointmass,
    rademacher,
    sample,
    scale,
    shift,
    symmetrize,
    uniform,
)
from .harness import (
    ExperimentSpec,
    FitOutcome,
    Report,
    Row,
    fit_constants,
    report_from_csv,
    report_to_csv,
    run_experiment,
    run_suite,
    verify_suite,
)
from .lattice import (
    ArithmeticProfile,
    ConditionCheck,
    alpha_over_interval,
    arithmetic_profile,
    check_condition_3b,
    check_condition_4d,
    coeffs_from_json,
    essential_lcd,
    lattice_dist,
)
from .sentinel import INFINITE, Infinite, is_infinite

__version__ = "0.1.0"
