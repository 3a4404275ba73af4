"""Certified bounds for Poisson/binomial entropy and their relative entropy.

Exact rational derivation of all asymptotic-expansion coefficients, interval
evaluation of every published sandwich bound, and independent high-precision
oracles to validate them.
"""

from .symbolic import (
    BiPoly,
    DEFAULT_CONTEXT,
    DomainError,
    Interval,
    LaurentPoly,
    LogLaurent,
    NonIntegrableTailError,
    PrecisionContext,
    PrecisionError,
    UniPoly,
    as_fraction,
    eval_at,
    integrate_tail,
    integrate_to_one,
    parse_rational,
    rational_str,
)
from .moments import (
    BinomialMoment,
    PoissonMoment,
    binomial_central_moment,
    moment_oracle_binomial,
    moment_oracle_poisson,
    poisson_central_moment,
)
from .coefficients import (
    BinomialCoeffSet,
    PoissonCoeffSet,
    binomial_coeffs,
    c_coeff,
    c_tilde_coeff,
    poisson_coeffs,
    stirling_m1_constants,
)
from .bounds import (
    BoundReport,
    best_interval,
    entropy_binomial_bounds,
    entropy_binomial_stirling_m1,
    entropy_poisson_ct,
    entropy_poisson_large,
    entropy_poisson_small,
    expected_log_binomial_bounds,
    expected_log_poisson_bounds,
    relative_entropy_bounds,
    relative_entropy_exact,
)
from .oracle import (
    TruncationReceipt,
    binomial_entropy_oracle,
    expected_log_binomial,
    expected_log_poisson,
    poisson_entropy_oracle,
    poisson_expectation,
    relative_entropy_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "BiPoly",
    "BinomialCoeffSet",
    "BinomialMoment",
    "BoundReport",
    "DEFAULT_CONTEXT",
    "DomainError",
    "Interval",
    "LaurentPoly",
    "LogLaurent",
    "NonIntegrableTailError",
    "PoissonCoeffSet",
    "PoissonMoment",
    "PrecisionContext",
    "PrecisionError",
    "TruncationReceipt",
    "UniPoly",
    "as_fraction",
    "best_interval",
    "binomial_central_moment",
    "binomial_coeffs",
    "binomial_entropy_oracle",
    "c_coeff",
    "c_tilde_coeff",
    "entropy_binomial_bounds",
    "entropy_binomial_stirling_m1",
    "entropy_poisson_ct",
    "entropy_poisson_large",
    "entropy_poisson_small",
    "eval_at",
    "expected_log_binomial",
    "expected_log_binomial_bounds",
    "expected_log_poisson",
    "expected_log_poisson_bounds",
    "integrate_tail",
    "integrate_to_one",
    "moment_oracle_binomial",
    "moment_oracle_poisson",
    "parse_rational",
    "poisson_central_moment",
    "poisson_coeffs",
    "poisson_entropy_oracle",
    "poisson_expectation",
    "rational_str",
    "relative_entropy_bounds",
    "relative_entropy_exact",
    "relative_entropy_oracle",
    "stirling_m1_constants",
]
