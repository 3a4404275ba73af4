"""Certified two-sided bounds, one routine per inequality.

Every routine returns a :class:`BoundReport` whose interval is guaranteed by
the corresponding theorem to contain the target quantity; the guarantees are
analytic, and evaluation is plain round-to-nearest floating point at the
context precision (no directed rounding).  Expansions in 1/lambda and 1/n
are evaluated by Horner's scheme for stability at large arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import mpmath
from mpmath import mpf

from . import coefficients
from .moments import binomial_central_moment, poisson_central_moment
from .symbolic import (
    DEFAULT_CONTEXT,
    DomainError,
    Interval,
    PrecisionContext,
    to_mpf,
)

METHOD_SMALL_LAMBDA = "small-lambda"
METHOD_LARGE_LAMBDA = "large-lambda"
METHOD_COVER_THOMAS = "cover-thomas"
METHOD_RELATIVE_ENTROPY = "relative-entropy"
METHOD_BINOMIAL_COROLLARY = "binomial-corollary"
METHOD_BINOMIAL_STIRLING = "binomial-stirling"
METHOD_EXPECTED_LOG_POISSON = "expected-log-poisson"
METHOD_EXPECTED_LOG_BINOMIAL = "expected-log-binomial"


@dataclass(frozen=True)
class BoundReport:
    """A certified sandwich at order m, with its width and midpoint."""

    interval: Interval
    midpoint: mpf
    gap: mpf
    m: int
    method: str

    @property
    def lower(self) -> mpf:
        return self.interval.lower

    @property
    def upper(self) -> mpf:
        return self.interval.upper


def _report(lower, upper, m: int, method: str, ctx: PrecisionContext) -> BoundReport:
    interval = Interval(ctx.round(lower), ctx.round(upper))
    return BoundReport(
        interval=interval,
        midpoint=ctx.round(interval.midpoint),
        gap=ctx.round(interval.width),
        m=m,
        method=method,
    )


def _horner_inverse(values: Mapping[int, object], y: mpf, k_max: int) -> mpf:
    """sum_{k=1}^{k_max} values[k] * y^k, missing keys treated as zero."""
    acc = mpf(0)
    for k in range(k_max, 0, -1):
        acc = (acc + to_mpf(values.get(k, 0))) * y
    return acc


def _check_order(m: int) -> None:
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"order m must be a positive integer, got {m!r}")


def entropy_poisson_small(lam, m: int = 1, ctx: PrecisionContext = DEFAULT_CONTEXT) -> BoundReport:
    """Small-mean sandwich for H(lam), valid for every lam >= 0.

    lower = lam - lam log lam + sum_{k=2}^{2m+1} c(k)/k! lam^k, upper stops
    the sum at 2m.  The two differ by O(lam^(2m+1)).
    """
    _check_order(m)
    with ctx.working():
        lam_m = to_mpf(lam)
        if lam_m < 0:
            raise DomainError(f"lam must be >= 0, got {lam_m}")
        if lam_m == 0:
            return _report(mpf(0), mpf(0), m, METHOD_SMALL_LAMBDA, ctx)
        base = lam_m - lam_m * mpmath.log(lam_m)
        acc = mpf(0)
        upper_sum = mpf(0)
        power = lam_m
        for k in range(2, 2 * m + 2):
            power *= lam_m
            acc += coefficients.c_coeff(k, ctx) * power / math.factorial(k)
            if k == 2 * m:
                upper_sum = acc
        return _report(base + acc, base + upper_sum, m, METHOD_SMALL_LAMBDA, ctx)


def entropy_poisson_large(lam, m: int = 1, ctx: PrecisionContext = DEFAULT_CONTEXT) -> BoundReport:
    """Large-mean sandwich: H(lam) in [u - r_m(lam), u] with
    u = log(2 pi lam)/2 + 1/2 + sum_k b(m,k)/lam^k."""
    _check_order(m)
    cs = coefficients.poisson_coeffs(m)
    with ctx.working():
        lam_m = to_mpf(lam)
        if lam_m <= 0:
            raise DomainError(f"lam must be > 0, got {lam_m}")
        y = 1 / lam_m
        beta = _horner_inverse(cs.b, y, 2 * m - 1)
        gap = _horner_inverse(cs.a, y, 2 * m)
        upper = mpmath.log(2 * mpmath.pi * lam_m) / 2 + mpf(1) / 2 + beta
        return _report(upper - gap, upper, m, METHOD_LARGE_LAMBDA, ctx)


def entropy_poisson_ct(lam, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Classical upper bound H(lam) <= log(2 pi e (lam + 1/12)) / 2."""
    with ctx.working():
        lam_m = to_mpf(lam)
        if lam_m < 0:
            raise DomainError(f"lam must be >= 0, got {lam_m}")
        value = mpmath.log(2 * mpmath.pi * mpmath.e * (lam_m + mpf(1) / 12)) / 2
    return ctx.round(value)


def relative_entropy_exact(n: int, p, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Exact D(n, p) = n(p + q log q) + sum_{k=2}^n C(n,k) c~(k) p^k."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    with ctx.working():
        p_m = to_mpf(p)
        if not 0 <= p_m <= 1:
            raise DomainError(f"p must be in [0,1], got {p_m}")
        if p_m == 0:
            return mpf(0)
        q_m = 1 - p_m
        total = n * (p_m + (q_m * mpmath.log(q_m) if q_m > 0 else mpf(0)))
        power = p_m
        for k in range(2, n + 1):
            power *= p_m
            total += math.comb(n, k) * coefficients.c_tilde_coeff(n, k, ctx) * power
    return ctx.round(total)


def relative_entropy_bounds(
    n: int, p, m: int = 1, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> BoundReport:
    """Large-n sandwich: D(n, p) in [l, l + r~] with
    l = -(p + log q)/2 + sum_k b~(m,k;p)/n^k."""
    _check_order(m)
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    cs = coefficients.binomial_coeffs(m)
    with ctx.working():
        p_m = to_mpf(p)
        if not 0 < p_m < 1:
            raise DomainError(f"p must be in (0,1), got {p_m}")
        q_m = 1 - p_m
        y = mpf(1) / n
        beta = _horner_inverse({k: f(q_m) for k, f in cs.b_tilde.items()}, y, 2 * m - 1)
        gap = _horner_inverse({k: f(q_m) for k, f in cs.a_tilde.items()}, y, 2 * m)
        lower = -(p_m + mpmath.log(q_m)) / 2 + beta
        return _report(lower, lower + gap, m, METHOD_RELATIVE_ENTROPY, ctx)


def entropy_binomial_bounds(
    n: int, p, m: int = 1, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> BoundReport:
    """Sandwich for H(B_{n,p}) through the identity
    H = log n! - n log n + n - D(n, p) - D(n, q), with both D terms replaced
    by their order-m intervals.  log n! is computed exactly, then rounded."""
    _check_order(m)
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    with ctx.working():
        p_m = to_mpf(p)
        if not 0 < p_m < 1:
            raise DomainError(f"p must be in (0,1), got {p_m}")
        q_m = 1 - p_m
        base = mpmath.log(mpf(math.factorial(n))) - n * mpmath.log(n) + n
        d_p = relative_entropy_bounds(n, p_m, m, ctx)
        d_q = relative_entropy_bounds(n, q_m, m, ctx)
        lower = base - d_p.upper - d_q.upper
        upper = base - d_p.lower - d_q.lower
        return _report(lower, upper, m, METHOD_BINOMIAL_COROLLARY, ctx)


def entropy_binomial_stirling_m1(n: int, p, ctx: PrecisionContext = DEFAULT_CONTEXT) -> BoundReport:
    """Order-1 binomial entropy sandwich in closed form:
    log(2 pi n p q)/2 + 1/2 + [C1/n + C2/n^2 + C3/n^3, C4/n]."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    c1, c2, c3, c4 = coefficients.stirling_m1_constants()
    with ctx.working():
        p_m = to_mpf(p)
        if not 0 < p_m < 1:
            raise DomainError(f"p must be in (0,1), got {p_m}")
        q_m = 1 - p_m
        u = p_m * q_m
        y = mpf(1) / n
        base = mpmath.log(2 * mpmath.pi * n * u) / 2 + mpf(1) / 2
        lower = base + _horner_inverse({1: c1(u), 2: c2(u), 3: c3(u)}, y, 3)
        upper = base + c4(u) * y
        return _report(lower, upper, 1, METHOD_BINOMIAL_STIRLING, ctx)


def expected_log_poisson_bounds(
    s, m: int = 1, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> BoundReport:
    """Sandwich for E[log(N_s + 1)]:
    lower = log s + sum_{k=2}^{2m+1} (-1)^k mu_k(s) / (k (k-1) s^k),
    gap = mu_{2m+2}(s) / ((2m+1) s^(2m+2))."""
    _check_order(m)
    with ctx.working():
        s_m = to_mpf(s)
        if s_m <= 0:
            raise DomainError(f"s must be > 0, got {s_m}")
        acc = mpf(0)
        power = s_m
        for k in range(2, 2 * m + 2):
            power *= s_m
            acc += (-1) ** k * poisson_central_moment(k).poly(s_m) / (k * (k - 1) * power)
        power *= s_m
        gap = poisson_central_moment(2 * m + 2).poly(s_m) / ((2 * m + 1) * power)
        lower = mpmath.log(s_m) + acc
        return _report(lower, lower + gap, m, METHOD_EXPECTED_LOG_POISSON, ctx)


def expected_log_binomial_bounds(
    n: int, s, m: int = 1, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> BoundReport:
    """Sandwich for E[log(B_{n-1,s} + 1)], same shape with mu_k(n, s) and
    powers of ns.  Subtract log(ns) to bound the ratio form."""
    _check_order(m)
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    with ctx.working():
        s_m = to_mpf(s)
        if not 0 < s_m < 1:
            raise DomainError(f"s must be in (0,1), got {s_m}")
        ns = n * s_m
        acc = mpf(0)
        power = ns
        for k in range(2, 2 * m + 2):
            power *= ns
            acc += (-1) ** k * binomial_central_moment(k).poly(n, s_m) / (k * (k - 1) * power)
        power *= ns
        gap = binomial_central_moment(2 * m + 2).poly(n, s_m) / ((2 * m + 1) * power)
        lower = mpmath.log(ns) + acc
        return _report(lower, lower + gap, m, METHOD_EXPECTED_LOG_BINOMIAL, ctx)


def best_interval(
    bound_fn: Callable[..., BoundReport],
    *args,
    m_max: int = 6,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> BoundReport:
    """Evaluate orders 1..m_max and return the narrowest interval.

    The intervals need not be nested in m, so minimal width is the honest
    aggregate.
    """
    reports = [bound_fn(*args, m=m, ctx=ctx) for m in range(1, m_max + 1)]
    return min(reports, key=lambda r: r.gap)
