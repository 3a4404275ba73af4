"""Exact central-moment polynomials of the Poisson and binomial laws.

The Poisson moments mu_k(s) = E[(N_s - s)^k] follow the classical recursion
in the mean; for k >= 2 they are polynomials in s of degree floor(k/2).  The
binomial moments mu_k(n, s) = E[(B_{n,s} - ns)^k] use the derivative
recursion in the success probability and are exact polynomials in both n
and s.  Each comes with a brute-force oracle: a certified Poisson series,
and an exact rational finite sum for the binomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from mpmath import mpf

from . import oracle
from .symbolic import (
    DEFAULT_CONTEXT,
    BiPoly,
    DomainError,
    PrecisionContext,
    UniPoly,
    as_fraction,
    to_mpf,
)


@dataclass(frozen=True)
class PoissonMoment:
    k: int
    poly: UniPoly  # in the mean s


@dataclass(frozen=True)
class BinomialMoment:
    k: int
    poly: BiPoly  # in (n, s)


@lru_cache(maxsize=None)
def poisson_central_moment(k: int) -> PoissonMoment:
    """mu_k(s) via mu_k = s * sum_{j<=k-2} C(k-1, j) mu_j, memoized."""
    if k < 0:
        raise ValueError(f"moment order must be >= 0, got {k}")
    if k == 0:
        return PoissonMoment(0, UniPoly.one())
    if k == 1:
        return PoissonMoment(1, UniPoly.zero())
    acc = UniPoly.zero()
    for j in range(k - 1):
        acc = acc + math.comb(k - 1, j) * poisson_central_moment(j).poly
    poly = acc.shifted(1)
    assert poly.degree == k // 2, f"degree of mu_{k} should be {k // 2}"
    return PoissonMoment(k, poly)


@lru_cache(maxsize=None)
def binomial_central_moment(k: int) -> BinomialMoment:
    """mu_k(n, s) via mu_k = s(1-s) * [n (k-1) mu_{k-2} + d mu_{k-1} / ds]."""
    if k < 0:
        raise ValueError(f"moment order must be >= 0, got {k}")
    if k == 0:
        return BinomialMoment(0, BiPoly.constant(1))
    if k == 1:
        return BinomialMoment(1, BiPoly.zero())
    prev2 = binomial_central_moment(k - 2).poly
    prev1 = binomial_central_moment(k - 1).poly
    s_times_q = BiPoly.from_s_poly(UniPoly((0, 1, -1)))  # s(1-s)
    inner = (k - 1) * prev2.times_n() + prev1.derivative_s()
    return BinomialMoment(k, s_times_q * inner)


def moment_oracle_poisson(k: int, s, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """E[(N_s - s)^k] by certified series truncation, independent of the
    moment polynomials."""
    if k < 0:
        raise ValueError(f"moment order must be >= 0, got {k}")
    with ctx.working():
        s_m = to_mpf(s)
        if s_m <= 0:
            raise DomainError(f"s must be > 0, got {s_m}")

        def centered_powers() -> Iterator[mpf]:
            j = 0
            while True:
                yield (j - s_m) ** k
                j += 1

        value, _ = oracle.poisson_expectation(s_m, centered_powers, ctx)
    return value


def moment_oracle_binomial(k: int, n: int, s) -> Fraction:
    """E[(B_{n,s} - ns)^k] as an exact rational finite sum."""
    if k < 0:
        raise ValueError(f"moment order must be >= 0, got {k}")
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    s = as_fraction(s)
    if not 0 < s < 1:
        raise DomainError(f"s must be in (0,1), got {s}")
    q = 1 - s
    mean = n * s
    return sum(
        (math.comb(n, j) * s**j * q ** (n - j) * (j - mean) ** k for j in range(n + 1)),
        Fraction(0),
    )
