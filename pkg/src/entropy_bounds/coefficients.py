"""Derivation of every expansion coefficient from first principles.

Nothing in this module is hard-coded: the large-argument coefficients come
from integrating central-moment polynomials term by term, and the
small-argument coefficients are alternating sums of logarithms evaluated
under a precision-stability protocol.  Published tables exist only in the
test suite, as golden data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import mpmath
from mpmath import mp, mpf

from .moments import binomial_central_moment, poisson_central_moment
from .symbolic import (
    DEFAULT_CONTEXT,
    LaurentPoly,
    LogLaurent,
    PrecisionContext,
    PrecisionError,
    UniPoly,
    integrate_tail,
    integrate_to_one,
)


@dataclass(frozen=True)
class PoissonCoeffSet:
    """Large-argument Poisson coefficients of order m.

    ``b[k]`` (k = 1..2m-1) are the expansion terms, ``a[k]`` (k = m..2m) the
    gap terms; all exact rationals.  The gap integrand is an even central
    moment, so every a(m, k) is nonnegative.
    """

    m: int
    b: Mapping[int, Fraction]
    a: Mapping[int, Fraction]

    def __post_init__(self) -> None:
        if set(self.b) != set(range(1, 2 * self.m)):
            raise ValueError(f"b indices must cover 1..{2 * self.m - 1}, got {sorted(self.b)}")
        if set(self.a) != set(range(self.m, 2 * self.m + 1)):
            raise ValueError(f"a indices must cover {self.m}..{2 * self.m}, got {sorted(self.a)}")
        if any(v < 0 for v in self.a.values()):
            raise ValueError("gap coefficients a(m, k) must be nonnegative")


@dataclass(frozen=True)
class BinomialCoeffSet:
    """Large-n binomial coefficients of order m, as functions of q = 1 - p.

    Each entry is a LogLaurent in q, defined on q in (0, 1].
    """

    m: int
    b_tilde: Mapping[int, LogLaurent]
    a_tilde: Mapping[int, LogLaurent]

    def __post_init__(self) -> None:
        if set(self.b_tilde) != set(range(1, 2 * self.m)):
            raise ValueError(f"b~ indices must cover 1..{2 * self.m - 1}")
        if set(self.a_tilde) != set(range(self.m, 2 * self.m + 1)):
            raise ValueError(f"a~ indices must cover {self.m}..{2 * self.m}")


@lru_cache(maxsize=None)
def poisson_coeffs(m: int) -> PoissonCoeffSet:
    """Derive a(m, k) and b(m, k) by tail integration of moment polynomials.

    The expansion integrand is sum_{j=3}^{2m+1} (-1)^(j-1) mu_j(s) /
    (j (j-1) s^j), a Laurent polynomial with powers s^-2 .. s^-2m; the gap
    integrand is mu_{2m+2}(s) / ((2m+1) s^(2m+2)).
    """
    if m < 1:
        raise ValueError(f"order m must be >= 1, got {m}")
    integrand = LaurentPoly()
    for j in range(3, 2 * m + 2):
        scale = Fraction((-1) ** (j - 1), j * (j - 1))
        integrand = integrand + LaurentPoly.from_poly(
            poisson_central_moment(j).poly, shift=-j, scale=scale
        )
    b = {-e: c for e, c in integrate_tail(integrand).terms()}

    gap_integrand = LaurentPoly.from_poly(
        poisson_central_moment(2 * m + 2).poly,
        shift=-(2 * m + 2),
        scale=Fraction(1, 2 * m + 1),
    )
    a = {-e: c for e, c in integrate_tail(gap_integrand).terms()}
    return PoissonCoeffSet(m=m, b=b, a=a)


def _collect_by_inverse_n_power(orders: list[int], scale_of) -> dict[int, LogLaurent]:
    """Shared assembly step for the binomial coefficient functions.

    Builds n * sum_j scale(j) * mu_j(n, s) / (ns)^j as a Laurent polynomial
    in s for each power of 1/n, integrates each piece over [q, 1], and
    returns {k: coefficient of n^-k}.
    """
    by_n_power: dict[int, dict[int, Fraction]] = {}
    for j in orders:
        scale = scale_of(j)
        mu = binomial_central_moment(j).poly
        for i, poly_in_n in enumerate(mu.coeffs):
            for d, coef in enumerate(poly_in_n.coeffs):
                if coef == 0:
                    continue
                n_exp = 1 - j + d
                s_exp = i - j
                bucket = by_n_power.setdefault(n_exp, {})
                bucket[s_exp] = bucket.get(s_exp, Fraction(0)) + scale * coef
    out: dict[int, LogLaurent] = {}
    for n_exp, terms in by_n_power.items():
        piece = LaurentPoly(terms)
        if piece.is_zero:
            continue
        assert n_exp < 0, f"unexpected nonnegative power of n: {n_exp}"
        out[-n_exp] = integrate_to_one(piece)
    return out


@lru_cache(maxsize=None)
def binomial_coeffs(m: int) -> BinomialCoeffSet:
    """Derive a~(m, k; p) and b~(m, k; p) as LogLaurent functions of q."""
    if m < 1:
        raise ValueError(f"order m must be >= 1, got {m}")
    b_tilde = _collect_by_inverse_n_power(
        list(range(3, 2 * m + 2)),
        lambda j: Fraction((-1) ** j, j * (j - 1)),
    )
    a_tilde = _collect_by_inverse_n_power(
        [2 * m + 2],
        lambda j: Fraction(1, 2 * m + 1),
    )
    return BinomialCoeffSet(m=m, b_tilde=b_tilde, a_tilde=a_tilde)


def _stable_log_combination(terms: tuple[tuple[int, int], ...], ctx: PrecisionContext) -> mpf:
    """Sum of coef * log(arg) for integer pairs, with cancellation control.

    Alternating binomial sums of logs lose roughly one bit per order, so the
    sum is evaluated at 4x and 8x the context precision; both results rounded
    to ctx.bits must agree bit for bit.  On disagreement the precision
    doubles, twice, before giving up.
    """

    def at(prec_bits: int) -> mpf:
        with mp.workprec(prec_bits):
            total = mpf(0)
            for coef, arg in terms:
                total += coef * mpmath.log(arg)
            return total

    for lo, hi in ((4, 8), (8, 16), (16, 32)):
        v1 = ctx.round(at(lo * ctx.bits))
        v2 = ctx.round(at(hi * ctx.bits))
        if v1 == v2:
            return v1
    raise PrecisionError(
        f"alternating log sum did not stabilize at {32 * ctx.bits} bits"
    )


@lru_cache(maxsize=None)
def c_coeff(k: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Small-argument coefficient c(k) = sum_j (-1)^(k-1-j) C(k-1, j) log(j+1).

    Its sign is (-1)^k.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    terms = tuple(
        ((-1) ** (k - 1 - j) * math.comb(k - 1, j), j + 1) for j in range(k)
    )
    return _stable_log_combination(terms, ctx)


@lru_cache(maxsize=None)
def c_tilde_coeff(n: int, k: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Binomial analogue: sum_j (-1)^(k-1-j) C(k-1, j) log(n - j), 2 <= k <= n."""
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    terms = tuple(
        ((-1) ** (k - 1 - j) * math.comb(k - 1, j), n - j) for j in range(k)
    )
    return _stable_log_combination(terms, ctx)


@lru_cache(maxsize=None)
def _power_sum_poly(e: int) -> UniPoly:
    """p^e + q^e as a polynomial in u = pq, using p + q = 1.

    Newton's identity: s_0 = 2, s_1 = 1, s_e = s_{e-1} - u s_{e-2}.
    """
    if e == 0:
        return UniPoly((2,))
    if e == 1:
        return UniPoly((1,))
    prev, cur = UniPoly((2,)), UniPoly((1,))
    for _ in range(e - 1):
        prev, cur = cur, cur - prev.shifted(1)
    return cur


def _symmetrize_pq(f: LogLaurent) -> LogLaurent:
    """f(q) + f(p) rewritten exactly as a LogLaurent in u = pq.

    Valid for any f: each p^e + q^e is symmetric in (p, q), hence a
    polynomial in pq once p + q = 1; for e < 0 it is s_{|e|}(u) * u^e.  The
    log part uses log p + log q = log u.
    """
    acc = LaurentPoly()
    for e, c in f.laurent.terms():
        acc = acc + LaurentPoly.from_poly(_power_sum_poly(abs(e)), shift=min(e, 0), scale=c)
    return LogLaurent(acc, f.log_coeff)


@lru_cache(maxsize=None)
def stirling_m1_constants() -> tuple[LogLaurent, LogLaurent, LogLaurent, LogLaurent]:
    """The four constants of the order-1 binomial entropy bound, in u = pq.

    Assembled from the order-1 binomial coefficient functions symmetrized in
    p <-> q, combined with the classical two-sided Stirling bounds on log n!
    (1/(12n) - 1/(360n^3) below, 1/(12n) above).  Returned as (C1, C2, C3, C4):
    lower bound C1/n + C2/n^2 + C3/n^3, upper bound C4/n.
    """
    cs = binomial_coeffs(1)
    sym_b = _symmetrize_pq(cs.b_tilde[1])
    sym_a1 = _symmetrize_pq(cs.a_tilde[1])
    sym_a2 = _symmetrize_pq(cs.a_tilde[2])
    twelfth = LogLaurent.constant(Fraction(1, 12))
    c4 = twelfth - sym_b
    c1 = c4 - sym_a1
    c2 = -sym_a2
    c3 = LogLaurent.constant(Fraction(-1, 360))
    return c1, c2, c3, c4
