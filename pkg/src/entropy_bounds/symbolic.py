"""Exact arithmetic kernel.

All coefficient derivations run on `fractions.Fraction` end to end: univariate
polynomials, Laurent polynomials (negative exponents allowed), polynomials in
two variables, and Laurent-plus-logarithm expressions.  Nothing here ever
rounds; numeric evaluation is a separate step done with mpmath at a precision
chosen through :class:`PrecisionContext`.

The two term-wise integration rules that turn moment polynomials into
expansion coefficients live here as well: :func:`integrate_tail` for
``integral_x^inf`` of pure negative powers, and :func:`integrate_to_one` for
``integral_q^1``, where the exponent -1 produces a ``-log q`` term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

import mpmath
from mpmath import mp, mpf

Scalar = Union[int, Fraction]

# extra mantissa bits used while evaluating, before rounding to ctx.bits
_GUARD_BITS = 64


class DomainError(ValueError):
    """Input lies outside the mathematical domain of the expression."""


class NonIntegrableTailError(ValueError):
    """Tail integral diverges: an exponent >= -1 is present."""


class PrecisionError(ArithmeticError):
    """Requested accuracy could not be certified at feasible precision."""


def as_fraction(x: Scalar | str) -> Fraction:
    """Coerce an int, Fraction, or 'num/den' string to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def rational_str(x: Scalar) -> str:
    """Canonical 'num/den' form, denominator always present: 1/6, -1/12, 3/1."""
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


@dataclass(frozen=True)
class PrecisionContext:
    """Working mantissa precision (bits) and the truncation target for series.

    ``target_rel_err`` is the certified relative error the oracles must reach
    before they report a value.
    """

    bits: int = 256
    target_rel_err: float = 1e-30

    def __post_init__(self) -> None:
        if self.bits < 64:
            raise ValueError(f"bits must be >= 64, got {self.bits}")
        if not 0 < self.target_rel_err < 1:
            raise ValueError(f"target_rel_err must be in (0,1), got {self.target_rel_err}")

    def working(self):
        """mpmath context for internal evaluation (guard bits included)."""
        return mp.workprec(self.bits + _GUARD_BITS)

    def round(self, x: mpf) -> mpf:
        """Round a value to exactly ``bits`` mantissa bits."""
        with mp.workprec(self.bits):
            return +x


DEFAULT_CONTEXT = PrecisionContext()


def to_mpf(x) -> mpf:
    """Convert int/float/str/Fraction/mpf to mpf at the ambient precision."""
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


@dataclass(frozen=True)
class Interval:
    """Certified enclosure: lower <= quantity <= upper."""

    lower: mpf
    upper: mpf

    def __post_init__(self) -> None:
        if not self.lower <= self.upper:
            raise ValueError(f"empty interval: [{self.lower}, {self.upper}]")

    @property
    def width(self) -> mpf:
        return self.upper - self.lower

    @property
    def midpoint(self) -> mpf:
        return (self.lower + self.upper) / 2

    def contains(self, x) -> bool:
        return self.lower <= x <= self.upper


class UniPoly:
    """Polynomial in one indeterminate with Fraction coefficients.

    Coefficients are indexed by power; trailing zeros are trimmed so equality
    is structural.  The zero polynomial has degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()) -> None:
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):  # immutable
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def zero(cls) -> "UniPoly":
        return cls()

    @classmethod
    def one(cls) -> "UniPoly":
        return cls((1,))

    @classmethod
    def x(cls) -> "UniPoly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, UniPoly):
            if self.is_zero or other.is_zero:
                return UniPoly()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return UniPoly(out)
        return UniPoly(c * as_fraction(other) for c in self.coeffs)

    __rmul__ = __mul__

    def shifted(self, k: int) -> "UniPoly":
        """Multiply by x**k (k >= 0)."""
        if k < 0:
            raise ValueError("use LaurentPoly for negative shifts")
        if self.is_zero:
            return self
        return UniPoly((Fraction(0),) * k + self.coeffs)

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def __call__(self, x):
        """Horner evaluation; exact when x is int/Fraction, mpf otherwise."""
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        acc = mpf(0)
        x = to_mpf(x)
        for c in reversed(self.coeffs):
            acc = acc * x + to_mpf(c)
        return acc

    def __repr__(self) -> str:
        if self.is_zero:
            return "UniPoly(0)"
        parts = [f"{rational_str(c)}*x^{i}" for i, c in enumerate(self.coeffs) if c != 0]
        return "UniPoly(" + " + ".join(parts) + ")"


class LaurentPoly:
    """Finite sum of c_e * x**e with integer exponents of either sign.

    Zero coefficients are never stored, so structural equality is canonical.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, Scalar] | Iterable[tuple[int, Scalar]] = ()) -> None:
        items = terms.items() if isinstance(terms, Mapping) else terms
        d: dict[int, Fraction] = {}
        for e, c in items:
            c = as_fraction(c)
            if c != 0:
                d[int(e)] = d.get(int(e), Fraction(0)) + c
                if d[int(e)] == 0:
                    del d[int(e)]
        object.__setattr__(self, "_terms", d)

    def __setattr__(self, *a):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def from_poly(cls, poly: UniPoly, shift: int = 0, scale: Scalar = 1) -> "LaurentPoly":
        """scale * x**shift * poly(x)."""
        scale = as_fraction(scale)
        return cls((i + shift, c * scale) for i, c in enumerate(poly.coeffs))

    def terms(self) -> tuple[tuple[int, Fraction], ...]:
        """Terms sorted by ascending exponent."""
        return tuple(sorted(self._terms.items()))

    def coeff(self, e: int) -> Fraction:
        return self._terms.get(e, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def min_exp(self) -> int:
        return min(self._terms)

    @property
    def max_exp(self) -> int:
        return max(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self.terms())

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        return LaurentPoly(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly((e, -c) for e, c in self._terms.items())

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            out: list[tuple[int, Fraction]] = []
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    out.append((e1 + e2, c1 * c2))
            return LaurentPoly(out)
        s = as_fraction(other)
        return LaurentPoly((e, c * s) for e, c in self._terms.items())

    __rmul__ = __mul__

    def shifted(self, k: int) -> "LaurentPoly":
        return LaurentPoly((e + k, c) for e, c in self._terms.items())

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            if x == 0 and not self.is_zero and self.min_exp < 0:
                raise ZeroDivisionError("Laurent polynomial with negative powers at 0")
            return sum((c * Fraction(x) ** e for e, c in self.terms()), Fraction(0))
        x = to_mpf(x)
        return sum((to_mpf(c) * x**e for e, c in self.terms()), mpf(0))

    def __repr__(self) -> str:
        if self.is_zero:
            return "LaurentPoly(0)"
        parts = [f"{rational_str(c)}*x^{e}" for e, c in self.terms()]
        return "LaurentPoly(" + " + ".join(parts) + ")"


class BiPoly:
    """Polynomial in s whose coefficients are UniPoly in n.

    ``coeffs[i]`` is the polynomial-in-n multiplying s**i.  Used for the
    binomial central moments, which are exact polynomials in both variables.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[UniPoly] = ()) -> None:
        cs = list(coeffs)
        while cs and cs[-1].is_zero:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("BiPoly is immutable")

    @classmethod
    def zero(cls) -> "BiPoly":
        return cls()

    @classmethod
    def constant(cls, c: Scalar) -> "BiPoly":
        return cls((UniPoly((c,)),))

    @classmethod
    def from_s_poly(cls, poly: UniPoly) -> "BiPoly":
        """Lift a polynomial in s alone (n-free coefficients)."""
        return cls(UniPoly((c,)) for c in poly.coeffs)

    @property
    def degree_s(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> UniPoly:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else UniPoly()

    def __eq__(self, other) -> bool:
        return isinstance(other, BiPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "BiPoly") -> "BiPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return BiPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    def __neg__(self) -> "BiPoly":
        return BiPoly(-c for c in self.coeffs)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BiPoly):
            if self.is_zero or other.is_zero:
                return BiPoly()
            out = [UniPoly()] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
            return BiPoly(out)
        return BiPoly(c * other for c in self.coeffs)

    __rmul__ = __mul__

    def times_n(self) -> "BiPoly":
        """Multiply by the monomial n."""
        return BiPoly(c.shifted(1) for c in self.coeffs)

    def derivative_s(self) -> "BiPoly":
        return BiPoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def substitute_n(self, n: Scalar) -> UniPoly:
        """Fix n, leaving a polynomial in s."""
        return UniPoly(c(as_fraction(n)) for c in self.coeffs)

    def __call__(self, n, s):
        """Evaluate at (n, s); exact for int/Fraction arguments."""
        if isinstance(n, (int, Fraction)) and isinstance(s, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * s + c(n)
            return acc
        n, s = to_mpf(n), to_mpf(s)
        acc = mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * s + c(n)
        return acc

    def __repr__(self) -> str:
        return f"BiPoly({list(self.coeffs)!r})"


@dataclass(frozen=True)
class LogLaurent:
    """Laurent polynomial in q plus ``log_coeff * log(q)``.

    Evaluation is defined for q in (0, 1] only, the domain on which the
    binomial-side coefficient functions live.
    """

    laurent: LaurentPoly
    log_coeff: Fraction = Fraction(0)

    @classmethod
    def constant(cls, c: Scalar) -> "LogLaurent":
        return cls(LaurentPoly(((0, c),)), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return self.laurent.is_zero and self.log_coeff == 0

    def __add__(self, other: "LogLaurent") -> "LogLaurent":
        return LogLaurent(self.laurent + other.laurent, self.log_coeff + other.log_coeff)

    def __neg__(self) -> "LogLaurent":
        return LogLaurent(-self.laurent, -self.log_coeff)

    def __sub__(self, other: "LogLaurent") -> "LogLaurent":
        return self + (-other)

    def __mul__(self, other: Scalar) -> "LogLaurent":
        s = as_fraction(other)
        return LogLaurent(self.laurent * s, self.log_coeff * s)

    __rmul__ = __mul__

    def __call__(self, q):
        q = to_mpf(q)
        if not 0 < q <= 1:
            raise DomainError(f"LogLaurent defined on (0,1], got q={q}")
        value = self.laurent(q)
        if self.log_coeff != 0:
            value += to_mpf(self.log_coeff) * mpmath.log(q)
        return value

    def __repr__(self) -> str:
        return f"LogLaurent({self.laurent!r}, log_coeff={rational_str(self.log_coeff)})"


def integrate_tail(f: LaurentPoly) -> LaurentPoly:
    """Exact ``integral_x^inf f(s) ds`` as a Laurent polynomial in x.

    Term rule: s**(-k) integrates to x**(-(k-1)) / (k-1).  Every exponent of
    ``f`` must be <= -2, otherwise the tail diverges.
    """
    bad = [e for e, _ in f.terms() if e >= -1]
    if bad:
        raise NonIntegrableTailError(f"exponents {bad} make the tail integral diverge")
    return LaurentPoly((e + 1, c / (-e - 1)) for e, c in f.terms())


def integrate_to_one(f: LaurentPoly) -> LogLaurent:
    """Exact ``integral_q^1 f(s) ds`` as a LogLaurent in q.

    Exponent -1 contributes ``-log q``; exponent e != -1 contributes
    ``(1 - q**(e+1)) / (e+1)``, split into a constant and a power of q.
    """
    out: list[tuple[int, Fraction]] = []
    log_coeff = Fraction(0)
    for e, c in f.terms():
        if e == -1:
            log_coeff -= c
        else:
            out.append((0, c / (e + 1)))
            out.append((e + 1, -c / (e + 1)))
    return LogLaurent(LaurentPoly(out), log_coeff)


def eval_at(expr, point, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Evaluate any kernel expression at a numeric point, rounded to ctx.bits.

    Accepts UniPoly, LaurentPoly, LogLaurent, or a bare Fraction/int; the
    point may be int, float, str, Fraction, or mpf.
    """
    with ctx.working():
        if isinstance(expr, (int, Fraction)):
            value = to_mpf(expr)
        else:
            value = expr(to_mpf(point))
    return ctx.round(value)
