"""
Exact arithmetic over Q: rationals, univariate polynomials, resultants and p-adic valuations
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, List, Sequence, Tuple, Union

import sympy
from sympy.polys.densearith import (
    dup_add,
    dup_div,
    dup_mul,
    dup_mul_ground,
    dup_neg,
    dup_pow,
    dup_rem,
    dup_sub,
)
from sympy.polys.densebasic import dup_strip
from sympy.polys.densetools import dup_clear_denoms, dup_diff, dup_monic
from sympy.polys.domains import QQ, ZZ
from sympy.polys.euclidtools import dup_gcd, dup_resultant
from sympy.polys.sqfreetools import dup_sqf_list

from app.core.errors import ComputationError, InvalidInputError

logger = logging.getLogger(__name__)

Rat = Fraction
RatLike = Union[int, Fraction, str]


def to_rat(value: RatLike) -> Fraction:
    """
    Parse an exact rational from an int, Fraction or a "p/q" string

    Args:
        value: Integer, Fraction or decimal-free string such as "-3/4"

    Returns:
        The rational value
    """
    if isinstance(value, bool):
        raise InvalidInputError(f"malformed rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        parts = text.split("/")
        try:
            if len(parts) == 1:
                return Fraction(int(parts[0]))
            if len(parts) == 2:
                den = int(parts[1])
                if den == 0:
                    raise InvalidInputError(f"malformed rational: {value!r}")
                return Fraction(int(parts[0]), den)
        except ValueError:
            pass
    raise InvalidInputError(f"malformed rational: {value!r}")


def rat_to_str(q: Fraction) -> str:
    """Render a rational as "n" or "p/q" """
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _qq(value: RatLike):
    q = to_rat(value)
    return QQ(q.numerator, q.denominator)


def _frac(c) -> Fraction:
    return Fraction(int(QQ.numer(c)), int(QQ.denom(c)))


@dataclass(frozen=True)
class PolyQ:
    """
    Univariate polynomial over Q.

    ``rep`` is the dense representation used by sympy's low level polynomial
    toolkit: QQ coefficients, highest degree first, no leading zeros.
    """

    rep: Tuple

    @classmethod
    def from_rep(cls, rep: Iterable) -> "PolyQ":
        return cls(tuple(dup_strip(list(rep))))

    @classmethod
    def from_coefficients(cls, coefficients: Sequence[RatLike]) -> "PolyQ":
        """Build from coefficients listed lowest degree first"""
        return cls.from_rep(_qq(c) for c in reversed(list(coefficients)))

    @classmethod
    def constant(cls, value: RatLike) -> "PolyQ":
        return cls.from_coefficients([value])

    @classmethod
    def variable(cls) -> "PolyQ":
        return cls.from_coefficients([0, 1])

    @classmethod
    def linear_factor(cls, root: Fraction) -> "PolyQ":
        """den*t - num for a rational root num/den"""
        return cls.from_coefficients([-root.numerator, root.denominator])

    @property
    def coefficients(self) -> Tuple[Fraction, ...]:
        """Coefficients lowest degree first"""
        return tuple(_frac(c) for c in reversed(self.rep))

    @property
    def degree(self) -> int:
        return len(self.rep) - 1

    @property
    def is_zero(self) -> bool:
        return not self.rep

    @property
    def leading_coefficient(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return _frac(self.rep[0])

    def coefficient(self, i: int) -> Fraction:
        if i < 0 or i > self.degree:
            return Fraction(0)
        return _frac(self.rep[self.degree - i])

    def __add__(self, other: "PolyQ") -> "PolyQ":
        other = _as_poly(other)
        return PolyQ.from_rep(dup_add(list(self.rep), list(other.rep), QQ))

    __radd__ = __add__

    def __sub__(self, other: "PolyQ") -> "PolyQ":
        other = _as_poly(other)
        return PolyQ.from_rep(dup_sub(list(self.rep), list(other.rep), QQ))

    def __rsub__(self, other: "PolyQ") -> "PolyQ":
        return _as_poly(other) - self

    def __mul__(self, other: "PolyQ") -> "PolyQ":
        if isinstance(other, PolyQ):
            return PolyQ.from_rep(dup_mul(list(self.rep), list(other.rep), QQ))
        return PolyQ.from_rep(dup_mul_ground(list(self.rep), _qq(other), QQ))

    __rmul__ = __mul__

    def __neg__(self) -> "PolyQ":
        return PolyQ.from_rep(dup_neg(list(self.rep), QQ))

    def __pow__(self, n: int) -> "PolyQ":
        return PolyQ.from_rep(dup_pow(list(self.rep), n, QQ))

    def __call__(self, x: RatLike) -> Fraction:
        """Exact evaluation at a rational point"""
        x = to_rat(x)
        acc = Fraction(0)
        for c in self.rep:
            acc = acc * x + _frac(c)
        return acc

    def derivative(self) -> "PolyQ":
        return PolyQ.from_rep(dup_diff(list(self.rep), 1, QQ))

    def monic(self) -> "PolyQ":
        if self.is_zero:
            return self
        return PolyQ.from_rep(dup_monic(list(self.rep), QQ))

    def primitive_integral(self) -> Tuple[Fraction, Tuple[int, ...]]:
        """
        Split into a rational content and a primitive integer polynomial

        Returns:
            (content, integer coefficients highest degree first) with the
            leading integer coefficient positive
        """
        if self.is_zero:
            raise InvalidInputError("zero polynomial")
        common, ints = dup_clear_denoms(list(self.rep), QQ, ZZ, convert=True)
        ints = [int(c) for c in ints]
        g = reduce(gcd, ints, 0)
        if ints[0] < 0:
            g = -g
        prim = tuple(c // g for c in ints)
        return Fraction(g, int(common)), prim

    def to_json(self) -> List[str]:
        return [rat_to_str(c) for c in self.coefficients]

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i, c in reversed(list(enumerate(self.coefficients))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"{rat_to_str(c)}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")


def _as_poly(value) -> PolyQ:
    if isinstance(value, PolyQ):
        return value
    return PolyQ.constant(value)


def poly_divrem(a: PolyQ, b: PolyQ) -> Tuple[PolyQ, PolyQ]:
    """Euclidean division over Q"""
    if b.is_zero:
        raise ComputationError("zero divisor")
    q, r = dup_div(list(a.rep), list(b.rep), QQ)
    return PolyQ.from_rep(q), PolyQ.from_rep(r)


def poly_rem(a: PolyQ, b: PolyQ) -> PolyQ:
    if b.is_zero:
        raise ComputationError("zero divisor")
    return PolyQ.from_rep(dup_rem(list(a.rep), list(b.rep), QQ))


def poly_gcd(a: PolyQ, b: PolyQ) -> PolyQ:
    """Monic gcd; gcd(0, 0) is 0"""
    if a.is_zero and b.is_zero:
        return PolyQ.from_rep([])
    g = dup_gcd(list(a.rep), list(b.rep), QQ)
    return PolyQ.from_rep(dup_monic(g, QQ))


def squarefree_factors(f: PolyQ) -> Tuple[Fraction, List[Tuple[PolyQ, int]]]:
    """
    Square-free decomposition f = c * prod g_i^{m_i}

    Returns:
        (c, [(g_i, m_i), ...]) with pairwise coprime square-free monic g_i
    """
    if f.is_zero:
        raise InvalidInputError("zero polynomial")
    coeff, factors = dup_sqf_list(list(f.rep), QQ)
    return _frac(coeff), [(PolyQ.from_rep(g), m) for g, m in factors]


def is_squarefree(f: PolyQ) -> bool:
    return poly_gcd(f, f.derivative()).degree <= 0


def resultant(a: PolyQ, b: PolyQ) -> Fraction:
    """
    Resultant of two nonzero polynomials over Q

    Denominators are cleared and the subresultant PRS runs over Z; the result
    is rescaled through Res(c1 A, c2 B) = c1^deg(B) c2^deg(A) Res(A, B).
    """
    if a.is_zero or b.is_zero:
        raise InvalidInputError("zero polynomial")
    if a.degree == 0:
        return a.leading_coefficient ** b.degree
    if b.degree == 0:
        return b.leading_coefficient ** a.degree
    ca, fa = dup_clear_denoms(list(a.rep), QQ, ZZ, convert=True)
    cb, fb = dup_clear_denoms(list(b.rep), QQ, ZZ, convert=True)
    res = dup_resultant(fa, fb, ZZ)
    scale = Fraction(int(ca)) ** b.degree * Fraction(int(cb)) ** a.degree
    return Fraction(int(res)) / scale


def resultant_from_residue(f: PolyQ, residue: PolyQ, degree: int) -> Fraction:
    """
    Res(F, G) from G mod F and deg G alone

    Uses Res(F, G) = lc(F)^(deg G - deg r) Res(F, r) with r = G mod F.
    """
    if f.is_zero:
        raise InvalidInputError("zero polynomial")
    if residue.is_zero:
        return Fraction(0)
    return f.leading_coefficient ** (degree - residue.degree) * resultant(f, residue)


def form_resultant(p: Sequence[Fraction], q: Sequence[Fraction], d: int) -> Fraction:
    """
    Resultant of two binary forms of degree d

    Args:
        p: Coefficients of P ordered T0^d, T0^(d-1) T1, ..., T1^d
        q: Coefficients of Q in the same order
        d: Common degree

    Returns:
        Res(P, Q); zero exactly when P and Q share a projective root
    """
    pt = PolyQ.from_coefficients(list(reversed(list(p))))
    qt = PolyQ.from_coefficients(list(reversed(list(q))))
    if pt.is_zero or qt.is_zero:
        return Fraction(0)
    if pt.degree == d:
        return pt.leading_coefficient ** (d - qt.degree) * resultant(pt, qt)
    if qt.degree == d:
        sign = -1 if (d * d) % 2 else 1
        return sign * qt.leading_coefficient ** (d - pt.degree) * resultant(qt, pt)
    # both forms vanish at [1:0]
    return Fraction(0)


def val_p(q: RatLike, p: int) -> int:
    """p-adic valuation of a nonzero rational"""
    q = to_rat(q)
    if q == 0:
        raise ComputationError("valuation of zero")
    v = 0
    if q.numerator % p == 0:
        v += sympy.multiplicity(p, abs(q.numerator))
    if q.denominator % p == 0:
        v -= sympy.multiplicity(p, q.denominator)
    return v


def prime_support(values: Iterable[RatLike]) -> List[int]:
    """Sorted primes dividing some numerator or denominator"""
    primes = set()
    for value in values:
        q = to_rat(value)
        if q == 0:
            continue
        primes.update(sympy.factorint(abs(q.numerator)).keys())
        primes.update(sympy.factorint(q.denominator).keys())
    return sorted(primes)


def strip_primes(q: RatLike, primes: Iterable[int]) -> Fraction:
    """|q| with every listed prime divided out"""
    q = abs(to_rat(q))
    if q == 0:
        raise ComputationError("valuation of zero")
    num, den = q.numerator, q.denominator
    for p in primes:
        while num % p == 0:
            num //= p
        while den % p == 0:
            den //= p
    return Fraction(num, den)


def product_formula_check(q: RatLike) -> bool:
    """
    Verify prod_v |q|_v == 1 exactly over the primes of q and infinity

    The check multiplies |q|_inf by |q|_p = p^(-val_p q) for each prime found
    by factorisation and compares with 1 in exact arithmetic.
    """
    q = to_rat(q)
    if q == 0:
        raise ComputationError("valuation of zero")
    acc = abs(q)
    for p in prime_support([q]):
        acc *= Fraction(p) ** -val_p(q, p)
    ok = acc == 1
    if not ok:
        logger.warning(f"Product formula failed for {rat_to_str(q)}")
    return ok


@dataclass(frozen=True)
class ExactLog:
    """
    An exact real of the form coefficient * log(p)

    Finite-place logarithms of rationals are integer multiples of log p and
    scaled averages are rational multiples; this keeps them exact until
    they are rendered.
    """

    coefficient: Fraction
    prime: int

    @classmethod
    def of(cls, q: RatLike, p: int) -> "ExactLog":
        """log|q|_p = -val_p(q) log p"""
        return cls(Fraction(-val_p(q, p)), p)

    @classmethod
    def zero(cls, p: int) -> "ExactLog":
        return cls(Fraction(0), p)

    def __add__(self, other: "ExactLog") -> "ExactLog":
        if other.prime != self.prime:
            raise InvalidInputError("mixed primes in exact logarithm")
        return ExactLog(self.coefficient + other.coefficient, self.prime)

    def __sub__(self, other: "ExactLog") -> "ExactLog":
        return self + ExactLog(-other.coefficient, other.prime)

    def scale(self, factor: RatLike) -> "ExactLog":
        return ExactLog(self.coefficient * to_rat(factor), self.prime)

    def to_real(self, mp):
        """Evaluate in the given mpmath context"""
        c = self.coefficient
        return mp.mpf(c.numerator) / c.denominator * mp.log(self.prime)

    def __str__(self) -> str:
        return f"{rat_to_str(self.coefficient)}*log({self.prime})"


def rational_content(values: Iterable[Fraction]) -> Fraction:
    """Positive rational gcd of a list of rationals (0 if all vanish)"""
    num = 0
    den = 1
    for v in values:
        if v == 0:
            continue
        num = gcd(num, v.numerator)
        den = den * v.denominator // gcd(den, v.denominator)
    if num == 0:
        return Fraction(0)
    return Fraction(num, den)

