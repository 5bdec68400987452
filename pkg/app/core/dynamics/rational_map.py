"""
Rational maps of P^1 over Q as pairs of binary forms
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Callable, List, Sequence, Tuple

from app.config import settings
from app.core.errors import ComputationError, InvalidInputError
from app.core.exact import (
    PolyQ,
    RatLike,
    form_resultant,
    prime_support,
    rat_to_str,
    to_rat,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProjPointQ:
    """
    A point [a:b] of P^1(Q) in normalised integer coordinates:
    gcd(a, b) = 1, b >= 0 and a = 1 when b = 0.
    """

    a: int
    b: int

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise InvalidInputError("degenerate point [0:0]")
        if gcd(self.a, self.b) != 1 or self.b < 0 or (self.b == 0 and self.a != 1):
            raise InvalidInputError(f"unnormalised point [{self.a}:{self.b}]")

    @classmethod
    def of(cls, a: RatLike, b: RatLike = 1) -> "ProjPointQ":
        """Normalise any nonzero rational pair"""
        a, b = to_rat(a), to_rat(b)
        if a == 0 and b == 0:
            raise InvalidInputError("degenerate point [0:0]")
        scale = a.denominator * b.denominator
        ia = int(a * scale)
        ib = int(b * scale)
        g = gcd(ia, ib)
        ia, ib = ia // g, ib // g
        if ib < 0 or (ib == 0 and ia < 0):
            ia, ib = -ia, -ib
        return cls(ia, ib)

    @classmethod
    def infinity(cls) -> "ProjPointQ":
        return cls(1, 0)

    @classmethod
    def parse(cls, text: str) -> "ProjPointQ":
        """"inf" or a rational such as "3/2" """
        if text.strip().lower() in ("inf", "infinity", "oo"):
            return cls.infinity()
        return cls.of(to_rat(text))

    @property
    def is_infinity(self) -> bool:
        return self.b == 0

    def as_rat(self) -> Fraction:
        if self.is_infinity:
            raise ComputationError("point at infinity has no affine coordinate")
        return Fraction(self.a, self.b)

    def to_json(self) -> str:
        return str(self)

    def __str__(self) -> str:
        if self.is_infinity:
            return "inf"
        return rat_to_str(self.as_rat())


def homogeneous_eval(coeffs: Sequence[Any], x: Any, y: Any, d: int, one: Any = 1) -> Any:
    """
    Evaluate sum_j c_j x^(d-j) y^j in any commutative ring

    Args:
        coeffs: Coefficients ordered T0^d, ..., T1^d
        x, y: Ring elements
        d: Degree
        one: Multiplicative identity of the ring
    """
    xp = [one]
    yp = [one]
    for _ in range(d):
        xp.append(xp[-1] * x)
        yp.append(yp[-1] * y)
    total = None
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        term = xp[d - j] * yp[j] * c
        total = term if total is None else total + term
    if total is None:
        return one * 0
    return total


@dataclass(frozen=True)
class RationalMap:
    """
    phi = [P : Q] with P, Q binary forms of common degree d >= 2 and
    Res(P, Q) != 0. Coefficients are ordered T0^d, T0^(d-1) T1, ..., T1^d.
    """

    d: int
    p: Tuple[Fraction, ...]
    q: Tuple[Fraction, ...]
    resultant: Fraction = field(init=False, compare=False)

    def __post_init__(self):
        if self.d < 2:
            raise InvalidInputError("degree must be at least 2")
        if len(self.p) != self.d + 1 or len(self.q) != self.d + 1:
            raise InvalidInputError("coefficient list length must be d+1")
        if all(c == 0 for c in self.p) or all(c == 0 for c in self.q):
            raise InvalidInputError("degenerate map")
        res = form_resultant(self.p, self.q, self.d)
        if res == 0:
            raise InvalidInputError("degenerate map")
        object.__setattr__(self, "resultant", res)

    @property
    def p_affine(self) -> PolyQ:
        """P(t, 1)"""
        return PolyQ.from_coefficients(list(reversed(self.p)))

    @property
    def q_affine(self) -> PolyQ:
        """Q(t, 1)"""
        return PolyQ.from_coefficients(list(reversed(self.q)))

    @property
    def is_polynomial(self) -> bool:
        """Q = c T1^d, so infinity is a totally invariant fixed point"""
        return all(c == 0 for c in self.q[:-1])

    def eval_pair(self, x: Any, y: Any, one: Any = 1) -> Tuple[Any, Any]:
        return (
            homogeneous_eval(self.p, x, y, self.d, one),
            homogeneous_eval(self.q, x, y, self.d, one),
        )

    def converted(self, convert: Callable[[Fraction], Any]) -> Tuple[List[Any], List[Any]]:
        """Coefficient lists mapped into another number system"""
        return [convert(c) for c in self.p], [convert(c) for c in self.q]

    def to_json(self) -> dict:
        return {
            "degree": self.d,
            "P": [rat_to_str(c) for c in self.p],
            "Q": [rat_to_str(c) for c in self.q],
        }

    def __str__(self) -> str:
        return f"[{', '.join(map(rat_to_str, self.p))} : {', '.join(map(rat_to_str, self.q))}]"


def new_map(p_coeffs: Sequence[RatLike], q_coeffs: Sequence[RatLike]) -> RationalMap:
    """
    Build a validated rational map from coefficient lists

    Args:
        p_coeffs: Coefficients of P ordered T0^d, ..., T1^d
        q_coeffs: Coefficients of Q in the same order

    Returns:
        The map with its resultant cached
    """
    if len(p_coeffs) != len(q_coeffs):
        raise InvalidInputError("coefficient list length must be d+1")
    d = len(p_coeffs) - 1
    phi = RationalMap(d, tuple(to_rat(c) for c in p_coeffs), tuple(to_rat(c) for c in q_coeffs))
    logger.debug(f"Built map of degree {d} with resultant {rat_to_str(phi.resultant)}")
    return phi


def polynomial_map(coefficients: Sequence[RatLike]) -> RationalMap:
    """
    The map z -> f(z) for a polynomial f of degree d >= 2

    Args:
        coefficients: Coefficients of f lowest degree first
    """
    coeffs = [to_rat(c) for c in coefficients]
    d = len(coeffs) - 1
    p = list(reversed(coeffs))
    q = [Fraction(0)] * d + [Fraction(1)]
    return new_map(p, q)


def iterate_raw(
    phi: RationalMap,
    a: Fraction,
    b: Fraction,
    k: int,
    cap: int = settings.EXACT_ITERATION_CAP,
) -> Tuple[Fraction, Fraction]:
    """
    Apply the forms k times without rescaling

    Coordinates grow like d^k in bit length, hence the cap on k.
    """
    if k < 0:
        raise InvalidInputError("iteration count must be non-negative")
    if k > cap:
        raise ComputationError("exact iteration budget exceeded")
    for _ in range(k):
        a, b = phi.eval_pair(a, b)
    return a, b


def iterate_exact(phi: RationalMap, point: ProjPointQ, k: int) -> ProjPointQ:
    """phi^k(point), normalising after every step"""
    if k < 0:
        raise InvalidInputError("iteration count must be non-negative")
    a, b = point.a, point.b
    for _ in range(k):
        x, y = phi.eval_pair(Fraction(a), Fraction(b))
        nxt = ProjPointQ.of(x, y)
        a, b = nxt.a, nxt.b
    return ProjPointQ(a, b)


def derivative_pair(phi: RationalMap) -> Tuple[PolyQ, PolyQ]:
    """
    (p'q - pq', q^2) for the dehomogenised p = P(t,1), q = Q(t,1)

    Their ratio is phi'(t) at affine points.
    """
    p, q = phi.p_affine, phi.q_affine
    return p.derivative() * q - p * q.derivative(), q * q


def bad_primes(phi: RationalMap) -> List[int]:
    """
    Primes where the map may have bad reduction

    These divide the resultant of the cleared integral forms, so it is
    enough to collect the primes of Res(P, Q) together with the primes of
    any coefficient denominator.
    """
    values = [phi.resultant]
    values.extend(Fraction(c.denominator) for c in phi.p + phi.q if c != 0)
    return prime_support(values)
