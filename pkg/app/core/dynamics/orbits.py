"""
Orbit classification and exceptional points
"""
import logging
from fractions import Fraction
from typing import Literal, Optional

from app.config import settings
from app.core.dynamics.periodic import forms, iterate_forms
from app.core.dynamics.rational_map import ProjPointQ, RationalMap, iterate_exact
from app.core.errors import ComputationError, InvalidInputError
from app.core.exact import PolyQ, poly_divrem, poly_gcd
from app.core.results import ResultModel

logger = logging.getLogger(__name__)


class OrbitClass(ResultModel):
    """Outcome of a bounded exact orbit search"""

    point: ProjPointQ
    kind: Literal["periodic", "preperiodic", "wandering"]
    tail: Optional[int] = None
    period: Optional[int] = None
    steps: int
    exceptional: bool = False


def is_exceptional(phi: RationalMap, point: ProjPointQ) -> bool:
    """
    True iff the backward orbit of the point is finite

    Equivalent to phi^-2(x) = {x}, i.e. the degree d^2 form
    b P_2 - a Q_2 is a constant multiple of (b T0 - a T1)^(d^2).
    """
    pk, qk = forms(phi, 2, cap=max(settings.EXACT_DEGREE_CAP, phi.d ** 2))
    a, b = point.a, point.b
    g = pk * b - qk * a
    big_d = phi.d ** 2
    if b == 0:
        return g.degree == 0
    if g.degree != big_d:
        return False
    model = PolyQ.from_coefficients([-a, b]) ** big_d
    return g * (Fraction(b) ** big_d) == model * g.leading_coefficient


def backward_orbit_size(phi: RationalMap, point: ProjPointQ, levels: int) -> int:
    """
    Number of distinct points in phi^-1(x) u ... u phi^-levels(x) over the algebraic closure
    """
    if levels < 1:
        raise InvalidInputError("levels must be at least 1")
    union = PolyQ.constant(1)
    has_infinity = False
    for k, (pk, qk) in enumerate(iterate_forms(phi), start=1):
        s = pk * point.b - qk * point.a
        if s.degree < phi.d ** k:
            has_infinity = True
        sqf = poly_divrem(s, poly_gcd(s, s.derivative()))[0]
        # lcm of the square-free parts
        union = poly_divrem(union * sqf, poly_gcd(union, sqf))[0]
        if k == levels:
            break
    return union.degree + (1 if has_infinity else 0)


def classify_point(
    phi: RationalMap,
    point: ProjPointQ,
    bound: int = settings.ORBIT_BOUND,
    bit_cap: int = settings.EXACT_BIT_CAP,
) -> OrbitClass:
    """
    Classify the orbit of a rational point by exact iteration

    Args:
        phi: Rational map
        point: Starting point
        bound: Largest number of iterations to try

    Returns:
        OrbitClass with tail and period when a repetition appears within bound
        steps; otherwise "wandering" up to the bound. There is no
        height-based early exit: the bound alone decides.
    """
    if bound < 1:
        raise InvalidInputError("orbit bound must be at least 1")
    exceptional = is_exceptional(phi, point)
    seen = {point: 0}
    current = point
    for j in range(1, bound + 1):
        current = iterate_exact(phi, current, 1)
        if current in seen:
            i = seen[current]
            kind = "periodic" if i == 0 else "preperiodic"
            logger.debug(f"Orbit of {point} repeats at steps {i} and {j}")
            return OrbitClass(
                point=point, kind=kind, tail=i, period=j - i, steps=j, exceptional=exceptional
            )
        seen[current] = j
        if max(abs(current.a), current.b).bit_length() > bit_cap:
            raise ComputationError("exact iteration budget exceeded")
    return OrbitClass(point=point, kind="wandering", steps=bound, exceptional=exceptional)
