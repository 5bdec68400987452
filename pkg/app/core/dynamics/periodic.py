"""
Periodic-point and preimage polynomials of a rational map
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

from app.config import settings
from app.core.dynamics.rational_map import ProjPointQ, RationalMap
from app.core.errors import ComputationError, InvalidInputError
from app.core.exact import PolyQ, poly_rem, squarefree_factors

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FixedPointPoly:
    """R_k(t) = P_k(t,1) - t Q_k(t,1), whose roots are the finite points of period dividing k"""

    k: int
    poly: PolyQ
    inf_mult: int

    @property
    def total_degree(self) -> int:
        return self.poly.degree + self.inf_mult

    def multiplicity_profile(self) -> List[Tuple[int, int]]:
        """
        (multiplicity, number of distinct finite roots) pairs, sorted

        Multiplicity above one marks fixed points of phi^k with multiplier 1.
        """
        _, factors = squarefree_factors(self.poly)
        return sorted((m, g.degree) for g, m in factors if g.degree > 0)


@dataclass(frozen=True)
class PreimagePoly:
    """S_k(t) = u P_k(t,1) - s Q_k(t,1) for a target alpha = [s:u]"""

    k: int
    target: ProjPointQ
    poly: PolyQ
    inf_mult: int

    @property
    def total_degree(self) -> int:
        return self.poly.degree + self.inf_mult


def _check_budget(phi: RationalMap, k: int, cap: int) -> None:
    if k < 1:
        raise InvalidInputError("k must be at least 1")
    if phi.d ** k > cap:
        raise ComputationError("exact iteration budget exceeded")


def iterate_forms(phi: RationalMap) -> Iterator[Tuple[PolyQ, PolyQ]]:
    """Yield (P_k(t,1), Q_k(t,1)) for k = 1, 2, ..."""
    one = PolyQ.constant(1)
    x, y = PolyQ.variable(), one
    while True:
        x, y = phi.eval_pair(x, y, one)
        yield x, y


def forms(phi: RationalMap, k: int, cap: int = settings.EXACT_DEGREE_CAP) -> Tuple[PolyQ, PolyQ]:
    _check_budget(phi, k, cap)
    for j, pair in enumerate(iterate_forms(phi), start=1):
        if j == k:
            return pair
    raise AssertionError("unreachable")


def fixed_point_poly(phi: RationalMap, k: int, cap: int = settings.EXACT_DEGREE_CAP) -> FixedPointPoly:
    """
    Build R_k with its multiplicity at infinity

    Args:
        phi: Rational map of degree d
        k: Iterate, at least 1
        cap: Largest admissible d^k

    Returns:
        FixedPointPoly with deg R_k + inf_mult = d^k + 1
    """
    pk, qk = forms(phi, k, cap)
    r = pk - PolyQ.variable() * qk
    inf_mult = phi.d ** k + 1 - r.degree
    logger.debug(f"R_{k} has degree {r.degree}, {inf_mult} root(s) at infinity")
    return FixedPointPoly(k, r, inf_mult)


def preimage_poly(
    phi: RationalMap,
    alpha: ProjPointQ,
    k: int,
    cap: int = settings.EXACT_DEGREE_CAP,
) -> PreimagePoly:
    """Build S_k for a non-exceptional target alpha"""
    from app.core.dynamics.orbits import is_exceptional

    if is_exceptional(phi, alpha):
        raise ComputationError("exceptional target")
    pk, qk = forms(phi, k, cap)
    s = pk * alpha.b - qk * alpha.a
    inf_mult = phi.d ** k - s.degree
    return PreimagePoly(k, alpha, s, inf_mult)


# Truncated power series in eps, coefficient lists lowest order first

def _series_mul(f: List[Fraction], g: List[Fraction], n: int) -> List[Fraction]:
    out = [Fraction(0)] * n
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j in range(min(len(g), n - i)):
            if g[j]:
                out[i + j] += a * g[j]
    return out


def _series_form(coeffs, x: List[Fraction], y: List[Fraction], d: int, n: int) -> List[Fraction]:
    one = [Fraction(1)] + [Fraction(0)] * (n - 1)
    xp, yp = [one], [one]
    for _ in range(d):
        xp.append(_series_mul(xp[-1], x, n))
        yp.append(_series_mul(yp[-1], y, n))
    out = [Fraction(0)] * n
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        term = _series_mul(xp[d - j], yp[j], n)
        out = [o + c * t for o, t in zip(out, term)]
    return out


@dataclass(frozen=True)
class InfinityData:
    """Leading coefficient and multiplicity at infinity of R_k or S_k"""

    leading: Fraction
    inf_mult: int
    degree: int


def infinity_data(
    phi: RationalMap,
    k: int,
    target: Optional[ProjPointQ] = None,
    cap: int = settings.EXACT_ITERATION_CAP,
) -> InfinityData:
    """
    Leading coefficient and order at infinity of R_k (target None) or S_k

    Expands (P_k(1, eps), Q_k(1, eps)) as truncated power series; the first
    nonzero coefficient of eps P_k - Q_k (resp. u P_k - s Q_k) is the
    leading coefficient and its index is the multiplicity at infinity. The
    polynomial degree of R_k or S_k is never formed.
    """
    if k < 1:
        raise InvalidInputError("k must be at least 1")
    if k > cap:
        raise ComputationError("exact iteration budget exceeded")
    d = phi.d
    full = d ** k + (1 if target is None else 0)

    if phi.is_polynomial:
        # P_k(1,0) = a^((d^k - 1)/(d - 1)) and Q_k(1, eps) = c^(...) eps^(d^k)
        lead = phi.p[0] ** ((d ** k - 1) // (d - 1))
        if target is None:
            return InfinityData(lead, 1, full - 1)
        if target.is_infinity:
            raise ComputationError("exceptional target")
        return InfinityData(target.b * lead, 0, full)

    n = 4
    while True:
        x = [Fraction(1)] + [Fraction(0)] * (n - 1)
        y = [Fraction(0), Fraction(1)] + [Fraction(0)] * (n - 2)
        for _ in range(k):
            x, y = _series_form(phi.p, x, y, d, n), _series_form(phi.q, x, y, d, n)
        if target is None:
            combo = [-c for c in y]
            for i in range(n - 1):
                combo[i + 1] += x[i]
        else:
            combo = [target.b * a - target.a * b for a, b in zip(x, y)]
        for i, c in enumerate(combo):
            if c != 0:
                if i > full:
                    break
                return InfinityData(c, i, full - i)
        if n > full + 1:
            raise ComputationError("exceptional target")
        n *= 2
        logger.debug(f"Expansion at infinity inconclusive, raising order to {n}")


def _mul_mod(a: PolyQ, b: PolyQ, modulus: PolyQ) -> PolyQ:
    return poly_rem(a * b, modulus)


def _form_mod(coeffs, x: PolyQ, y: PolyQ, d: int, modulus: PolyQ) -> PolyQ:
    one = PolyQ.constant(1)
    xp, yp = [one], [one]
    for _ in range(d):
        xp.append(_mul_mod(xp[-1], x, modulus))
        yp.append(_mul_mod(yp[-1], y, modulus))
    total = PolyQ.constant(0)
    for j, c in enumerate(coeffs):
        if c != 0:
            total = total + _mul_mod(xp[d - j], yp[j], modulus) * c
    return total


def forms_mod(phi: RationalMap, k: int, modulus: PolyQ) -> Tuple[PolyQ, PolyQ]:
    """(P_k(t,1), Q_k(t,1)) reduced modulo a polynomial of positive degree"""
    if modulus.degree < 1:
        raise InvalidInputError("modulus must have positive degree")
    x = poly_rem(PolyQ.variable(), modulus)
    y = PolyQ.constant(1)
    for _ in range(k):
        x, y = _form_mod(phi.p, x, y, phi.d, modulus), _form_mod(phi.q, x, y, phi.d, modulus)
    return x, y


def target_residue(
    phi: RationalMap,
    k: int,
    modulus: PolyQ,
    target: Optional[ProjPointQ] = None,
) -> PolyQ:
    """R_k mod modulus (target None) or S_k mod modulus"""
    x, y = forms_mod(phi, k, modulus)
    if target is None:
        return poly_rem(x - PolyQ.variable() * y, modulus)
    return poly_rem(x * target.b - y * target.a, modulus)

