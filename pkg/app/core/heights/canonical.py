"""
Weil heights and global canonical heights assembled from local heights
"""
import logging
from fractions import Fraction
from math import gcd, lcm
from typing import Any, Dict, List, Optional

from app.config import settings
from app.core.dynamics.rational_map import ProjPointQ, RationalMap, bad_primes
from app.core.errors import ComputationError, InvalidInputError
from app.core.exact import PolyQ, is_squarefree, prime_support
from app.core.heights.local import (
    LocalHeightResult,
    conjugate_archimedean_height,
    conjugate_local_height,
    local_canonical_height,
)
from app.core.heights.places import Place, support
from app.core.heights.scaled_pair import Norm, cofactor_bound
from app.core.realctx import RealCtx
from app.core.results import ResultModel

logger = logging.getLogger(__name__)

# Coordinate size allowed for the direct h(phi^k(x)) / d^k cross-check
DIRECT_CHECK_BITS = 1 << 18


class HeightResult(ResultModel):
    """A global height with its per-place decomposition"""

    value: Any
    per_place: Dict[str, Any]
    local: List[LocalHeightResult]
    k_used: int
    precision_bits: int
    error_estimate: Any
    approximate: bool = False
    aggregated: bool = False
    direct_estimate: Optional[Any] = None
    direct_k: Optional[int] = None


def weil_height(point: ProjPointQ, ctx: Optional[RealCtx] = None):
    """log max(|a|, |b|) for coprime integer coordinates"""
    ctx = ctx or RealCtx()
    mp = ctx.mp
    return mp.log(max(abs(point.a), abs(point.b)))


def weil_height_algebraic(f: PolyQ, ctx: Optional[RealCtx] = None):
    """
    Weil height of a root of f: the Mahler measure of f over deg f

    Args:
        f: Irreducible polynomial of degree at least 1

    Returns:
        (log|lc| + sum log max(1, |beta_i|)) / deg f for the primitive
        integral multiple of f
    """
    if f.degree < 1:
        raise InvalidInputError("polynomial must have positive degree")
    ctx = ctx or RealCtx()
    mp = ctx.mp
    _, prim = f.primitive_integral()
    roots = ctx.polyroots([Fraction(c) for c in reversed(prim)])
    total = mp.log(abs(prim[0])) + sum(mp.log(max(1, abs(r))) for r in roots)
    return total / f.degree


def _assemble(
    locals_: List[LocalHeightResult],
    ctx: RealCtx,
    scale: int = 1,
) -> Dict[str, Any]:
    mp = ctx.mp
    per_place = {str(r.place): mp.mpf(r.value) / scale for r in locals_}
    value = sum(per_place.values(), mp.mpf(0))
    error = sum((mp.mpf(r.error_estimate) for r in locals_), mp.mpf(0)) / scale
    return {
        "value": value,
        "per_place": per_place,
        "local": locals_,
        "k_used": max((r.iterations for r in locals_), default=0),
        "precision_bits": ctx.precision,
        "error_estimate": error,
        "approximate": any(r.approximate for r in locals_),
        "aggregated": any(r.aggregated for r in locals_),
    }


def height_bound(phi: RationalMap, ctx: Optional[RealCtx] = None):
    """
    C with |h(phi(x)) - d h(x)| <= C for every x in P^1(Q)

    Taken over the integral primitive forms: for coprime a, b with
    H = max(|a|, |b|), max(|P(a,b)|, |Q(a,b)|) lies between |Res| H^d / (2 d M)
    and the coefficient sum times H^d, and gcd(P(a,b), Q(a,b)) divides Res.
    Consequently |h_hat - h| <= C / (d - 1).
    """
    ctx = ctx or RealCtx()
    mp = ctx.mp
    coeffs = phi.p + phi.q
    denominator = lcm(*(c.denominator for c in coeffs))
    content = gcd(*(int(c * denominator) for c in coeffs))
    scale = Fraction(denominator, content)
    p = [ctx.rat(c * scale) for c in phi.p]
    q = [ctx.rat(c * scale) for c in phi.q]
    upper = max(mp.fsum(abs(c) for c in p), mp.fsum(abs(c) for c in q))
    return max(mp.log(upper), mp.log(2 * phi.d * cofactor_bound(p, q, phi.d, mp)), mp.mpf(0))


def _direct_estimate(phi: RationalMap, point: ProjPointQ, kmax: int, ctx: RealCtx):
    """h(phi^k(x)) / d^k for the largest k within the coordinate budget"""
    current = point
    k = 0
    while k < kmax:
        nxt = ProjPointQ.of(*phi.eval_pair(Fraction(current.a), Fraction(current.b)))
        if max(abs(nxt.a), nxt.b).bit_length() > DIRECT_CHECK_BITS:
            break
        current = nxt
        k += 1
    if k == 0:
        return None, None
    return weil_height(current, ctx) / ctx.mp.mpf(phi.d) ** k, k


def canonical_height(
    phi: RationalMap,
    point: ProjPointQ,
    tol: float = settings.TOLERANCE,
    kmax: int = settings.HEIGHT_KMAX,
    ctx: Optional[RealCtx] = None,
    norm: Norm = "max",
    cross_check: bool = True,
) -> HeightResult:
    """
    Sum of local canonical heights over infinity and the finite support

    The finite support is the bad primes of the map together with the
    primes of the point's coordinates; every other local height vanishes.
    """
    ctx = ctx or RealCtx()
    primes = set(bad_primes(phi)) | set(prime_support([point.a, point.b]))
    locals_ = []
    for place in support(primes):
        locals_.append(local_canonical_height(phi, point, place, tol, kmax, ctx, norm))
    record = _assemble(locals_, ctx)
    if cross_check:
        direct, direct_k = _direct_estimate(phi, point, kmax, ctx)
        record["direct_estimate"] = direct
        record["direct_k"] = direct_k
        if direct is not None:
            d = ctx.mp.mpf(phi.d)
            slack = height_bound(phi, ctx) / (d ** direct_k * (d - 1)) + record["error_estimate"] + tol
            if abs(record["value"] - direct) > slack:
                logger.warning(f"Canonical height of {point} disagrees with h(phi^{direct_k}(x)) / d^{direct_k}")
                record["approximate"] = True
    if record["approximate"]:
        logger.warning(f"Canonical height of {point} is approximate")
    return HeightResult(**record)


def canonical_height_algebraic(
    phi: RationalMap,
    f: PolyQ,
    tol: float = settings.TOLERANCE,
    kmax: int = settings.HEIGHT_KMAX,
    ctx: Optional[RealCtx] = None,
) -> HeightResult:
    """
    Canonical height of a root of the irreducible polynomial f

    Args:
        phi: Rational map
        f: Square-free polynomial of degree n >= 1 (irreducibility is the
            caller's promise)

    Returns:
        (1/n) sum over places of the conjugate-summed local heights; the
        per_place entries carry the same 1/n factor
    """
    if f.degree < 1:
        raise InvalidInputError("polynomial must have positive degree")
    if not is_squarefree(f):
        raise ComputationError("repeated roots")
    ctx = ctx or RealCtx()
    if f.degree == 1:
        root = -f.coefficient(0) / f.coefficient(1)
        return canonical_height(phi, ProjPointQ.of(root), tol, kmax, ctx)

    n = f.degree
    summed = conjugate_archimedean_height(phi, f, tol, kmax, ctx)
    _, prim = f.primitive_integral()
    primes = set(bad_primes(phi)) | set(prime_support([prim[0]]))
    locals_ = [summed] + [conjugate_local_height(phi, f, p, kmax) for p in sorted(primes)]
    record = _assemble(locals_, ctx, scale=n)
    return HeightResult(**record)


def height_difference(phi: RationalMap, point: ProjPointQ, ctx: Optional[RealCtx] = None):
    """canonical minus naive height, bounded over P^1(Q) for a fixed map"""
    ctx = ctx or RealCtx()
    return canonical_height(phi, point, ctx=ctx, cross_check=False).value - weil_height(point, ctx)
