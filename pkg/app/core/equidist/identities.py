"""
Global height identities: place sums of finite-k averages
"""
import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional

from app.config import settings
from app.core.dynamics.orbits import is_exceptional
from app.core.dynamics.rational_map import ProjPointQ, RationalMap, bad_primes
from app.core.equidist.averages import exact_root_product
from app.core.errors import ComputationError
from app.core.exact import ExactLog, PolyQ, prime_support, strip_primes, val_p
from app.core.heights.canonical import canonical_height, canonical_height_algebraic
from app.core.heights.places import support
from app.core.realctx import RealCtx
from app.core.results import ResultModel

logger = logging.getLogger(__name__)


class GlobalIdentityResult(ResultModel):
    """
    Per-place averages over the support S and the mass outside it

    ``total`` is the sum over S; by the product formula it cancels the
    outside-support mass exactly, and as k grows it approaches ``target``.
    """

    k: int
    support: List[str]
    per_place: Dict[str, Any]
    exact_per_place: Dict[str, ExactLog]
    total: Any
    outside_support: Any
    place_sum_residual: Any
    product_formula_residual: Fraction
    target: Any
    deviation: Any
    exponent: int


def _identity(
    phi: RationalMap,
    f: PolyQ,
    k: int,
    target_point: Optional[ProjPointQ],
    tol: float,
    ctx: RealCtx,
    degree_cap: int,
) -> GlobalIdentityResult:
    mp = ctx.mp
    d_k = phi.d ** k
    rp = exact_root_product(phi, f, k, target_point, degree_cap)
    t = rp.product
    extra = [] if target_point is None else [target_point.a, target_point.b]
    primes = sorted(set(bad_primes(phi)) | set(prime_support(list(f.coefficients) + extra)))
    places = support(primes)

    per_place: Dict[str, Any] = {"inf": ctx.log_abs_rat(t) / d_k}
    exact_per_place: Dict[str, ExactLog] = {}
    for p in primes:
        e = ExactLog.of(t, p).scale(Fraction(1, d_k))
        exact_per_place[str(p)] = e
        per_place[str(p)] = e.to_real(mp)
    total = sum(per_place.values(), mp.mpf(0))

    outside = strip_primes(t, primes)
    outside_support = -ctx.log_abs_rat(outside) / d_k
    inside = Fraction(1)
    for p in primes:
        inside *= Fraction(p) ** val_p(t, p)
    product_formula_residual = abs(t) / (inside * outside) - 1

    h_inf = canonical_height(phi, ProjPointQ.infinity(), tol, ctx=ctx, cross_check=False).value
    h_beta = canonical_height_algebraic(phi, f, tol, ctx=ctx).value
    target = f.degree * (mp.mpf(h_beta) - mp.mpf(h_inf))
    logger.info(f"Global identity at k={k}: total {mp.nstr(total, 12)}, target {mp.nstr(target, 12)}")
    return GlobalIdentityResult(
        k=k,
        support=[str(v) for v in places],
        per_place=per_place,
        exact_per_place=exact_per_place,
        total=total,
        outside_support=outside_support,
        place_sum_residual=total + outside_support,
        product_formula_residual=product_formula_residual,
        target=target,
        deviation=total - target,
        exponent=rp.exponent,
    )


def global_periodic_identity(
    phi: RationalMap,
    f: PolyQ,
    k: int,
    tol: float = settings.TOLERANCE,
    ctx: Optional[RealCtx] = None,
    degree_cap: int = settings.EXACT_DEGREE_CAP,
) -> GlobalIdentityResult:
    """
    Place sum of periodic averages of log|F|_v against deg F (h(beta) - h(infinity))

    Args:
        phi: Rational map
        f: Irreducible polynomial (not verified) with root beta
        k: Period level, within the exact budget

    Returns:
        GlobalIdentityResult over S = {inf} u bad primes u primes of F
    """
    return _identity(phi, f, k, None, tol, ctx or RealCtx(), degree_cap)


def global_preimage_identity(
    phi: RationalMap,
    f: PolyQ,
    alpha: ProjPointQ,
    k: int,
    tol: float = settings.TOLERANCE,
    ctx: Optional[RealCtx] = None,
    degree_cap: int = settings.EXACT_DEGREE_CAP,
) -> GlobalIdentityResult:
    """Same identity for averages over phi^-k(alpha); S also holds the primes of alpha"""
    if is_exceptional(phi, alpha):
        raise ComputationError("exceptional target")
    return _identity(phi, f, k, alpha, tol, ctx or RealCtx(), degree_cap)
