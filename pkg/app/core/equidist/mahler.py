"""
Generalized Mahler measures and classical Mahler measure oracles
"""
import logging
from typing import Any, Optional

import numpy as np

from app.config import settings
from app.core.dynamics.rational_map import ProjPointQ, RationalMap
from app.core.errors import InvalidInputError
from app.core.exact import ExactLog, PolyQ, squarefree_factors
from app.core.heights.local import (
    conjugate_archimedean_height,
    conjugate_local_height,
    local_canonical_height,
    local_height_infinity_point,
)
from app.core.heights.places import Place
from app.core.realctx import RealCtx
from app.core.results import ResultModel

logger = logging.getLogger(__name__)


class MahlerResult(ResultModel):
    """Mahler measure of F relative to a map at one place"""

    place: Place
    value: Any
    exact: Optional[ExactLog] = None
    error_estimate: Any = 0
    precision_bits: int
    approximate: bool = False
    aggregated: bool = False


def mahler_measure(
    phi: RationalMap,
    f: PolyQ,
    place: Place,
    tol: float = settings.TOLERANCE,
    kmax: int = settings.HEIGHT_KMAX,
    ctx: Optional[RealCtx] = None,
) -> MahlerResult:
    """
    log|lc F|_v + sum over roots beta of (h_v(beta) - h_v(infinity))

    Args:
        phi: Rational map
        f: Nonzero polynomial; repeated roots count with multiplicity
        place: Archimedean place or a prime
        tol: Accuracy target for archimedean limits
        kmax: Iteration budget
        ctx: Working precision

    Returns:
        MahlerResult. At a prime, irrational roots contribute through the
        sum over their conjugates and the result is flagged aggregated.
    """
    if f.is_zero:
        raise InvalidInputError("zero polynomial")
    ctx = ctx or RealCtx()
    mp = ctx.mp
    lead, factors = squarefree_factors(f)
    at_infinity = local_height_infinity_point(phi, place, tol, kmax, ctx)
    approximate = at_infinity.approximate
    error = mp.mpf(at_infinity.error_estimate) * f.degree

    if place.is_archimedean:
        total = ctx.log_abs_rat(lead)
        for g, mult in factors:
            lh = conjugate_archimedean_height(phi, g, tol, kmax, ctx)
            total += mult * (lh.value - g.degree * at_infinity.value)
            error += mult * mp.mpf(lh.error_estimate)
            approximate = approximate or lh.approximate
        return MahlerResult(
            place=place,
            value=total,
            error_estimate=error,
            precision_bits=ctx.precision,
            approximate=approximate,
        )

    p = place.p
    exact: Optional[ExactLog] = ExactLog.of(lead, p)
    value = exact.to_real(mp)
    aggregated = False
    inf_exact = at_infinity.exact
    for g, mult in factors:
        if g.degree == 1:
            root = ProjPointQ.of(-g.coefficient(0) / g.coefficient(1))
            lh = local_canonical_height(phi, root, place, tol, kmax, ctx)
        else:
            lh = conjugate_local_height(phi, g, p, kmax)
            aggregated = True
        value += mult * (mp.mpf(lh.value) - g.degree * mp.mpf(at_infinity.value))
        error += mult * mp.mpf(lh.error_estimate)
        approximate = approximate or lh.approximate
        if exact is not None and lh.exact is not None and inf_exact is not None:
            exact = exact + (lh.exact - inf_exact.scale(g.degree)).scale(mult)
        else:
            exact = None
    if exact is not None:
        value = exact.to_real(mp)
    if aggregated:
        logger.info(f"Mahler measure at {p} sums over conjugate roots")
    return MahlerResult(
        place=place,
        value=value,
        exact=exact,
        error_estimate=error,
        precision_bits=ctx.precision,
        approximate=approximate,
        aggregated=aggregated,
    )


def jensen_mahler_measure(f: PolyQ, ctx: Optional[RealCtx] = None):
    """Classical Mahler measure log|lc| + sum log max(1, |root|)"""
    if f.is_zero:
        raise InvalidInputError("zero polynomial")
    ctx = ctx or RealCtx()
    mp = ctx.mp
    roots = ctx.polyroots(f.coefficients)
    return ctx.log_abs_rat(f.leading_coefficient) + sum(
        (mp.log(max(1, abs(r))) for r in roots), mp.mpf(0)
    )


def quadrature_mahler_measure(f: PolyQ, samples: int = 4096) -> float:
    """
    Trapezoid rule for the integral of log|F(e^(2 pi i theta))| over [0, 1]

    Converges geometrically when F has no root on the unit circle.
    """
    if f.is_zero:
        raise InvalidInputError("zero polynomial")
    theta = np.arange(samples) / samples
    z = np.exp(2j * np.pi * theta)
    coeffs = np.array([float(c) for c in reversed(f.coefficients)])
    return float(np.mean(np.log(np.abs(np.polyval(coeffs, z)))))


def integral_mahler_measure(f: PolyQ, ctx: Optional[RealCtx] = None):
    """Adaptive mpmath quadrature of the same integral"""
    ctx = ctx or RealCtx()
    mp = ctx.mp
    coeffs = [ctx.rat(c) for c in reversed(f.coefficients)]

    def integrand(theta):
        return mp.log(abs(mp.polyval(coeffs, mp.expjpi(2 * theta))))

    return mp.quad(integrand, [0, mp.mpf(1) / 4, mp.mpf(1) / 2, mp.mpf(3) / 4, 1])
