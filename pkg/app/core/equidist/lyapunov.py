"""
Lyapunov exponent as a difference of periodic-point averages
"""
import logging
from typing import Callable, Optional

from app.config import settings
from app.core.dynamics.rational_map import ProjPointQ, RationalMap, derivative_pair
from app.core.equidist.averages import (
    Mode,
    periodic_average,
    preimage_average,
    series_from_rows,
)
from app.core.errors import InvalidInputError
from app.core.heights.places import Place
from app.core.realctx import RealCtx
from app.core.results import ConvergenceSeries, SeriesRow

logger = logging.getLogger(__name__)


def lyapunov(
    phi: RationalMap,
    kmax: int = settings.KMAX,
    tol: float = settings.TOLERANCE,
    mode: Mode = "exact",
    ctx: Optional[RealCtx] = None,
    kmin: int = 1,
    alpha: Optional[ProjPointQ] = None,
    on_row: Optional[Callable[[SeriesRow], None]] = None,
    degree_cap: int = settings.EXACT_DEGREE_CAP,
) -> ConvergenceSeries:
    """
    Rows avg(log|A|) - avg(log|B|) with phi' = A/B

    Args:
        phi: Rational map
        kmax: Last level
        tol: Convergence threshold
        mode: "exact" or "numeric"
        ctx: Working precision
        kmin: First level
        alpha: Average over phi^-k(alpha) instead of periodic points
        on_row: Streaming callback
        degree_cap: Largest polynomial degree built in full

    Returns:
        ConvergenceSeries approaching the Lyapunov exponent at infinity
    """
    if kmin < 1 or kmax < kmin:
        raise InvalidInputError("k range must satisfy 1 <= kmin <= kmax")
    ctx = ctx or RealCtx()
    a, b = derivative_pair(phi)
    place = Place.infinity()
    rows = []
    previous = None
    for k in range(kmin, kmax + 1):
        if alpha is None:
            top = periodic_average(phi, a, place, k, mode, ctx, tol, degree_cap)
            bottom = periodic_average(phi, b, place, k, mode, ctx, tol, degree_cap)
        else:
            top = preimage_average(phi, a, alpha, place, k, mode, ctx, tol, degree_cap)
            bottom = preimage_average(phi, b, alpha, place, k, mode, ctx, tol, degree_cap)
        value = top.value - bottom.value
        row = SeriesRow(
            k=k,
            value=value,
            delta=None if previous is None else value - previous,
            approximate=top.approximate or bottom.approximate,
            fallback=top.fallback or bottom.fallback,
        )
        logger.debug(f"Lyapunov row k={k}: {ctx.nstr(value, 15)}")
        rows.append(row)
        if on_row is not None:
            on_row(row)
        previous = value
    label = "lyapunov" if alpha is None else f"lyapunov over preimages of {alpha}"
    return series_from_rows(label, rows, tol)
