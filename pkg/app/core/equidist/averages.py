"""
Averages of log|F|_v over periodic points and over iterated preimages
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Literal, Optional

from app.config import settings
from app.core.dynamics.orbits import is_exceptional
from app.core.dynamics.periodic import (
    fixed_point_poly,
    infinity_data,
    preimage_poly,
    target_residue,
)
from app.core.dynamics.rational_map import ProjPointQ, RationalMap
from app.core.errors import ComputationError, InvalidInputError
from app.core.exact import (
    ExactLog,
    PolyQ,
    poly_divrem,
    poly_gcd,
    resultant,
    resultant_from_residue,
    squarefree_factors,
)
from app.core.heights.places import Place
from app.core.heights.scaled_pair import ArchimedeanIterator
from app.core.realctx import RealCtx
from app.core.results import ConvergenceSeries, ResultModel, SeriesRow

logger = logging.getLogger(__name__)

Mode = Literal["exact", "numeric"]


@dataclass(frozen=True)
class AverageSpec:
    """What to average: log|F|_v over periodic points (target None) or over phi^-k(target)"""

    phi: RationalMap
    f: PolyQ
    place: Place
    mode: Mode = "exact"
    target: Optional[ProjPointQ] = None
    degree_cap: int = settings.EXACT_DEGREE_CAP

    def __post_init__(self):
        if self.f.is_zero:
            raise InvalidInputError("zero polynomial")
        if self.mode not in ("exact", "numeric"):
            raise InvalidInputError(f"Unknown mode: {self.mode}")
        if self.mode == "numeric" and not self.place.is_archimedean:
            raise InvalidInputError("numeric mode requires the archimedean place")
        if self.target is not None and is_exceptional(self.phi, self.target):
            raise ComputationError("exceptional target")

    @property
    def label(self) -> str:
        kind = "periodic" if self.target is None else f"preimage({self.target})"
        return f"{kind} average of log|{self.f}| at {self.place}"


@dataclass(frozen=True)
class RootProduct:
    """
    prod F(w) over the roots w of R_k (or S_k) with F(w) != 0, with multiplicity

    ``exponent`` is the largest e with F^e dividing R_k and ``removed_degree``
    the number of roots discarded because F vanishes there.
    """

    product: Fraction
    exponent: int
    removed_degree: int
    degree: int
    path: str


class AverageResult(ResultModel):
    """One finite-k average"""

    k: int
    place: Any
    mode: str
    value: Any
    exact: Optional[ExactLog] = None
    exponent: int = 0
    removed_degree: int = 0
    degree: int
    fallback: bool = False
    approximate: bool = False


def _root_product_from_poly(r: PolyQ, f: PolyQ) -> RootProduct:
    """Strip the common roots of r and f by repeated gcd division"""
    exponent = 0
    reduced = r
    while True:
        q, rem = poly_divrem(reduced, f)
        if not rem.is_zero:
            break
        reduced = q
        exponent += 1
    g = poly_gcd(reduced, f)
    while g.degree > 0:
        reduced = poly_divrem(reduced, g)[0]
        g = poly_gcd(reduced, f)
    product = resultant(reduced, f) / reduced.leading_coefficient ** f.degree
    return RootProduct(product, exponent, r.degree - reduced.degree, reduced.degree, "full")


def exact_root_product(
    phi: RationalMap,
    f: PolyQ,
    k: int,
    target: Optional[ProjPointQ] = None,
    degree_cap: int = settings.EXACT_DEGREE_CAP,
    iteration_cap: int = settings.EXACT_ITERATION_CAP,
) -> RootProduct:
    """
    prod_{w} F(w) over affine roots of R_k (or S_k) where F does not vanish

    R_k is reduced modulo F^m by iterating in Q[t]/(F^m), which yields the
    exponent e of F in R_k and R~ = R_k / F^e modulo F without expanding
    R_k. Then
        sum_w log|F(w)|_v = log|Res(R~, F)|_v - deg F log|lc R~|_v
    with Res(F, R~) read from R~ mod F. When F shares a root with R~ (F
    reducible) the full polynomial is built within degree_cap instead.
    """
    info = infinity_data(phi, k, target, iteration_cap)
    if f.degree == 0:
        c = f.leading_coefficient
        return RootProduct(c ** info.degree, 0, 0, info.degree, "constant")

    def full() -> RootProduct:
        logger.info(f"F shares roots with the level-{k} polynomial, building it in full")
        if target is None:
            r = fixed_point_poly(phi, k, degree_cap).poly
        else:
            r = preimage_poly(phi, target, k, degree_cap).poly
        return _root_product_from_poly(r, f)

    residue = target_residue(phi, k, f, target)
    exponent = 0
    if residue.is_zero:
        m = 2
        while True:
            if (m - 1) * f.degree > info.degree:
                return full()
            rm = target_residue(phi, k, f ** m, target)
            e = 0
            while not rm.is_zero:
                q, rem = poly_divrem(rm, f)
                if not rem.is_zero:
                    break
                rm, e = q, e + 1
            if not rm.is_zero:
                exponent = e
                residue = poly_divrem(rm, f)[1]
                break
            m *= 2
        logger.debug(f"F^{exponent} divides the level-{k} polynomial")
    if poly_gcd(residue, f).degree > 0:
        return full()

    degree = info.degree - exponent * f.degree
    leading = info.leading / f.leading_coefficient ** exponent
    res_f_r = resultant_from_residue(f, residue, degree)
    sign = -1 if (degree * f.degree) % 2 else 1
    product = sign * res_f_r / leading ** f.degree
    return RootProduct(product, exponent, exponent * f.degree, degree, "quotient")


def _numeric_sum(spec: AverageSpec, k: int, ctx: RealCtx):
    """
    sum_w log|F(w)| through the roots of F; None when a root of F is
    numerically indistinguishable from a point being averaged over
    """
    mp = ctx.mp
    phi, f, target = spec.phi, spec.f, spec.target
    info = infinity_data(phi, k, target)
    total = info.degree * ctx.log_abs_rat(f.leading_coefficient)
    total -= f.degree * ctx.log_abs_rat(info.leading)
    it = ArchimedeanIterator(phi, ctx)
    cliff = ctx.eps_cliff()
    _, factors = squarefree_factors(f)
    for g, mult in factors:
        for beta in ctx.polyroots(g.coefficients):
            pair = it.start(beta, 1)
            for _ in range(k):
                pair, _ = it.step(pair)
            if target is None:
                combo = pair.x - beta * pair.y
            else:
                combo = target.b * pair.x - target.a * pair.y
            if abs(combo) < cliff * max(1, abs(beta)):
                return None
            total += mult * (pair.logscale + mp.log(abs(combo)))
    return total


def _average(spec: AverageSpec, k: int, ctx: RealCtx, tol: float) -> AverageResult:
    if k < 1:
        raise InvalidInputError("k must be at least 1")
    d_k = spec.phi.d ** k
    if spec.mode == "numeric":
        total = _numeric_sum(spec, k, ctx)
        if total is not None:
            check = _numeric_sum(spec, k, ctx.doubled())
            approximate = check is None or abs(ctx.doubled().mp.mpf(total) - check) / d_k > tol
            if approximate:
                logger.warning(f"Numeric average at k={k} failed the precision-doubling check")
            info = infinity_data(spec.phi, k, spec.target)
            return AverageResult(
                k=k,
                place=spec.place,
                mode="numeric",
                value=total / d_k,
                degree=info.degree,
                approximate=approximate,
            )
        logger.info(f"Root of F within the numeric cliff at k={k}, switching to exact mode")

    rp = exact_root_product(spec.phi, spec.f, k, spec.target, spec.degree_cap)
    if spec.place.is_archimedean:
        value = ctx.log_abs_rat(rp.product) / d_k
        exact = None
    else:
        exact = ExactLog.of(rp.product, spec.place.p).scale(Fraction(1, d_k))
        value = exact.to_real(ctx.mp)
    return AverageResult(
        k=k,
        place=spec.place,
        mode="exact",
        value=value,
        exact=exact,
        exponent=rp.exponent,
        removed_degree=rp.removed_degree,
        degree=rp.degree,
        fallback=spec.mode == "numeric",
    )


def periodic_average(
    phi: RationalMap,
    f: PolyQ,
    place: Place,
    k: int,
    mode: Mode = "exact",
    ctx: Optional[RealCtx] = None,
    tol: float = settings.TOLERANCE,
    degree_cap: int = settings.EXACT_DEGREE_CAP,
) -> AverageResult:
    """
    (1/d^k) sum of log|F(w)|_v over affine w with phi^k(w) = w and F(w) != 0

    Points are counted with multiplicity; the normalisation is d^k, not the
    number of points.
    """
    spec = AverageSpec(phi, f, place, mode, degree_cap=degree_cap)
    return _average(spec, k, ctx or RealCtx(), tol)


def preimage_average(
    phi: RationalMap,
    f: PolyQ,
    alpha: ProjPointQ,
    place: Place,
    k: int,
    mode: Mode = "exact",
    ctx: Optional[RealCtx] = None,
    tol: float = settings.TOLERANCE,
    degree_cap: int = settings.EXACT_DEGREE_CAP,
) -> AverageResult:
    """(1/d^k) sum of log|F(w)|_v over affine w with phi^k(w) = alpha and F(w) != 0"""
    spec = AverageSpec(phi, f, place, mode, alpha, degree_cap)
    return _average(spec, k, ctx or RealCtx(), tol)


def average_series(
    spec: AverageSpec,
    kmin: int,
    kmax: int,
    tol: float = settings.TOLERANCE,
    ctx: Optional[RealCtx] = None,
    on_row: Optional[Callable[[SeriesRow], None]] = None,
) -> ConvergenceSeries:
    """
    Averages for k = kmin..kmax with successive differences

    Args:
        spec: What to average
        kmin, kmax: Inclusive k range, kmin >= 1
        tol: Convergence threshold on the last two deltas
        ctx: Working precision
        on_row: Called with every row as soon as it is computed

    Returns:
        ConvergenceSeries whose limit estimate is the last value
    """
    if kmin < 1 or kmax < kmin:
        raise InvalidInputError("k range must satisfy 1 <= kmin <= kmax")
    ctx = ctx or RealCtx()
    rows = []
    previous = None
    for k in range(kmin, kmax + 1):
        result = _average(spec, k, ctx, tol)
        delta = None if previous is None else result.value - previous
        row = SeriesRow(
            k=k,
            value=result.value,
            delta=delta,
            exact=result.exact,
            approximate=result.approximate,
            fallback=result.fallback,
        )
        rows.append(row)
        if on_row is not None:
            on_row(row)
        previous = result.value
    return series_from_rows(spec.label, rows, tol)


def series_from_rows(label: str, rows, tol: float, target: Any = None) -> ConvergenceSeries:
    """Apply the two-small-deltas convergence rule; row flags carry over to the series"""
    tail = rows[-2:]
    converged = len(tail) == 2 and all(r.delta is not None and abs(r.delta) < tol for r in tail)
    return ConvergenceSeries(
        label=label,
        rows=rows,
        converged=converged,
        limit_estimate=rows[-1].value if rows else None,
        target=target,
        approximate=any(r.approximate for r in rows),
        fallback=any(r.fallback for r in rows),
    )
