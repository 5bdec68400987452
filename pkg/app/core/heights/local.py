"""
Local canonical heights at the archimedean place and at primes
"""
import logging
from fractions import Fraction
from typing import Any, Callable, List, Optional, Tuple

from app.config import settings
from app.core.dynamics.rational_map import ProjPointQ, RationalMap, bad_primes
from app.core.errors import ComputationError, InvalidInputError
from app.core.exact import ExactLog, PolyQ, poly_rem, rational_content, resultant, val_p
from app.core.heights.places import Place
from app.core.heights.scaled_pair import ArchimedeanIterator, Norm, PadicIterator, increment_bound
from app.core.realctx import RealCtx
from app.core.results import ResultModel

logger = logging.getLogger(__name__)

StartFn = Callable[[RealCtx], Tuple[Any, Any]]


class LocalHeightResult(ResultModel):
    """A local canonical height with its provenance"""

    place: Place
    value: Any
    exact: Optional[ExactLog] = None
    error_estimate: Any = 0
    iterations: int
    precision_bits: int
    approximate: bool = False
    aggregated: bool = False
    certificate: str


class ResidualResult(ResultModel):
    """Residual of the functional equation at one place"""

    place: Place
    residual: Any
    exact: Optional[ExactLog] = None
    approximate: bool = False


def _archimedean_limit(
    phi: RationalMap,
    start: StartFn,
    ctx: RealCtx,
    tol: float,
    kmax: int,
    norm: Norm,
) -> Tuple[Any, Any, int, bool]:
    """
    Sum L_0 + sum_j delta_j / d^(j+1) until the tail is certified below tol

    Every increment satisfies |delta_j| <= C (see increment_bound), so after
    k steps the remaining tail is at most C / (d^k (d - 1)). Small early
    increments prove nothing: z^2 / 2 at 7/4 has two zero increments before
    the orbit escapes.

    Returns:
        (value, error_estimate, iterations, converged)
    """
    mp = ctx.mp
    d = phi.d
    it = ArchimedeanIterator(phi, ctx, norm)
    pair = it.start(*start(ctx))
    value = pair.logscale
    bound = increment_bound(phi, ctx)
    tail = bound / (d - 1)
    scale = mp.mpf(1)
    for j in range(kmax):
        pair, delta = it.step(pair)
        scale *= d
        value += delta / scale
        tail = bound / (scale * (d - 1))
        if tail < tol:
            logger.debug(f"Archimedean limit certified after {j + 1} steps")
            return value, tail, j + 1, True
    return value, tail, kmax, False


def archimedean_local_height(
    phi: RationalMap,
    start: StartFn,
    ctx: RealCtx,
    tol: float = settings.TOLERANCE,
    kmax: int = settings.HEIGHT_KMAX,
    norm: Norm = "max",
    verify: bool = True,
) -> LocalHeightResult:
    """
    Local canonical height at infinity for a starting pair

    Args:
        phi: Rational map
        start: Produces the starting pair (x, y) inside a given context, so
            that the verification pass can rebuild it at doubled precision
        ctx: Working precision
        tol: Target accuracy
        kmax: Iteration budget
        norm: "max" or "fs" (Fubini-Study); both give the same limit
        verify: Recompute at doubled precision and compare

    Returns:
        LocalHeightResult, approximate when the budget ran out or the two
        precisions disagree
    """
    if tol <= 0:
        raise InvalidInputError("tolerance must be positive")
    value, err, steps, converged = _archimedean_limit(phi, start, ctx, tol, kmax, norm)
    approximate = not converged
    if not converged:
        logger.warning(f"Archimedean local height did not reach tol={tol} in {kmax} steps")
    if verify:
        hi = ctx.doubled()
        check, _, _, _ = _archimedean_limit(phi, start, hi, tol, kmax, norm)
        if abs(hi.mp.mpf(value) - check) > tol:
            logger.warning("Precision doubling changed the local height beyond tolerance")
            approximate = True
    return LocalHeightResult(
        place=Place.infinity(),
        value=value,
        error_estimate=err,
        iterations=steps,
        precision_bits=ctx.precision,
        approximate=approximate,
        certificate="converged" if converged else "truncated",
    )


def _in_infinity_basin(phi: RationalMap, x: Fraction, y: Fraction, p: int) -> bool:
    """
    True when the unit-size pair sits in the region where every later
    increment equals log|P(1,0)|_p

    Requires Q(1,0) = 0 and P(1,0) != 0; with |x| = 1 and r = |y| < 1 the
    conditions |p_i| r^i < |p_0| and |q_i| r^(i-1) <= |p_0| for i >= 1 make
    |P(x,y)| = |p_0| and |Q(x,y)/P(x,y)| <= r, so the region is invariant.
    """
    p0 = phi.p[0]
    if phi.q[0] != 0 or p0 == 0 or y == 0 or val_p(x, p) != 0:
        return False
    vb = val_p(y, p)
    if vb < 1:
        return False
    v0 = val_p(p0, p)
    for i in range(1, phi.d + 1):
        if phi.p[i] != 0 and val_p(phi.p[i], p) + i * vb <= v0:
            return False
        if phi.q[i] != 0 and val_p(phi.q[i], p) + (i - 1) * vb < v0:
            return False
    return True


def _in_zero_basin(phi: RationalMap, x: Fraction, y: Fraction, p: int) -> bool:
    """
    Mirror of _in_infinity_basin at [0:1], where every later increment
    equals log|Q(0,1)|_p

    Requires P(0,1) = 0 and Q(0,1) != 0; with |y| = 1 and r = |x| < 1 the
    conditions |q_i| r^(d-i) < |q_d| and |p_i| r^(d-i-1) <= |q_d| for i < d
    make |Q(x,y)| = |q_d| and |P(x,y)/Q(x,y)| <= r.
    """
    d = phi.d
    qd = phi.q[d]
    if phi.p[d] != 0 or qd == 0 or x == 0 or val_p(y, p) != 0:
        return False
    va = val_p(x, p)
    if va < 1:
        return False
    vd = val_p(qd, p)
    for i in range(d):
        if phi.q[i] != 0 and val_p(phi.q[i], p) + (d - i) * va <= vd:
            return False
        if phi.p[i] != 0 and val_p(phi.p[i], p) + (d - i - 1) * va < vd:
            return False
    return True


def _periodic_tail(deltas: List[int], i: int, d: int) -> Fraction:
    """sum_{m >= i} delta_m / d^(m+1) for increments repeating from i onwards"""
    period = len(deltas) - i
    block = sum(Fraction(deltas[i + r], d ** (i + r + 1)) for r in range(period))
    return block / (1 - Fraction(1, d ** period))


def _bits(q: Fraction) -> int:
    return max(abs(q.numerator).bit_length(), q.denominator.bit_length())


def padic_local_height(
    phi: RationalMap,
    x0: Fraction,
    y0: Fraction,
    p: int,
    kmax: int = settings.HEIGHT_KMAX,
    bit_cap: int = settings.EXACT_BIT_CAP,
) -> LocalHeightResult:
    """
    Local canonical height at the prime p for a rational starting pair

    The value L_0 + sum_j delta_j / d^(j+1) is an exact rational multiple
    of log p whenever one of these certificates applies:
      - good reduction at p: every increment vanishes
      - the reduced pair repeats: increments are eventually periodic
      - the pair enters the attracting region of infinity or of zero:
        increments are eventually constant
    Otherwise the truncated sum is returned and flagged approximate.
    """
    d = phi.d
    it = PadicIterator(phi, p)
    pair = it.start(x0, y0)
    base = Fraction(pair.logscale)
    place = Place.finite(p)

    def done(coefficient: Fraction, steps: int, certificate: str) -> LocalHeightResult:
        exact = ExactLog(coefficient, p)
        logger.debug(f"Local height at {p} is {exact} ({certificate})")
        return LocalHeightResult(
            place=place,
            value=exact.to_real(RealCtx().mp),
            exact=exact,
            iterations=steps,
            precision_bits=0,
            certificate=certificate,
        )

    if p not in bad_primes(phi):
        return done(base, 0, "good reduction")

    deltas: List[int] = []
    seen = {ProjPointQ.of(pair.x, pair.y): 0}
    partial = base
    for j in range(kmax):
        if _in_infinity_basin(phi, pair.x, pair.y, p):
            c = Fraction(-val_p(phi.p[0], p))
            return done(partial + c / (d ** j * (d - 1)), j, "infinity basin")
        if _in_zero_basin(phi, pair.x, pair.y, p):
            c = Fraction(-val_p(phi.q[d], p))
            return done(partial + c / (d ** j * (d - 1)), j, "zero basin")
        pair, delta = it.step(pair)
        deltas.append(delta)
        partial += Fraction(delta, d ** (j + 1))
        key = ProjPointQ.of(pair.x, pair.y)
        if key in seen:
            i = seen[key]
            head = base + sum(Fraction(deltas[m], d ** (m + 1)) for m in range(i))
            return done(head + _periodic_tail(deltas, i, d), j + 1, "repetition")
        seen[key] = j + 1
        if max(_bits(pair.x), _bits(pair.y)) > bit_cap:
            logger.info(f"Exact orbit at {p} exceeded the coordinate budget after {j + 1} steps")
            break

    steps = len(deltas)
    bound = Fraction(max((abs(x) for x in deltas), default=0), d ** steps * (d - 1))
    logger.warning(f"Local height at {p} truncated after {steps} steps")
    exact = ExactLog(partial, p)
    mp = RealCtx().mp
    return LocalHeightResult(
        place=place,
        value=exact.to_real(mp),
        exact=None,
        error_estimate=mp.mpf(bound.numerator) / bound.denominator * mp.log(p),
        iterations=steps,
        precision_bits=0,
        approximate=True,
        certificate="truncated",
    )


def _affine_lift(point: ProjPointQ) -> Tuple[Fraction, Fraction]:
    if point.is_infinity:
        return Fraction(1), Fraction(0)
    return point.as_rat(), Fraction(1)


def local_canonical_height(
    phi: RationalMap,
    beta: ProjPointQ,
    place: Place,
    tol: float = settings.TOLERANCE,
    kmax: int = settings.HEIGHT_KMAX,
    ctx: Optional[RealCtx] = None,
    norm: Norm = "max",
) -> LocalHeightResult:
    """
    lim_k log max(|P_k(beta,1)|_v, |Q_k(beta,1)|_v) / d^k

    The affine lift (beta, 1) is used for finite beta and (1, 0) for infinity.
    """
    x0, y0 = _affine_lift(beta)
    if place.is_archimedean:
        ctx = ctx or RealCtx()
        return archimedean_local_height(
            phi, lambda c: (c.rat(x0), c.rat(y0)), ctx, tol, kmax, norm
        )
    return padic_local_height(phi, x0, y0, place.p, kmax)


def local_height_infinity_point(
    phi: RationalMap,
    place: Place,
    tol: float = settings.TOLERANCE,
    kmax: int = settings.HEIGHT_KMAX,
    ctx: Optional[RealCtx] = None,
) -> LocalHeightResult:
    """Local canonical height of [1:0]"""
    return local_canonical_height(phi, ProjPointQ.infinity(), place, tol, kmax, ctx)


def conjugate_archimedean_height(
    phi: RationalMap,
    f: PolyQ,
    tol: float = settings.TOLERANCE,
    kmax: int = settings.HEIGHT_KMAX,
    ctx: Optional[RealCtx] = None,
) -> LocalHeightResult:
    """sum over the complex roots beta_i of f of the local canonical height at infinity"""
    if f.degree < 1:
        raise InvalidInputError("polynomial must have positive degree")
    ctx = ctx or RealCtx()
    mp = ctx.mp
    parts = [
        archimedean_local_height(phi, lambda c, i=i: (c.polyroots(f.coefficients)[i], 1), ctx, tol, kmax)
        for i in range(f.degree)
    ]
    approximate = any(r.approximate for r in parts)
    return LocalHeightResult(
        place=Place.infinity(),
        value=sum((mp.mpf(r.value) for r in parts), mp.mpf(0)),
        error_estimate=sum((mp.mpf(r.error_estimate) for r in parts), mp.mpf(0)),
        iterations=max(r.iterations for r in parts),
        precision_bits=ctx.precision,
        approximate=approximate,
        aggregated=f.degree > 1,
        certificate="truncated" if approximate else "converged",
    )


def functional_eq_residual(
    phi: RationalMap,
    point: ProjPointQ,
    place: Place,
    kmax: int = settings.HEIGHT_KMAX,
    tol: float = settings.TOLERANCE,
    ctx: Optional[RealCtx] = None,
) -> ResidualResult:
    """
    |h_v(phi(x)) - d h_v(x) + log|Q(x,1)|_v| for affine x

    With the affine lift, (P(x,1), Q(x,1)) = Q(x,1) * (phi(x), 1), which
    gives the functional equation with this sign.
    """
    if point.is_infinity:
        raise InvalidInputError("functional equation needs an affine point")
    x = point.as_rat()
    qx = phi.q_affine(x)
    if qx == 0:
        raise ComputationError("pole of the dehomogenized Q")
    image = ProjPointQ.of(phi.p_affine(x) / qx)
    ctx = ctx or RealCtx()
    here = local_canonical_height(phi, point, place, tol, kmax, ctx)
    there = local_canonical_height(phi, image, place, tol, kmax, ctx)
    approximate = here.approximate or there.approximate
    if place.is_archimedean:
        r = there.value - phi.d * here.value + ctx.log_abs_rat(qx)
        return ResidualResult(place=place, residual=abs(r), approximate=approximate)
    if here.exact is None or there.exact is None:
        r = there.value - phi.d * here.value + ExactLog.of(qx, place.p).to_real(ctx.mp)
        return ResidualResult(place=place, residual=abs(r), approximate=True)
    exact = there.exact - here.exact.scale(phi.d) + ExactLog.of(qx, place.p)
    exact = ExactLog(abs(exact.coefficient), place.p)
    return ResidualResult(place=place, residual=exact.to_real(ctx.mp), exact=exact)


# Conjugate sums for algebraic points at a prime


def _norm_valuation(f: PolyQ, g: PolyQ, p: int) -> Optional[int]:
    """val_p of prod g(beta_i) over the roots of f, None when it vanishes"""
    if g.is_zero:
        return None
    n = resultant(f, g) / f.leading_coefficient ** max(g.degree, 0)
    if n == 0:
        return None
    return val_p(n, p)


def _conjugate_log_max(f: PolyQ, x: PolyQ, y: PolyQ, p: int) -> Tuple[int, bool]:
    """
    -sum_i log max(|x(beta_i)|_p, |y(beta_i)|_p) / log p, as a valuation

    Each conjugate rules out at most one of the classes infinity, 0, 1, ...,
    p-1 for the combination x + lambda y, so the smallest norm valuation over
    the candidates is exact once p >= deg f.

    Returns:
        (valuation, exact)
    """
    n = f.degree
    candidates = [y] + [x + y * lam for lam in range(min(p - 1, n) + 1)]
    vals = [v for v in (_norm_valuation(f, g, p) for g in candidates) if v is not None]
    if not vals:
        raise ComputationError("scaled pair vanished at a conjugate")
    return min(vals), p >= n


def _projectively_equal(a: Tuple[PolyQ, PolyQ], b: Tuple[PolyQ, PolyQ], f: PolyQ) -> bool:
    return poly_rem(a[0] * b[1] - a[1] * b[0], f).is_zero


def conjugate_local_height(
    phi: RationalMap,
    f: PolyQ,
    p: int,
    kmax: int = settings.HEIGHT_KMAX,
    bit_cap: int = settings.EXACT_BIT_CAP,
) -> LocalHeightResult:
    """
    sum over the roots beta_i of f of the local canonical height at p

    The pair (t, 1) is iterated in Q[t]/(f), divided by its rational content
    at each step, and log max over conjugates is read off norms (resultants
    with f). The value aggregates every place above p.
    """
    if f.degree < 1:
        raise InvalidInputError("polynomial must have positive degree")
    d, n = phi.d, f.degree
    place = Place.finite(p)
    x, y = poly_rem(PolyQ.variable(), f), PolyQ.constant(1)
    # Gauss norm: sum_i log max(|beta_i|_p, 1) = -log|lc|_p for primitive integral f
    _, prim = f.primitive_integral()
    s0 = Fraction(val_p(prim[0], p))
    exact_norms = True

    def result(coefficient: Fraction, steps: int, certificate: str, exact_ok: bool) -> LocalHeightResult:
        value = ExactLog(coefficient, p)
        if not exact_ok:
            logger.warning(f"Conjugate height at {p} is a lower bound (p < deg f)")
        return LocalHeightResult(
            place=place,
            value=value.to_real(RealCtx().mp),
            exact=value if exact_ok else None,
            iterations=steps,
            precision_bits=0,
            approximate=not exact_ok,
            aggregated=n > 1,
            certificate=certificate,
        )

    if p not in bad_primes(phi):
        return result(s0, 0, "good reduction", True)

    history = [(x, y)]
    increments: List[int] = []
    prev = s0
    partial = s0
    scale_val = 0  # val_p of the accumulated content divided out
    for j in range(kmax):
        x, y = phi.eval_pair(x, y, PolyQ.constant(1))
        x, y = poly_rem(x, f), poly_rem(y, f)
        c = rational_content(x.coefficients + y.coefficients)
        if c == 0:
            raise ComputationError("scaled pair vanished at a conjugate")
        x, y = x * (1 / c), y * (1 / c)
        scale_val = d * scale_val + val_p(c, p)
        v, ok = _conjugate_log_max(f, x, y, p)
        exact_norms = exact_norms and ok
        s = Fraction(-n * scale_val - v)
        increments.append(int(s - d * prev))
        partial += Fraction(increments[-1], d ** (j + 1))
        prev = s
        for i, earlier in enumerate(history):
            if _projectively_equal(earlier, (x, y), f):
                head = s0 + sum(Fraction(increments[m], d ** (m + 1)) for m in range(i))
                return result(head + _periodic_tail(increments, i, d), j + 1, "repetition", exact_norms)
        history.append((x, y))
        if max(map(_bits, x.coefficients + y.coefficients), default=0) > bit_cap:
            break

    steps = len(increments)
    logger.warning(f"Conjugate height at {p} truncated after {steps} steps")
    value = ExactLog(partial, p)
    mp = RealCtx().mp
    bound = Fraction(max((abs(i) for i in increments), default=0), d ** steps * (d - 1))
    return LocalHeightResult(
        place=place,
        value=value.to_real(mp),
        error_estimate=mp.mpf(bound.numerator) / bound.denominator * mp.log(p),
        iterations=steps,
        precision_bits=0,
        approximate=True,
        aggregated=n > 1,
        certificate="truncated",
    )
