"""
Scaled coordinate pairs: iterating a map without coordinate blow-up

A pair (x, y) is kept at unit size and the discarded scale is tracked as
a logarithm, so that log max(|x_k|, |y_k|)_v of the unscaled k-th iterate
equals logscale_k + log max(|x|, |y|)_v of the stored pair.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal, Tuple

from app.core.dynamics.rational_map import RationalMap, homogeneous_eval
from app.core.errors import ComputationError, InvalidInputError
from app.core.exact import val_p
from app.core.realctx import RealCtx

logger = logging.getLogger(__name__)

Norm = Literal["max", "fs"]


@dataclass(frozen=True)
class ScaledPair:
    """
    (x, y, logscale)

    At the archimedean place x, y are mpc and logscale is an mpf. At a
    finite place x, y are rationals with min valuation 0 and logscale is an
    integer n standing for n * log p.
    """

    x: Any
    y: Any
    logscale: Any


class ArchimedeanIterator:
    """Applies a rational map to complex scaled pairs at a fixed precision"""

    def __init__(self, phi: RationalMap, ctx: RealCtx, norm: Norm = "max"):
        if norm not in ("max", "fs"):
            raise InvalidInputError(f"Unknown norm: {norm}")
        self.phi = phi
        self.ctx = ctx
        self.norm = norm
        self.p_coeffs, self.q_coeffs = phi.converted(ctx.rat)

    def size(self, x, y):
        mp = self.ctx.mp
        if self.norm == "fs":
            return mp.sqrt(abs(x) ** 2 + abs(y) ** 2)
        return max(abs(x), abs(y))

    def start(self, x, y) -> ScaledPair:
        mp = self.ctx.mp
        x, y = mp.mpc(x), mp.mpc(y)
        s = self.size(x, y)
        if s == 0:
            raise InvalidInputError("degenerate point [0:0]")
        return ScaledPair(x / s, y / s, mp.log(s))

    def step(self, pair: ScaledPair) -> Tuple[ScaledPair, Any]:
        """
        One application of the map

        Returns:
            (next pair, increment) where increment is log of the size of
            (P(x, y), Q(x, y)) for the unit-size input pair
        """
        mp = self.ctx.mp
        d = self.phi.d
        one = mp.mpc(1)
        x = homogeneous_eval(self.p_coeffs, pair.x, pair.y, d, one)
        y = homogeneous_eval(self.q_coeffs, pair.x, pair.y, d, one)
        s = self.size(x, y)
        if s == 0:
            # P and Q share no projective root, so this is precision loss
            raise ComputationError("scaled pair underflow; increase precision")
        delta = mp.log(s)
        return ScaledPair(x / s, y / s, d * pair.logscale + delta), delta


def _min_val(values, p: int) -> int:
    vals = [val_p(v, p) for v in values if v != 0]
    if not vals:
        raise InvalidInputError("degenerate point [0:0]")
    return min(vals)


class PadicIterator:
    """Applies a rational map to rational pairs normalised at a prime p"""

    def __init__(self, phi: RationalMap, p: int):
        self.phi = phi
        self.p = p

    def normalise(self, x: Fraction, y: Fraction) -> Tuple[Fraction, Fraction, int]:
        """Divide out p^m with m the smaller valuation; returns (x', y', -m)"""
        m = _min_val((x, y), self.p)
        scale = Fraction(self.p) ** m
        return x / scale, y / scale, -m

    def start(self, x: Fraction, y: Fraction) -> ScaledPair:
        x, y, n = self.normalise(Fraction(x), Fraction(y))
        return ScaledPair(x, y, n)

    def step(self, pair: ScaledPair) -> Tuple[ScaledPair, int]:
        """
        Returns:
            (next pair, increment) with the increment an integer multiple
            of log p
        """
        x, y = self.phi.eval_pair(pair.x, pair.y)
        x, y, delta = self.normalise(x, y)
        return ScaledPair(x, y, self.phi.d * pair.logscale + delta), delta


def cofactor_bound(p, q, d: int, mp) -> Any:
    """
    Bound on the coefficients of the forms A, B of degree d - 1 with
    A P + B Q = Res(P, Q) T^(2d-1), for T either variable

    Those coefficients are minors of the Sylvester matrix, so Hadamard's
    inequality over its rows bounds them.
    """
    norm_p = mp.sqrt(mp.fsum(abs(c) ** 2 for c in p))
    norm_q = mp.sqrt(mp.fsum(abs(c) ** 2 for c in q))
    return max(norm_p ** (d - 1) * norm_q ** d, norm_p ** d * norm_q ** (d - 1))


def increment_bound(phi: RationalMap, ctx: RealCtx) -> Any:
    """
    C with |delta| <= C for every increment of ArchimedeanIterator.step

    For a unit pair max(|P|, |Q|) is at most the larger coefficient sum and
    at least |Res| / (2 d M) with M the cofactor bound; d log 2 absorbs the
    Fubini-Study norm.
    """
    mp = ctx.mp
    p, q = phi.converted(ctx.rat)
    upper = max(mp.fsum(abs(c) for c in p), mp.fsum(abs(c) for c in q))
    lower = abs(ctx.rat(phi.resultant)) / (2 * phi.d * cofactor_bound(p, q, phi.d, mp))
    return max(abs(mp.log(upper)), abs(mp.log(lower))) + phi.d * mp.log(2)
