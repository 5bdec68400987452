"""
Arbitrary-precision real and complex arithmetic context
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List, Optional, Sequence

from mpmath.ctx_mp import MPContext
from mpmath.libmp import NoConvergence

from app.config import settings
from app.core.errors import ComputationError, InvalidInputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RealCtx:
    """
    A private mpmath context at a fixed binary precision.

    Every archimedean computation receives one of these instead of touching
    the global ``mpmath.mp`` state, so two precisions can run side by side.
    """

    precision: int = settings.PRECISION_BITS
    mp: Any = field(init=False, repr=False, compare=False)

    MIN_PRECISION = 64

    def __post_init__(self):
        if self.precision < self.MIN_PRECISION:
            raise InvalidInputError(
                f"precision must be at least {self.MIN_PRECISION} bits"
            )
        ctx = MPContext()
        ctx.prec = self.precision
        object.__setattr__(self, "mp", ctx)

    def doubled(self) -> "RealCtx":
        return RealCtx(2 * self.precision)

    def rat(self, q: Fraction):
        """Exact rational to the nearest mpf"""
        return self.mp.mpf(q.numerator) / q.denominator

    def log_abs_rat(self, q: Fraction):
        """log|q| for a nonzero rational, free of overflow for huge integers"""
        if q == 0:
            raise ComputationError("valuation of zero")
        return self.mp.log(abs(q.numerator)) - self.mp.log(q.denominator)

    def log_abs(self, x):
        if x == 0:
            return self.mp.ninf
        return self.mp.log(abs(x))

    def eps_cliff(self):
        """Relative size under which a numeric root distance is untrusted"""
        return self.mp.ldexp(1, -(self.precision // 2))

    def polyroots(self, coefficients: Sequence[Fraction]) -> List[Any]:
        """
        Complex roots of a polynomial with rational coefficients

        Args:
            coefficients: Coefficients lowest degree first, degree at least 1

        Returns:
            Roots repeated according to the numerical solver
        """
        coeffs = list(coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        n = len(coeffs) - 1
        if n < 1:
            return []
        if n == 1:
            return [self.mp.mpc(-self.rat(coeffs[0]) / self.rat(coeffs[1]))]
        descending = [self.rat(c) for c in reversed(coeffs)]
        try:
            roots = self.mp.polyroots(
                descending, maxsteps=max(100, 20 * n), extraprec=2 * self.precision
            )
        except NoConvergence as e:
            raise ComputationError(f"root finding did not converge: {e}")
        # deterministic order so repeated calls pair up root by root
        return sorted((self.mp.mpc(r) for r in roots), key=lambda z: (z.real, z.imag))

    def digits(self, tolerance: Optional[float] = None) -> int:
        """Decimal digits worth printing at this precision and tolerance"""
        full = int(self.precision * math.log10(2))
        if tolerance is None or tolerance <= 0:
            return full
        return max(6, min(full, int(math.ceil(-math.log10(tolerance))) + 3))

    def nstr(self, x, digits: Optional[int] = None) -> str:
        return self.mp.nstr(x, digits or self.digits())
