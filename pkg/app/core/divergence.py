"""
Tower counterexample: averages over 2^l-th roots of unity around a
transcendental point on the unit circle that have no limit

psi(1) = 2, psi(n) = 2^(n psi(n-1)), alpha = sum 1/psi(m), beta = e^(2 pi i alpha).
With l_n = log2 psi(n) the 2^(l_n)-point average of log|w - beta| equals
log|beta^psi(n) - 1| / psi(n), which tends to -infinity.
"""
import logging
from dataclasses import dataclass
from typing import Any, List, Optional

from app.core.errors import InvalidInputError
from app.core.realctx import RealCtx
from app.core.results import ResultModel

logger = logging.getLogger(__name__)

MAX_TOWER_INDEX = 6

# log2 psi(n) as an exact integer stops being storable after this index
EXACT_TOWER_INDEX = 4


@dataclass(frozen=True)
class TowerLog:
    """
    l_n = log2 psi(n)

    Stored as an exact integer while psi(n-1) fits, otherwise as the
    symbolic pair (n, l_(n-1)) meaning n * 2^(l_(n-1)).
    """

    n: int
    exact: Optional[int] = None
    previous: Optional["TowerLog"] = None

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def to_json(self) -> str:
        return str(self)

    def __str__(self) -> str:
        if self.exact is not None:
            return str(self.exact)
        return f"{self.n}*2^({self.previous})"


def psi_log2(n: int) -> TowerLog:
    """log2 psi(n): 1, 4, 48, 2^50, then symbolic"""
    if n < 1:
        raise InvalidInputError("tower index must be at least 1")
    tower = TowerLog(1, exact=1)
    for m in range(2, n + 1):
        if m <= EXACT_TOWER_INDEX:
            tower = TowerLog(m, exact=m * 2 ** tower.exact)
        else:
            tower = TowerLog(m, previous=tower)
    return tower


class DivergentAverage(ResultModel):
    """The 2^(l_n)-point average at tower index n"""

    n: int
    log2_psi: Any
    value: Any
    upper_bound: Any
    leading_order: Any
    error_bound: Any
    method: str


def _dyadic_gap(lo: TowerLog, hi: TowerLog) -> Optional[int]:
    """l_lo - l_hi when both are exact, else None (the gap is astronomically negative)"""
    if lo.is_exact and hi.is_exact:
        return lo.exact - hi.exact
    return None


def divergent_average(n: int, ctx: Optional[RealCtx] = None) -> DivergentAverage:
    """
    (1/psi(n)) log|e^(2 pi i frac(psi(n) alpha)) - 1|

    frac(psi(n) alpha) = sum_{m > n} 2^(l_n - l_m) is dominated by its first
    term. When that term is representable at working precision the sine is
    evaluated directly; otherwise
        log(2 sin(pi f)) = log(2 pi) + (l_n - l_(n+1)) log 2 + O(tail)
    and dividing by psi(n) = 2^(l_n) leaves -(n+1) log 2 plus a correction
    of size about l_n 2^(-l_n).

    Args:
        n: Tower index, 1 <= n <= 6
        ctx: Working precision

    Returns:
        DivergentAverage with the value, the bound log pi + 1 - (n-1) log 2
        and the leading-order term -(n+1) log 2
    """
    if n < 1 or n > MAX_TOWER_INDEX:
        raise InvalidInputError(f"tower index must be between 1 and {MAX_TOWER_INDEX}")
    ctx = ctx or RealCtx()
    mp = ctx.mp
    towers = [psi_log2(m) for m in range(1, n + 4)]
    ell_n, ell_next = towers[n - 1], towers[n]
    log2 = mp.log(2)
    leading = -(n + 1) * log2
    upper_bound = mp.log(mp.pi) + 1 - n * log2 + log2

    gap = _dyadic_gap(ell_n, ell_next)
    if gap is not None and -gap <= ctx.precision:
        frac = mp.mpf(0)
        for m in range(n + 1, n + 4):
            g = _dyadic_gap(ell_n, towers[m - 1])
            if g is None or -g > 2 * ctx.precision:
                break
            frac += mp.ldexp(1, g)
        value = mp.log(2 * mp.sin(mp.pi * frac)) / mp.ldexp(1, ell_n.exact)
        error = mp.ldexp(1, -ctx.precision)
        method = "direct"
    elif ell_n.is_exact:
        # log1p of the tail is below 2^(l_(n+1) - l_(n+2)), invisible at any precision
        correction = (mp.log(2 * mp.pi) + ell_n.exact * log2) / mp.ldexp(1, ell_n.exact)
        value = leading + correction
        error = mp.ldexp(1, -ell_n.exact)
        method = "log-space"
    else:
        value = leading
        error = mp.ldexp(1, -towers[EXACT_TOWER_INDEX - 1].exact)
        method = "leading-order"
    logger.debug(f"Tower index {n}: {mp.nstr(value, 12)} via {method}")
    return DivergentAverage(
        n=n,
        log2_psi=ell_n,
        value=value,
        upper_bound=upper_bound,
        leading_order=leading,
        error_bound=error,
        method=method,
    )


def divergence_table(nmax: int = 3, ctx: Optional[RealCtx] = None) -> List[DivergentAverage]:
    """divergent_average for n = 1..nmax"""
    if nmax < 1 or nmax > MAX_TOWER_INDEX:
        raise InvalidInputError(f"nmax must be between 1 and {MAX_TOWER_INDEX}")
    ctx = ctx or RealCtx()
    return [divergent_average(n, ctx) for n in range(1, nmax + 1)]
