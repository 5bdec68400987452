"""
Places of Q
"""
from dataclasses import dataclass
from typing import Iterable, List, Optional

import sympy

from app.core.errors import InvalidInputError


@dataclass(frozen=True)
class Place:
    """The archimedean place (p is None) or the p-adic place for a prime p"""

    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None and (self.p < 2 or not sympy.isprime(self.p)):
            raise InvalidInputError(f"not a prime: {self.p}")

    @classmethod
    def infinity(cls) -> "Place":
        return cls(None)

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "Place":
        """"inf" or a prime"""
        text = str(text).strip().lower()
        if text in ("inf", "infinity", "oo"):
            return cls.infinity()
        try:
            return cls(int(text))
        except ValueError:
            raise InvalidInputError(f"not a prime: {text}")

    @property
    def is_archimedean(self) -> bool:
        return self.p is None

    def sort_key(self):
        return (0, 0) if self.p is None else (1, self.p)

    def to_json(self) -> str:
        return str(self)

    def __str__(self) -> str:
        return "inf" if self.p is None else str(self.p)


def support(primes: Iterable[int]) -> List[Place]:
    """[inf] followed by the finite places of the given primes, sorted"""
    return [Place.infinity()] + [Place.finite(p) for p in sorted(set(primes))]
