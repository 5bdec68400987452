"""
Pydantic models for the command line
"""
from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from app.config import settings
from app.core.dynamics.rational_map import RationalMap, new_map
from app.core.errors import InvalidInputError
from app.core.exact import PolyQ, to_rat


class RunConfig(BaseModel):
    """Flags shared by every subcommand, defaulting to the settings"""
    map_path: Optional[Path] = Field(default=None, description="Map JSON file")
    precision: int = Field(default=settings.PRECISION_BITS, description="Working precision in bits", ge=64)
    tol: float = Field(default=settings.TOLERANCE, description="Convergence tolerance", gt=0)
    kmax: Optional[int] = Field(default=None, description="Iteration budget; KMAX for series, HEIGHT_KMAX for heights", ge=1)
    exact_degree_cap: int = Field(default=settings.EXACT_DEGREE_CAP, description="Largest exact polynomial degree", ge=1)
    output: Literal["csv", "json"] = Field(default="json", description="Output format")

    @property
    def series_kmax(self) -> int:
        return self.kmax or settings.KMAX

    @property
    def height_kmax(self) -> int:
        return self.kmax or settings.HEIGHT_KMAX


class MapFile(BaseModel):
    """Map file: coefficients ordered T0^d ... T1^d as rational strings"""
    d: int = Field(..., description="Degree", ge=2)
    P: List[str] = Field(..., description="Coefficients of P")
    Q: List[str] = Field(..., description="Coefficients of Q")

    @field_validator('P', 'Q')
    @classmethod
    def validate_rationals(cls, v):
        for c in v:
            to_rat(c)
        return v

    @model_validator(mode='after')
    def validate_lengths(self):
        if len(self.P) != self.d + 1 or len(self.Q) != self.d + 1:
            raise ValueError('coefficient list length must be d+1')
        return self

    def to_map(self) -> RationalMap:
        return new_map(self.P, self.Q)


def load_map(path: Optional[Path]) -> RationalMap:
    """Read and validate a map file"""
    if path is None:
        raise InvalidInputError("--map is required")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidInputError(f"cannot read map file {path}: {e.strerror}")
    try:
        data = MapFile.model_validate_json(text)
    except ValidationError as e:
        # surface the first message; a malformed rational keeps its own wording
        first = e.errors()[0]
        raise InvalidInputError(str(first.get("ctx", {}).get("error", first["msg"])))
    return data.to_map()


def parse_poly(text: str) -> PolyQ:
    """
    Comma-separated rational coefficients, lowest degree first

    "-1,-1,1" is t^2 - t - 1.
    """
    if text is None or not text.strip():
        raise InvalidInputError("malformed rational: empty polynomial")
    f = PolyQ.from_coefficients([to_rat(c.strip()) for c in text.split(",")])
    if f.is_zero:
        raise InvalidInputError("zero polynomial")
    return f
