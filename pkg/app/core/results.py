"""
Result records returned by the engines
"""
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.core.exact import ExactLog, rat_to_str


class ResultModel(BaseModel):
    """Immutable record that may carry mpmath numbers"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def to_record(self, fmt: Callable[[Any], str]) -> Dict[str, Any]:
        """
        Plain JSON-ready dictionary

        Args:
            fmt: Renders an mpmath real as a decimal string
        """
        return {name: plain(getattr(self, name), fmt) for name in type(self).model_fields}


def plain(value: Any, fmt: Callable[[Any], str]) -> Any:
    """Recursively turn engine values into JSON-ready ones"""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, Fraction):
        return rat_to_str(value)
    if isinstance(value, ExactLog):
        return str(value)
    if isinstance(value, ResultModel):
        return value.to_record(fmt)
    if isinstance(value, dict):
        return {str(k): plain(v, fmt) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v, fmt) for v in value]
    if isinstance(value, float):
        return value
    if hasattr(value, "to_json"):
        return value.to_json()
    return fmt(value)


class SeriesRow(ResultModel):
    """One row of a convergence table"""

    k: int
    value: Any
    delta: Optional[Any] = None
    exact: Optional[ExactLog] = None
    approximate: bool = False
    fallback: bool = False


class ConvergenceSeries(ResultModel):
    """Values of a k-indexed quantity with its successive differences"""

    label: str
    rows: List[SeriesRow] = Field(default_factory=list)
    converged: bool = False
    limit_estimate: Optional[Any] = None
    target: Optional[Any] = None
    approximate: bool = False
    fallback: bool = False
