"""
Deterministic JSON and CSV rendering of engine results
"""
import json
import logging
from typing import Any, Callable, Dict, List, TextIO, Union

import pandas as pd

from app.core.realctx import RealCtx
from app.core.results import ConvergenceSeries, ResultModel, SeriesRow, plain

logger = logging.getLogger(__name__)

Record = Dict[str, Any]


class Emitter:
    """
    Writes results to a stream

    JSON output is one document per command. CSV output flattens records
    with pandas; convergence tables are written row by row as they arrive.
    """

    SERIES_COLUMNS = ["k", "value", "delta"]

    def __init__(self, stream: TextIO, output: str, ctx: RealCtx, tol: float):
        self.stream = stream
        self.output = output
        self.digits = ctx.digits(tol)
        self.ctx = ctx
        self._rows_written = 0

    def fmt(self, x) -> str:
        return self.ctx.nstr(x, self.digits)

    def record(self, result: Union[ResultModel, Record]) -> Record:
        if isinstance(result, ResultModel):
            return result.to_record(self.fmt)
        return plain(result, self.fmt)

    def emit(self, result: Union[ResultModel, Record, List[Any]]) -> None:
        """Write a single result or a list of homogeneous results"""
        records = [self.record(r) for r in result] if isinstance(result, list) else self.record(result)
        if self.output == "json":
            self.stream.write(json.dumps(records, indent=2) + "\n")
            return
        rows = records if isinstance(records, list) else [records]
        frame = pd.json_normalize(rows, sep=".")
        frame.to_csv(self.stream, index=False, lineterminator="\n")

    def series_row(self) -> Callable[[SeriesRow], None]:
        """Row callback for convergence tables; streams in CSV mode only"""

        def on_row(row: SeriesRow) -> None:
            if self.output != "csv":
                return
            if row.approximate:
                logger.warning(f"Row k={row.k} is approximate")
            record = {c: plain(getattr(row, c), self.fmt) for c in self.SERIES_COLUMNS}
            frame = pd.DataFrame([record], columns=self.SERIES_COLUMNS)
            frame.to_csv(
                self.stream, index=False, header=self._rows_written == 0, lineterminator="\n"
            )
            self.stream.flush()
            self._rows_written += 1

        return on_row

    def series(self, series: ConvergenceSeries) -> None:
        """Finish a convergence table; the CSV rows have already been streamed"""
        if self.output == "json":
            self.emit(series)
