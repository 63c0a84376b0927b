"""Result-row schema shared by the CLI commands and the benchmark sweeps."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from importlib import resources

__all__ = ["PriceReport", "CSV_COLUMNS", "load_report_schema", "clip_probability"]

CSV_COLUMNS = ("method", "n", "length", "alpha", "shift", "strike", "spot",
               "value", "abs_err_vs_oracle", "err_estimate", "wall_time_ns", "mode")


@dataclass(frozen=True)
class PriceReport:
    """One pricing result. ``abs_err_vs_oracle`` is None when the method is
    the oracle itself; ``err_estimate`` is the oracle's internal quadrature
    estimate and None for grid methods."""

    method: str
    n: int | None
    length: float | None
    alpha: float | None
    shift: str | None
    strike: float
    spot: float
    value: float
    abs_err_vs_oracle: float | None
    err_estimate: float | None
    wall_time_ns: int
    mode: str

    def to_json_dict(self) -> dict:
        return asdict(self)

    def to_csv_row(self) -> list[str]:
        data = asdict(self)
        return ["" if data[col] is None else str(data[col]) for col in CSV_COLUMNS]


def load_report_schema() -> dict:
    """The JSON schema shipped with the package for PriceReport payloads."""
    text = resources.files("heston_cfft").joinpath("price_report_schema.json").read_text()
    return json.loads(text)


def clip_probability(p: float) -> float:
    """Reporting-only clip of a probability estimate to [0, 1]."""
    return min(max(p, 0.0), 1.0)
