"""Interbank rate series ingestion and window statistics.

Reads FRED-style exports of the 12-month USD interbank rate (header
``DATE,<SERIES_ID>``, one ``YYYY-MM-DD,<value>`` row per observation,
``.`` marking a date with no published value) and computes the summary
statistics and bank funding rates used by the scenario engine.

Rates are held on the 0-100 percentage scale throughout this module.
Conversion to per-year fractions happens exactly once, at the bank
engine boundary.
"""

from __future__ import annotations

import datetime as dt
import os
import statistics
from dataclasses import dataclass
from importlib import resources
from math import fsum
from pathlib import Path

#: Spread (percentage points) the bank pays over the interbank rate.
FUNDS_RATE_SPREAD = 0.25

#: FRED export convention for a date with no published observation.
MISSING_MARKER = "."

#: Environment variable overriding the bundled-data directory.
DATA_DIR_ENV = "VENTUREBANK_DATA_DIR"

#: File name of the bundled rate snapshot shipped with the package.
SNAPSHOT_FILENAME = "libor_usd12m.csv"

RATE_MIN = 0.0
RATE_MAX = 50.0


class LiborLoadError(ValueError):
    """A rate CSV could not be parsed into a usable series."""


class EmptyWindowError(ValueError):
    """A statistics window contains no observations."""


@dataclass(frozen=True)
class RateObservation:
    """One dated observation of the annual rate, on the 0-100 scale."""

    date: dt.date
    rate: float

    def __post_init__(self) -> None:
        if not (RATE_MIN <= self.rate <= RATE_MAX):
            raise ValueError(
                f"rate {self.rate!r} on {self.date} outside [{RATE_MIN}, {RATE_MAX}]"
            )


@dataclass(frozen=True)
class LiborSeries:
    """Ordered, non-empty series of rate observations."""

    observations: tuple[RateObservation, ...]

    def __post_init__(self) -> None:
        if not self.observations:
            raise ValueError("series must contain at least one observation")
        dates = [o.date for o in self.observations]
        for prev, cur in zip(dates, dates[1:]):
            if cur <= prev:
                raise ValueError(f"dates must be strictly increasing; {cur} follows {prev}")

    def __len__(self) -> int:
        return len(self.observations)

    @property
    def start(self) -> dt.date:
        return self.observations[0].date

    @property
    def end(self) -> dt.date:
        return self.observations[-1].date

    def rates_in_window(self, start: dt.date | None = None, end: dt.date | None = None) -> list[float]:
        """Rates with start <= date <= end; open-ended when a bound is None."""
        return [
            o.rate
            for o in self.observations
            if (start is None or o.date >= start) and (end is None or o.date <= end)
        ]


@dataclass(frozen=True)
class WindowStats:
    median: float
    mean: float
    count: int


def load_libor_csv(path: str | Path) -> LiborSeries:
    """Load a FRED-format rate CSV into a :class:`LiborSeries`.

    The first line must be a header naming the date column and one value
    column. Rows whose value field is ``.`` are skipped (no observation
    published for that date). Any other non-numeric value, an
    unparseable date, or an out-of-order date raises
    :class:`LiborLoadError` naming the offending line.
    """
    path = Path(path)
    if not path.exists():
        raise LiborLoadError(f"no such file: {path}")

    with path.open("r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise LiborLoadError(f"{path}: empty file")

    header = lines[0].split(",")
    if len(header) < 2 or "date" not in header[0].strip().lower():
        raise LiborLoadError(
            f"{path}: line 1: expected header naming a date column and a value column, got {lines[0]!r}"
        )

    observations: list[RateObservation] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != len(header):
            raise LiborLoadError(f"{path}: line {lineno}: expected {len(header)} fields, got {len(fields)}")
        date_text, value_text = fields[0].strip(), fields[1].strip()
        try:
            day = dt.date.fromisoformat(date_text)
        except ValueError as exc:
            raise LiborLoadError(f"{path}: line {lineno}: bad date {date_text!r}: {exc}") from exc
        if value_text == MISSING_MARKER:
            continue
        try:
            rate = float(value_text)
        except ValueError as exc:
            raise LiborLoadError(f"{path}: line {lineno}: bad value {value_text!r}") from exc
        try:
            obs = RateObservation(day, rate)
        except ValueError as exc:
            raise LiborLoadError(f"{path}: line {lineno}: {exc}") from exc
        if observations and obs.date <= observations[-1].date:
            raise LiborLoadError(
                f"{path}: line {lineno}: date {obs.date} not after previous {observations[-1].date}"
            )
        observations.append(obs)

    if not observations:
        raise LiborLoadError(f"{path}: no usable rows")
    return LiborSeries(tuple(observations))


def window_stats(series: LiborSeries, start: dt.date | None = None, end: dt.date | None = None) -> WindowStats:
    """Median, mean and count over the inclusive date window.

    The median of an even-sized window is the mean of the two central
    values. Raises :class:`EmptyWindowError` when nothing falls inside
    the window.
    """
    if start is not None and end is not None and start > end:
        raise ValueError(f"window start {start} after end {end}")
    rates = series.rates_in_window(start, end)
    if not rates:
        raise EmptyWindowError(f"no observations between {start} and {end}")
    return WindowStats(
        median=statistics.median(rates),
        mean=fsum(rates) / len(rates),
        count=len(rates),
    )


def year_window(start_year: int, end_year: int) -> tuple[dt.date, dt.date]:
    """Inclusive calendar window: Jan 1 of start_year through Dec 31 of end_year."""
    return dt.date(start_year, 1, 1), dt.date(end_year, 12, 31)


def funds_rate(libor: float) -> float:
    """Bank funding rate in percent: the interbank rate plus the fixed spread."""
    if libor < 0:
        raise ValueError(f"interbank rate must be >= 0, got {libor!r}")
    return libor + FUNDS_RATE_SPREAD


def default_snapshot_path() -> Path:
    """Path of the bundled rate snapshot, honouring the data-dir override."""
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        return Path(override) / SNAPSHOT_FILENAME
    return Path(str(resources.files("venturebank") / "data" / SNAPSHOT_FILENAME))


def load_bundled_series() -> LiborSeries:
    """Load the rate snapshot shipped in the package data directory."""
    return load_libor_csv(default_snapshot_path())
