"""Scenario CSV schema: ``scenario_id,sample_id,lat,lon,p_1,...,p_M``.

One row per sample, linear-scale powers, 1-based beam columns, UTF-8.
Floats are written with shortest round-trip precision so rewriting a
scenario is byte-stable.
"""

from __future__ import annotations

import csv

from .errors import DataError
from .types import MeasurementSample, PositionFix, PowerVector, Scenario

_FIXED_COLUMNS = ("scenario_id", "sample_id", "lat", "lon")


def scenario_header(m: int) -> list[str]:
    return [*_FIXED_COLUMNS, *(f"p_{i}" for i in range(1, m + 1))]


def write_scenario(scenario: Scenario, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(scenario_header(scenario.codebook_size))
        for s in scenario.samples:
            writer.writerow(
                [scenario.scenario_id, s.sample_id, repr(s.position.lat), repr(s.position.lon)]
                + [repr(float(p)) for p in s.powers.powers]
            )


def read_scenarios(path) -> list[Scenario]:
    """All scenarios in a file, grouped by scenario_id in order of first appearance."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty scenario file") from None
        m = len(header) - len(_FIXED_COLUMNS)
        if m < 1 or header != scenario_header(m):
            raise DataError(f"{path}: malformed header {header!r}")
        groups: dict[str, list[MeasurementSample]] = {}
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise DataError(f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}")
            try:
                sample = MeasurementSample(
                    PositionFix(float(row[2]), float(row[3])),
                    PowerVector([float(v) for v in row[4:]]),
                    int(row[1]),
                )
            except (ValueError, DataError) as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
            groups.setdefault(row[0], []).append(sample)
    if not groups:
        raise DataError(f"{path}: no samples")
    return [Scenario(sid, m, samples) for sid, samples in groups.items()]


def read_scenario(path) -> Scenario:
    """The single scenario in a file; errors if the file holds several."""
    scenarios = read_scenarios(path)
    if len(scenarios) != 1:
        raise DataError(f"{path}: expected one scenario, found {[s.scenario_id for s in scenarios]}")
    return scenarios[0]
