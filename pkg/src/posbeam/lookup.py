"""Lookup-table predictor: discretize the unit square into a uniform
grid of cells and answer each query with the per-cell label histogram.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientDataError, InvalidConfigError
from .preprocess import NormParams, scenario_points
from .types import BeamDistribution, NormalizedPosition, Scenario, uniform_distribution


@dataclass(frozen=True)
class LookupTable:
    """Sparse map from grid cell to beam distribution.

    Cells that received no training samples are absent from the map and
    answer with ``default_dist`` (a uniform distribution, the
    deterministic stand-in for a random guess).
    """

    n_cells: int
    grid_dim: int
    codebook_size: int
    cell_dists: dict = field(default_factory=dict)
    default_dist: BeamDistribution = None

    def __post_init__(self):
        if self.default_dist is None:
            object.__setattr__(self, "default_dist", uniform_distribution(self.codebook_size))


def _grid_dim(n_cells: int) -> int:
    if n_cells < 1:
        raise InvalidConfigError(f"cell count must be >= 1, got {n_cells}")
    dim = math.isqrt(n_cells)
    if dim * dim != n_cells:
        raise InvalidConfigError(f"cell count must be a perfect square, got {n_cells}")
    return dim


def cell_of(pos: NormalizedPosition, n_cells: int) -> tuple[int, int]:
    """Grid cell of a normalized position; coordinate 1.0 maps into the last row/column."""
    dim = _grid_dim(n_cells)
    row = min(math.floor(pos.x * dim), dim - 1)
    col = min(math.floor(pos.y * dim), dim - 1)
    return row, col


def fit_lookup(train: Scenario, n_cells: int, norm: NormParams | None = None) -> LookupTable:
    """Count best-beam labels per cell and normalize to per-cell distributions."""
    dim = _grid_dim(n_cells)
    if len(train) == 0:
        raise InsufficientDataError("cannot fit a lookup table on an empty training set")
    xs, labels, _ = scenario_points(train, norm)
    m = train.codebook_size
    counts: dict[tuple[int, int], np.ndarray] = {}
    for (x, y), label in zip(xs, labels):
        cell = (min(math.floor(x * dim), dim - 1), min(math.floor(y * dim), dim - 1))
        counts.setdefault(cell, np.zeros(m))[label] += 1.0
    dists = {cell: BeamDistribution(c / c.sum()) for cell, c in counts.items()}
    return LookupTable(n_cells=n_cells, grid_dim=dim, codebook_size=m, cell_dists=dists)


def lookup_predict(table: LookupTable, pos: NormalizedPosition) -> BeamDistribution:
    """Distribution stored for the query's cell, uniform for empty cells."""
    return table.cell_dists.get(cell_of(pos, table.n_cells), table.default_dist)


def tune_lookup(train: Scenario, val: Scenario, candidates, norm: NormParams | None = None) -> int:
    """Cell count with the best top-1 validation accuracy; ties go to the smaller grid."""
    candidates = sorted(set(candidates))
    if not candidates:
        raise InvalidConfigError("no cell-count candidates given")
    xs, labels, _ = scenario_points(val, norm)
    best_n, best_acc = None, -1.0
    for n_cells in candidates:
        table = fit_lookup(train, n_cells, norm)
        hits = sum(
            int(np.argmax(lookup_predict(table, NormalizedPosition(x, y)).probs)) == label
            for (x, y), label in zip(xs, labels)
        )
        acc = hits / len(labels)
        if acc > best_acc:
            best_n, best_acc = n_cells, acc
    return best_n
