"""K-nearest-neighbors predictor over normalized positions.

An exact linear scan is used on purpose: scenarios hold a few thousand
points at most, and brute force keeps predictions bit-deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, InvalidConfigError
from .preprocess import NormParams, scenario_points
from .types import BeamDistribution, NormalizedPosition, Scenario


@dataclass(frozen=True)
class KnnModel:
    positions: np.ndarray  # (K, 2) normalized coordinates
    labels: np.ndarray  # (K,) best-beam labels
    sample_ids: np.ndarray  # (K,) distance tie-break keys
    n_neighbors: int
    codebook_size: int


def fit_knn(train: Scenario, n_neighbors: int, norm: NormParams | None = None) -> KnnModel:
    if len(train) == 0:
        raise InsufficientDataError("cannot fit KNN on an empty training set")
    if not 1 <= n_neighbors <= len(train):
        raise InvalidConfigError(f"n_neighbors must be in [1, {len(train)}], got {n_neighbors}")
    xs, labels, ids = scenario_points(train, norm)
    return KnnModel(xs, labels, ids, n_neighbors, train.codebook_size)


def knn_predict(model: KnnModel, pos: NormalizedPosition) -> BeamDistribution:
    """Label histogram of the n_neighbors nearest training points.

    Neighbors are ranked by squared Euclidean distance (the ranking is
    identical to the plain distance and avoids sqrt rounding splitting
    exact ties); equal distances are resolved by lower sample_id.
    """
    diff = model.positions - (pos.x, pos.y)
    d2 = diff[:, 0] ** 2 + diff[:, 1] ** 2
    order = np.lexsort((model.sample_ids, d2))
    neighbors = model.labels[order[: model.n_neighbors]]
    counts = np.bincount(neighbors, minlength=model.codebook_size).astype(np.float64)
    return BeamDistribution(counts / model.n_neighbors)


def tune_knn(train: Scenario, val: Scenario, candidates, norm: NormParams | None = None) -> int:
    """Neighbor count with the best top-1 validation accuracy; ties go to the smaller count."""
    candidates = sorted(set(candidates))
    if not candidates:
        raise InvalidConfigError("no neighbor-count candidates given")
    for c in candidates:
        if not 1 <= c <= len(train):
            raise InvalidConfigError(f"neighbor count {c} outside [1, {len(train)}]")
    xs, labels, _ = scenario_points(val, norm)
    best_k, best_acc = None, -1.0
    for k in candidates:
        model = fit_knn(train, k, norm)
        hits = sum(
            int(np.argmax(knn_predict(model, NormalizedPosition(x, y)).probs)) == label
            for (x, y), label in zip(xs, labels)
        )
        acc = hits / len(labels)
        if acc > best_acc:
            best_k, best_acc = k, acc
    return best_k
