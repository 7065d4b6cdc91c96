"""Core data model: positions, power vectors, samples, scenarios, beam
probability distributions, and the ground-truth labeling rule.

All types are immutable value objects; array payloads are marked
read-only so instances can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError


def _frozen_array(values, dtype=np.float64) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class PositionFix:
    """Raw GPS fix of the user equipment, decimal degrees."""

    lat: float
    lon: float

    def __post_init__(self):
        if not (-90.0 <= self.lat <= 90.0):
            raise InvalidInputError(f"latitude out of range: {self.lat}")
        if not (-180.0 <= self.lon <= 180.0):
            raise InvalidInputError(f"longitude out of range: {self.lon}")


@dataclass(frozen=True)
class NormalizedPosition:
    """Position after min-max normalization, both coordinates in [0, 1]."""

    x: float
    y: float

    def __post_init__(self):
        if not (0.0 <= self.x <= 1.0 and 0.0 <= self.y <= 1.0):
            raise InvalidInputError(f"normalized coords out of [0,1]: ({self.x}, {self.y})")


@dataclass(frozen=True)
class PowerVector:
    """Linear-scale received power for each of the M codebook beams."""

    powers: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.powers)
        _validate_powers(arr)
        object.__setattr__(self, "powers", arr)

    @property
    def m(self) -> int:
        return self.powers.shape[0]


def _validate_powers(arr: np.ndarray) -> None:
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInputError("power vector must be a non-empty 1-D array")
    if np.any(arr < 0.0):
        raise InvalidInputError("power vector has negative entries")
    if not np.any(arr > 0.0):
        raise InvalidInputError("power vector is all-zero")


@dataclass(frozen=True)
class MeasurementSample:
    """One (position, per-beam power) record; the best-beam label is derived."""

    position: PositionFix
    powers: PowerVector
    sample_id: int


@dataclass(frozen=True)
class Scenario:
    """Ordered collection of samples sharing one codebook."""

    scenario_id: str
    codebook_size: int
    samples: tuple[MeasurementSample, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        if self.codebook_size < 1:
            raise InvalidInputError(f"codebook size must be >= 1, got {self.codebook_size}")
        ids = set()
        for s in self.samples:
            if s.powers.m != self.codebook_size:
                raise InvalidInputError(
                    f"sample {s.sample_id} has {s.powers.m} beams, scenario expects {self.codebook_size}"
                )
            if s.sample_id in ids:
                raise InvalidInputError(f"duplicate sample_id {s.sample_id}")
            ids.add(s.sample_id)

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class BeamDistribution:
    """Probability vector over the M beams emitted by every predictor."""

    probs: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.probs)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidInputError("probability vector must be a non-empty 1-D array")
        if np.any(arr < 0.0) or np.any(arr > 1.0 + 1e-9):
            raise InvalidInputError("probabilities must lie in [0, 1]")
        if abs(float(arr.sum()) - 1.0) > 1e-9:
            raise InvalidInputError(f"probabilities sum to {arr.sum()}, expected 1")
        object.__setattr__(self, "probs", arr)

    @property
    def m(self) -> int:
        return self.probs.shape[0]


def uniform_distribution(m: int) -> BeamDistribution:
    return BeamDistribution(np.full(m, 1.0 / m))


def best_beam(powers) -> int:
    """Index of the strongest beam; ties broken by lowest index.

    Accepts a PowerVector or any 1-D array-like of linear powers.
    """
    if isinstance(powers, PowerVector):
        arr = powers.powers
    else:
        arr = np.asarray(powers, dtype=np.float64)
        _validate_powers(arr)
    return int(np.argmax(arr))


def top_k_beams(dist, k: int) -> list[int]:
    """The k most probable beam indices, descending; ties go to the lower index."""
    probs = dist.probs if isinstance(dist, BeamDistribution) else np.asarray(dist, dtype=np.float64)
    m = probs.shape[0]
    if not 1 <= k <= m:
        raise InvalidInputError(f"k must be in [1, {m}], got {k}")
    # stable sort of -probs keeps equal probabilities in index order
    order = np.argsort(-probs, kind="stable")
    return [int(i) for i in order[:k]]


def power_matrix(scenario: Scenario) -> np.ndarray:
    """Stack all per-sample power vectors into a (K, M) array."""
    return np.stack([s.powers.powers for s in scenario.samples])


def scenario_labels(scenario: Scenario) -> np.ndarray:
    """Derived best-beam label for every sample, shape (K,)."""
    if len(scenario) == 0:
        return np.zeros(0, dtype=np.int64)
    return np.argmax(power_matrix(scenario), axis=1).astype(np.int64)
