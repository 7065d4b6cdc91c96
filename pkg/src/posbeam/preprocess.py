"""Everything between raw samples and predictor-ready data: min-max
normalization, input quantization, dataset splitting, and codebook
reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRangeError, InsufficientDataError, InvalidConfigError
from .types import MeasurementSample, NormalizedPosition, PositionFix, PowerVector, Scenario, best_beam


@dataclass(frozen=True)
class NormParams:
    """Coordinate bounds used for min-max normalization."""

    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    def __post_init__(self):
        if not (self.lat_min < self.lat_max):
            raise DegenerateRangeError(f"lat range degenerate: [{self.lat_min}, {self.lat_max}]")
        if not (self.lon_min < self.lon_max):
            raise DegenerateRangeError(f"lon range degenerate: [{self.lon_min}, {self.lon_max}]")


@dataclass(frozen=True)
class SplitSpec:
    """Fractions and seed for the train/val/test shuffle-split."""

    train_frac: float = 0.6
    val_frac: float = 0.2
    test_frac: float = 0.2
    seed: int = 0

    def __post_init__(self):
        fracs = (self.train_frac, self.val_frac, self.test_frac)
        if any(f <= 0.0 for f in fracs):
            raise InvalidConfigError(f"split fractions must be positive, got {fracs}")
        if abs(sum(fracs) - 1.0) > 1e-9:
            raise InvalidConfigError(f"split fractions must sum to 1, got {sum(fracs)}")


def fit_norm(samples) -> NormParams:
    """Coordinate-wise min/max over the given samples (fit on training data only)."""
    samples = list(samples)
    if len(samples) < 2:
        raise InsufficientDataError(f"need at least 2 samples to fit normalization, got {len(samples)}")
    lats = [s.position.lat for s in samples]
    lons = [s.position.lon for s in samples]
    if min(lats) == max(lats):
        raise DegenerateRangeError("all latitudes identical; cannot normalize")
    if min(lons) == max(lons):
        raise DegenerateRangeError("all longitudes identical; cannot normalize")
    return NormParams(min(lats), max(lats), min(lons), max(lons))


def apply_norm(params: NormParams, fix: PositionFix) -> NormalizedPosition:
    """Map a fix into the unit square; out-of-range fixes are clamped."""
    x = (fix.lat - params.lat_min) / (params.lat_max - params.lat_min)
    y = (fix.lon - params.lon_min) / (params.lon_max - params.lon_min)
    return NormalizedPosition(min(max(x, 0.0), 1.0), min(max(y, 0.0), 1.0))


def quantize_position(pos: NormalizedPosition, bins: int = 200) -> NormalizedPosition:
    """Snap each coordinate to the lower edge of its bin.

    Coordinate 1.0 falls into the last bin. The small nudge before the
    floor keeps quantization idempotent: k/bins*bins can round just
    below k in floating point.
    """
    if bins < 1:
        raise InvalidConfigError(f"bins must be >= 1, got {bins}")
    return NormalizedPosition(_snap(pos.x, bins), _snap(pos.y, bins))


def _snap(coord: float, bins: int) -> float:
    k = min(math.floor(coord * bins + 1e-9), bins - 1)
    return k / bins


def split_scenario(scenario: Scenario, spec: SplitSpec) -> tuple[Scenario, Scenario, Scenario]:
    """Seeded uniform shuffle, then contiguous partition into train/val/test."""
    k = len(scenario)
    n_train = math.floor(k * spec.train_frac)
    n_trainval = math.floor(k * (spec.train_frac + spec.val_frac))
    if n_train < 1 or n_trainval - n_train < 1 or k - n_trainval < 1:
        raise InsufficientDataError(
            f"{k} samples split {spec.train_frac}/{spec.val_frac}/{spec.test_frac} leaves an empty part"
        )
    order = np.random.default_rng(spec.seed).permutation(k)
    parts = (order[:n_train], order[n_train:n_trainval], order[n_trainval:])
    return tuple(
        Scenario(scenario.scenario_id, scenario.codebook_size, [scenario.samples[i] for i in idx])
        for idx in parts
    )


REDUCIBLE_SIZES = (8, 16, 32, 64)


def reduce_codebook(scenario: Scenario, target_m: int) -> Scenario:
    """Keep every (M/target_m)-th beam starting at index 0.

    Uniform striding preserves uniform angular coverage of an
    azimuth-sweeping codebook. Labels need no explicit recomputation:
    they are derived from the reduced power vectors on demand.
    """
    m = scenario.codebook_size
    if target_m not in REDUCIBLE_SIZES:
        raise InvalidConfigError(f"target codebook size must be one of {REDUCIBLE_SIZES}, got {target_m}")
    if m % target_m != 0:
        raise InvalidConfigError(f"target codebook size {target_m} does not divide {m}")
    stride = m // target_m
    if stride == 1:
        return scenario
    reduced = [
        MeasurementSample(s.position, PowerVector(s.powers.powers[::stride]), s.sample_id)
        for s in scenario.samples
    ]
    return Scenario(scenario.scenario_id, target_m, reduced)


def scenario_points(scenario: Scenario, norm: NormParams | None = None, bins: int | None = None):
    """Positions, derived labels, and sample ids as flat arrays.

    With ``norm`` the raw fixes are min-max normalized (and clamped);
    without it the fixes are taken to already live in the unit square.
    ``bins`` additionally quantizes the coordinates (neural-network
    input path only).
    """
    xs = np.empty((len(scenario), 2), dtype=np.float64)
    labels = np.empty(len(scenario), dtype=np.int64)
    ids = np.empty(len(scenario), dtype=np.int64)
    for i, s in enumerate(scenario.samples):
        if norm is not None:
            p = apply_norm(norm, s.position)
        else:
            p = NormalizedPosition(s.position.lat, s.position.lon)
        if bins is not None:
            p = quantize_position(p, bins)
        xs[i] = (p.x, p.y)
        labels[i] = best_beam(s.powers)
        ids[i] = s.sample_id
    return xs, labels, ids
