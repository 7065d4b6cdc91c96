"""Synthetic drive-by scenario generator.

Places samples along a straight street segment, derives the true beam
from the basestation-to-vehicle azimuth, builds a peaked per-beam power
footprint around it, and optionally corrupts the reported GPS position
(iid or spatially correlated Gauss-Markov noise) and/or the label
(peak shifted by one beam). Everything is driven by one seed, so a
scenario is a pure function of its config.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigError, InvalidInputError
from .types import MeasurementSample, PositionFix, PowerVector, Scenario

METERS_PER_DEG_LAT = 111_320.0

GPS_NOISE_MODELS = ("none", "iid_gaussian", "gauss_markov")

# Default geometry: a 200 m street running SW-NE with the basestation
# 240 m off to the south-east, its 180-degree sector facing the street.
# The street then subtends roughly 45 degrees, so about 18 of the 64
# beams are exercised.


@dataclass(frozen=True)
class SynthConfig:
    n_samples: int = 2000
    codebook_size: int = 64
    scenario_id: str = "synth"
    bs_lat: float = 33.418475
    bs_lon: float = -111.928174
    start_lat: float = 33.419365
    start_lon: float = -111.930761
    end_lat: float = 33.420635
    end_lon: float = -111.929239
    jitter_m: float = 1.2
    footprint_sharpness: float = 0.25
    noise_floor: float = 0.01
    sector_start_deg: float = 225.0
    sector_span_deg: float = 180.0
    gps_noise: str = "none"
    gps_sigma_m: float = 3.0
    gps_rho: float = 0.95
    label_noise_prob: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_samples < 1:
            raise InvalidConfigError(f"n_samples must be >= 1, got {self.n_samples}")
        if self.codebook_size < 1:
            raise InvalidConfigError(f"codebook_size must be >= 1, got {self.codebook_size}")
        if (self.start_lat, self.start_lon) == (self.end_lat, self.end_lon):
            raise InvalidConfigError("trajectory has zero length")
        if self.gps_noise not in GPS_NOISE_MODELS:
            raise InvalidConfigError(f"gps_noise must be one of {GPS_NOISE_MODELS}, got {self.gps_noise!r}")
        if self.gps_sigma_m < 0 or self.jitter_m < 0:
            raise InvalidConfigError("noise scales must be non-negative")
        if not 0.0 <= self.gps_rho < 1.0:
            raise InvalidConfigError(f"gps_rho must be in [0, 1), got {self.gps_rho}")
        if not 0.0 <= self.label_noise_prob <= 1.0:
            raise InvalidConfigError(f"label_noise_prob must be in [0, 1], got {self.label_noise_prob}")
        if self.noise_floor <= 0:
            raise InvalidConfigError("noise_floor must be positive")
        if self.footprint_sharpness <= 0:
            raise InvalidConfigError("footprint_sharpness must be positive")
        if self.sector_span_deg <= 0:
            raise InvalidConfigError("sector_span_deg must be positive")


def bearing_deg(bs: PositionFix, ue: PositionFix, ref_lat_deg: float | None = None) -> float:
    """Compass bearing from the basestation to the user, degrees in [0, 360).

    Small-area equirectangular approximation: metric offsets are taken
    at the reference latitude (defaults to the basestation's).
    """
    ref = math.radians(bs.lat if ref_lat_deg is None else ref_lat_deg)
    dn = (ue.lat - bs.lat) * METERS_PER_DEG_LAT
    de = (ue.lon - bs.lon) * METERS_PER_DEG_LAT * math.cos(ref)
    if dn == 0.0 and de == 0.0:
        raise InvalidInputError("basestation and user positions coincide; bearing undefined")
    return math.degrees(math.atan2(de, dn)) % 360.0


def azimuth_to_beam(
    bs: PositionFix,
    ue: PositionFix,
    m: int,
    sector_start_deg: float = 225.0,
    sector_span_deg: float = 180.0,
) -> int:
    """Quantize the BS-to-UE azimuth into one of m equal sectors.

    Azimuths outside the sector clamp to the nearest edge beam (0 or
    m - 1), splitting the wrap-around gap at its midpoint.
    """
    azimuth = bearing_deg(bs, ue)
    rel = (azimuth - sector_start_deg) % 360.0
    if rel >= sector_span_deg:
        # outside the sector: closer to the end edge or to the start edge?
        return m - 1 if rel - sector_span_deg <= 360.0 - rel else 0
    return min(int(m * rel / sector_span_deg), m - 1)


def _meters_to_deg(north_m, east_m, ref_lat_deg: float):
    dlat = np.asarray(north_m) / METERS_PER_DEG_LAT
    dlon = np.asarray(east_m) / (METERS_PER_DEG_LAT * math.cos(math.radians(ref_lat_deg)))
    return dlat, dlon


def _footprint(m: int, peak_index: int, sharpness: float, floor: float) -> np.ndarray:
    idx = np.arange(m)
    dist = np.abs(idx - peak_index)
    dist = np.minimum(dist, m - dist)  # circular beam-index distance
    return floor + np.exp(-sharpness * dist)


def generate(config: SynthConfig) -> Scenario:
    """Build a scenario from the config; deterministic per seed.

    True positions are evenly spaced along the segment plus isotropic
    jitter. The true beam comes from the azimuth of the *true* position;
    GPS noise only corrupts the reported position, label noise only
    shifts the footprint peak. Jitter, GPS noise and label noise draw
    from independent seeded streams so that changing one noise setting
    leaves the others' draws untouched.
    """
    n, m = config.n_samples, config.codebook_size
    jit_rng, gps_rng, lab_rng = (
        np.random.default_rng(s) for s in np.random.SeedSequence(config.seed).spawn(3)
    )
    ref_lat = 0.5 * (config.start_lat + config.end_lat)

    t = np.linspace(0.0, 1.0, n) if n > 1 else np.array([0.5])
    lat = config.start_lat + t * (config.end_lat - config.start_lat)
    lon = config.start_lon + t * (config.end_lon - config.start_lon)
    jitter = jit_rng.normal(0.0, config.jitter_m, size=(n, 2))
    dlat, dlon = _meters_to_deg(jitter[:, 0], jitter[:, 1], ref_lat)
    true_lat, true_lon = lat + dlat, lon + dlon

    bs = PositionFix(config.bs_lat, config.bs_lon)
    true_beams = np.array(
        [
            azimuth_to_beam(
                bs,
                PositionFix(float(la), float(lo)),
                m,
                config.sector_start_deg,
                config.sector_span_deg,
            )
            for la, lo in zip(true_lat, true_lon)
        ]
    )

    flips = lab_rng.random(n) < config.label_noise_prob
    signs = lab_rng.integers(0, 2, size=n) * 2 - 1
    peak = np.where(flips, (true_beams + signs) % m, true_beams)

    if config.gps_noise == "none":
        offsets = np.zeros((n, 2))
    else:
        w = gps_rng.normal(0.0, config.gps_sigma_m, size=(n, 2))
        rho = config.gps_rho if config.gps_noise == "gauss_markov" else 0.0
        offsets = np.empty_like(w)
        offsets[0] = w[0]
        scale = math.sqrt(1.0 - rho * rho)
        for i in range(1, n):
            offsets[i] = rho * offsets[i - 1] + scale * w[i]
    dlat, dlon = _meters_to_deg(offsets[:, 0], offsets[:, 1], ref_lat)
    rep_lat, rep_lon = true_lat + dlat, true_lon + dlon

    samples = [
        MeasurementSample(
            PositionFix(float(rep_lat[i]), float(rep_lon[i])),
            PowerVector(_footprint(m, int(peak[i]), config.footprint_sharpness, config.noise_floor)),
            i,
        )
        for i in range(n)
    ]
    return Scenario(config.scenario_id, m, samples)
