"""Evaluation quantities: top-k accuracy, noise-referenced power loss,
beamset size, and beam-training overhead savings at a target
reliability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InsufficientDataError,
    InternalInvariantError,
    InvalidInputError,
    InvalidNoiseError,
)
from .types import BeamDistribution, Scenario, power_matrix, top_k_beams


@dataclass(frozen=True)
class EvaluationReport:
    """One predictor's metrics on one scenario's test split."""

    scenario_id: str
    predictor: str
    top_k_accuracy: dict = field(default_factory=dict)  # k -> fraction
    power_loss_db: float = 0.0
    beamset_size: float = 1.0
    overhead_savings: dict = field(default_factory=dict)  # reliability -> fraction

    def __post_init__(self):
        accs = [self.top_k_accuracy[k] for k in sorted(self.top_k_accuracy)]
        if any(b < a for a, b in zip(accs, accs[1:])):
            raise InternalInvariantError(f"top-k accuracy not monotone in k: {self.top_k_accuracy}")


def topk_accuracy(dists, labels, k: int) -> float:
    """Fraction of samples whose label is among the k most probable beams."""
    dists = list(dists)
    labels = list(labels)
    if len(dists) != len(labels):
        raise InvalidInputError(f"{len(dists)} distributions vs {len(labels)} labels")
    if not dists:
        raise InvalidInputError("empty evaluation set")
    hits = sum(int(label in top_k_beams(dist, k)) for dist, label in zip(dists, labels))
    return hits / len(dists)


def estimate_noise_power(scenario: Scenario) -> float:
    """Mean over samples of the weakest beam's power (linear scale)."""
    if len(scenario) == 0:
        raise InsufficientDataError("cannot estimate noise power on an empty scenario")
    return float(power_matrix(scenario).min(axis=1).mean())


def power_loss_db(samples, predicted, noise_power: float) -> float:
    """Average noise-corrected power ratio between best and predicted beam, in dB.

    Per sample the ratio (P_best - P_n) / (P_predicted - P_n) is formed
    in linear scale; the denominator is clamped below at 1e-12 times the
    numerator to guard predicted beams sitting at the noise floor.
    """
    samples = list(samples)
    predicted = list(predicted)
    if len(samples) != len(predicted):
        raise InvalidInputError(f"{len(samples)} samples vs {len(predicted)} predictions")
    if not samples:
        raise InvalidInputError("empty evaluation set")
    total = 0.0
    for sample, beam in zip(samples, predicted):
        powers = sample.powers.powers
        best = float(powers.max())
        if noise_power >= best:
            raise InvalidNoiseError(
                f"noise power {noise_power} is not below best-beam power {best} (sample {sample.sample_id})"
            )
        num = best - noise_power
        den = max(float(powers[beam]) - noise_power, 1e-12 * num)
        total += num / den
    return 10.0 * math.log10(total / len(samples))


def beamset_size(scenario: Scenario, gamma: float = 0.7) -> float:
    """Mean number of beams per sample within fraction gamma of its best beam's power."""
    if not 0.0 < gamma <= 1.0:
        raise InvalidInputError(f"gamma must be in (0, 1], got {gamma}")
    if len(scenario) == 0:
        raise InsufficientDataError("cannot compute beamset size on an empty scenario")
    powers = power_matrix(scenario)
    counts = (powers >= gamma * powers.max(axis=1, keepdims=True)).sum(axis=1)
    return float(counts.mean())


def min_beams_for_reliability(dists, labels, reliability: float, mode: str = "coverage") -> float:
    """Smallest candidate-set size reaching the target reliability.

    ``coverage`` (default): the smallest integer b whose top-b empirical
    accuracy is at least the reliability. ``mass``: per sample the
    smallest b whose top-b probability mass exceeds the reliability,
    averaged over samples.
    """
    if not 0.0 < reliability < 1.0:
        raise InvalidInputError(f"reliability must be in (0, 1), got {reliability}")
    dists = list(dists)
    labels = list(labels)
    if not dists:
        raise InvalidInputError("empty evaluation set")
    m = dists[0].m if isinstance(dists[0], BeamDistribution) else len(dists[0])

    if mode == "coverage":
        for b in range(1, m + 1):
            if topk_accuracy(dists, labels, b) >= reliability:
                return b
        raise InternalInvariantError(
            f"coverage never reached {reliability} even with all {m} beams"
        )
    if mode == "mass":
        total = 0.0
        for dist in dists:
            probs = dist.probs if isinstance(dist, BeamDistribution) else np.asarray(dist)
            mass = np.cumsum(np.sort(probs)[::-1])
            above = np.nonzero(mass > reliability)[0]
            total += (above[0] + 1) if above.size else m
        return total / len(dists)
    raise InvalidInputError(f"unknown reliability mode {mode!r}")


def overhead_savings(dists, labels, reliability: float, mode: str = "coverage") -> float:
    """Fraction of beam-training overhead avoided at the target reliability."""
    dists = list(dists)
    m = dists[0].m if isinstance(dists[0], BeamDistribution) else len(dists[0])
    b = min_beams_for_reliability(dists, labels, reliability, mode)
    return 1.0 - b / m


def evaluate(
    scenario_id: str,
    predictor: str,
    test: Scenario,
    dists,
    reliabilities=(0.8, 0.9, 0.95, 0.99),
    gamma: float = 0.7,
    savings_mode: str = "coverage",
    max_k: int = 5,
) -> EvaluationReport:
    """Assemble the full report for one predictor on one test split."""
    dists = list(dists)
    labels = [int(np.argmax(s.powers.powers)) for s in test.samples]
    predicted = [int(np.argmax(d.probs)) for d in dists]
    noise = estimate_noise_power(test)
    ks = range(1, min(max_k, test.codebook_size) + 1)
    return EvaluationReport(
        scenario_id=scenario_id,
        predictor=predictor,
        top_k_accuracy={k: topk_accuracy(dists, labels, k) for k in ks},
        power_loss_db=power_loss_db(test.samples, predicted, noise),
        beamset_size=beamset_size(test, gamma),
        overhead_savings={r: overhead_savings(dists, labels, r, savings_mode) for r in reliabilities},
    )
