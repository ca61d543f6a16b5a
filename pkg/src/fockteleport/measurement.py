"""Ideal photon-number-resolving detection and Bell-outcome classification."""

from __future__ import annotations

import bisect
import enum
import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .bell import Parity, psi_minus_parity
from .errors import ConventionViolation
from .fock import QuantumState, split_on

ZERO_PROBABILITY = 1e-12


class BellOutcome(enum.Enum):
    PSI_PLUS = "Psi+"
    PSI_MINUS = "Psi-"
    PHI_AMBIGUOUS = "Phi"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class DetectorPattern:
    """Photon counts for an ordered set of detectors."""

    detectors: tuple[str, ...]
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.detectors) != len(self.counts):
            raise ValueError("one count per detector is required")
        if any(c < 0 for c in self.counts):
            raise ValueError(f"negative detector count in {self.counts}")

    @classmethod
    def from_mapping(cls, counts: Mapping[str, int]) -> DetectorPattern:
        return cls(tuple(counts), tuple(int(c) for c in counts.values()))

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.detectors, self.counts))

    def __getitem__(self, detector: str) -> int:
        return self.counts[self.detectors.index(detector)]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def fired(self) -> tuple[str, ...]:
        return tuple(d for d, c in zip(self.detectors, self.counts) if c > 0)

    def restrict(self, detectors: Sequence[str]) -> DetectorPattern:
        return DetectorPattern(tuple(detectors), tuple(self[d] for d in detectors))

    def __add__(self, other: DetectorPattern) -> DetectorPattern:
        return DetectorPattern(self.detectors + other.detectors, self.counts + other.counts)

    def __str__(self) -> str:
        return " ".join(f"{d}={c}" for d, c in zip(self.detectors, self.counts))


@dataclass(frozen=True)
class Outcome:
    pattern: DetectorPattern
    probability: float
    conditional: QuantumState


@dataclass(frozen=True)
class OutcomeDistribution:
    """All detector patterns with nonzero probability, most-photons-first on the leading detectors."""

    detectors: tuple[str, ...]
    outcomes: tuple[Outcome, ...]

    def __iter__(self) -> Iterator[Outcome]:
        return iter(self.outcomes)

    def __len__(self) -> int:
        return len(self.outcomes)

    def probability(self, counts: Mapping[str, int] | Sequence[int]) -> float:
        key = tuple(counts[d] for d in self.detectors) if isinstance(counts, Mapping) else tuple(counts)
        for o in self.outcomes:
            if o.pattern.counts == key:
                return o.probability
        return 0.0

    def total_probability(self) -> float:
        return math.fsum(o.probability for o in self.outcomes)

    def cumulative(self) -> list[float]:
        return list(itertools.accumulate(o.probability for o in self.outcomes))

    def sample(self, rng: np.random.Generator) -> Outcome:
        return self.outcomes[draw_index(self.cumulative(), rng)]


def draw_index(cumulative: Sequence[float], rng: np.random.Generator) -> int:
    """Inverse-CDF draw of one index from a cumulative probability list."""
    u = rng.random() * cumulative[-1]
    return min(bisect.bisect_right(cumulative, u), len(cumulative) - 1)


def outcome_distribution(state: QuantumState, detector_modes: Sequence[str]) -> OutcomeDistribution:
    """Exact distribution of photon counts on ``detector_modes``.

    Probabilities are normalized by the state's squared norm; patterns below
    1e-12 are dropped. Each outcome carries the normalized state of the
    undetected modes.
    """
    detectors = tuple(detector_modes)
    rest_registry, branches = split_on(state, detectors)
    total = state.norm_squared()
    outcomes = []
    for counts in sorted(branches, reverse=True):
        branch = QuantumState(rest_registry, branches[counts], state.eps)
        weight = branch.norm_squared()
        if total == 0.0 or weight / total <= ZERO_PROBABILITY:
            continue
        outcomes.append(
            Outcome(DetectorPattern(detectors, counts), weight / total, branch.scaled(1.0 / math.sqrt(weight)))
        )
    return OutcomeDistribution(detectors, tuple(outcomes))


def sample_outcome(
    state: QuantumState, detector_modes: Sequence[str], rng: np.random.Generator
) -> tuple[DetectorPattern, QuantumState]:
    """Draw one detector pattern with its exact probability; consumes one uniform from ``rng``."""
    outcome = outcome_distribution(state, detector_modes).sample(rng)
    return outcome.pattern, outcome.conditional


def shot_rng(seed: int, shot: int) -> np.random.Generator:
    """Independent stream for one shot, derived only from (seed, shot index)."""
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, int(shot)])


_PAIR_OUTCOMES = {
    (1, 0): BellOutcome.PSI_PLUS,
    (0, 1): BellOutcome.PSI_MINUS,
    (0, 0): BellOutcome.PHI_AMBIGUOUS,
    (2, 0): BellOutcome.PHI_AMBIGUOUS,
    (0, 2): BellOutcome.PHI_AMBIGUOUS,
}


def classify_pair(counts: Sequence[int]) -> BellOutcome:
    """Bell outcome for the (port 1, port 2) counts behind one calibrated 50/50 splitter.

    Raises:
        ConventionViolation: for (1, 1) or any count above two. Neither can
            follow the calibrated splitter when the pair holds at most one
            photon per input mode.
    """
    key = tuple(int(c) for c in counts)
    try:
        return _PAIR_OUTCOMES[key]
    except KeyError:
        raise ConventionViolation(
            f"pattern {key} cannot follow a calibrated Bell beam splitter; check the splitter convention"
        ) from None


def classify_pattern(
    pattern: DetectorPattern, detector_pairs: Sequence[tuple[str, str]]
) -> tuple[BellOutcome, ...]:
    return tuple(classify_pair((pattern[d1], pattern[d2])) for d1, d2 in detector_pairs)


def distribution_rows(
    distribution: OutcomeDistribution, detector_pairs: Sequence[tuple[str, str]]
) -> list[dict]:
    """Export rows ``{pattern, probability, bell_labels, parity}`` for serialization."""
    rows = []
    for o in distribution:
        labels = classify_pattern(o.pattern, detector_pairs)
        parity: Parity = psi_minus_parity(labels)
        rows.append(
            {
                "pattern": o.pattern.as_dict(),
                "probability": o.probability,
                "bell_labels": [str(lab) for lab in labels],
                "parity": None if parity is Parity.INAPPLICABLE else str(parity),
            }
        )
    return rows
