"""Occupation-number Bell states and Bell-product decompositions."""

from __future__ import annotations

import enum
import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import ConfigurationError
from .fock import ModeRegistry, Occupation, QuantumState, reorder, tensor

SQRT1_2 = 1.0 / math.sqrt(2.0)


class BellLabel(enum.Enum):
    PHI_PLUS = "Phi+"
    PHI_MINUS = "Phi-"
    PSI_PLUS = "Psi+"
    PSI_MINUS = "Psi-"

    def __str__(self) -> str:
        return self.value

    @property
    def is_phi(self) -> bool:
        return self in (BellLabel.PHI_PLUS, BellLabel.PHI_MINUS)


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    INAPPLICABLE = "inapplicable"

    def __str__(self) -> str:
        return self.value


# Bell-state components: label -> [(counts on (x, y), amplitude)]
_BELL_TERMS: dict[BellLabel, tuple[tuple[tuple[int, int], float], ...]] = {
    BellLabel.PHI_PLUS: (((1, 1), SQRT1_2), ((0, 0), SQRT1_2)),
    BellLabel.PHI_MINUS: (((1, 1), SQRT1_2), ((0, 0), -SQRT1_2)),
    BellLabel.PSI_PLUS: (((1, 0), SQRT1_2), ((0, 1), SQRT1_2)),
    BellLabel.PSI_MINUS: (((1, 0), SQRT1_2), ((0, 1), -SQRT1_2)),
}

# inverse: basis pair -> [(label, <label|pair>)]; all Bell amplitudes are real
_PAIR_IN_BELL: dict[tuple[int, int], list[tuple[BellLabel, float]]] = defaultdict(list)
for _label, _terms in _BELL_TERMS.items():
    for _counts, _amp in _terms:
        _PAIR_IN_BELL[_counts].append((_label, _amp))


def bell_state(registry: ModeRegistry, pair: Sequence[str], label: BellLabel) -> QuantumState:
    """``Phi(+/-) = (|1,1> +/- |0,0>)/sqrt 2``, ``Psi(+/-) = (|1,0> +/- |0,1>)/sqrt 2`` on ``pair``.

    Modes of ``registry`` outside the pair are left empty. Phi states are
    not photon-number eigenstates.
    """
    ix, iy = registry.indices(pair)
    if ix == iy:
        raise ConfigurationError("a Bell pair needs two distinct modes")
    terms = []
    for (cx, cy), amp in _BELL_TERMS[label]:
        counts = [0] * len(registry)
        counts[ix], counts[iy] = cx, cy
        terms.append((counts, amp))
    return QuantumState(registry, terms)


def bell_product_state(pairs: Sequence[tuple[str, str]], labels: Sequence[BellLabel]) -> QuantumState:
    """Product of Bell states, laid out pair by pair."""
    names = tuple(m for pair in pairs for m in pair)
    registry = ModeRegistry(names)
    terms = []
    for combo in itertools.product(*(_BELL_TERMS[lab] for lab in labels)):
        counts: list[int] = []
        amp = 1.0
        for pc, a in combo:
            counts.extend(pc)
            amp *= a
        terms.append((counts, amp))
    return QuantumState(registry, terms)


@dataclass(frozen=True)
class BellProductCoefficients:
    """Expansion ``sum_labels |labels> (x) residual[labels] + overflow``.

    Each residual lives on :attr:`residual_registry` and carries its
    expansion coefficient (it is not normalized). Terms with two or more
    photons in a measured pair fall outside the Bell basis and are kept
    untouched in :attr:`overflow`, on the original registry.
    """

    pairs: tuple[tuple[str, str], ...]
    registry: ModeRegistry
    residual_registry: ModeRegistry
    entries: Mapping[tuple[BellLabel, ...], QuantumState]
    overflow: QuantumState

    def weight(self, labels: Sequence[BellLabel]) -> float:
        entry = self.entries.get(tuple(labels))
        return 0.0 if entry is None else entry.norm_squared()

    def total_weight(self) -> float:
        return math.fsum(e.norm_squared() for e in self.entries.values())

    def reconstruct(self) -> QuantumState:
        """Re-expand into the occupation basis on the original registry."""
        acc: dict[Occupation, complex] = defaultdict(complex)
        for labels, residual in self.entries.items():
            product = tensor(bell_product_state(self.pairs, labels), residual)
            for k, a in reorder(product, self.registry.names):
                acc[k] += a
        for k, a in self.overflow:
            acc[k] += a
        return QuantumState(self.registry, acc)


def bell_decompose(state: QuantumState, pairs: Iterable[Sequence[str]]) -> BellProductCoefficients:
    """Expand ``state`` in products of Bell states over disjoint mode ``pairs``."""
    pairs = tuple((str(p[0]), str(p[1])) for p in pairs)
    flat = [m for pair in pairs for m in pair]
    if len(set(flat)) != len(flat):
        raise ConfigurationError(f"Bell pairs overlap: {pairs}")
    idx = [tuple(state.registry.indices(p)) for p in pairs]
    taken = set(i for p in idx for i in p)
    rest = [i for i in range(len(state.registry)) if i not in taken]
    residual_registry = ModeRegistry(tuple(state.modes[i] for i in rest))

    acc: dict[tuple[BellLabel, ...], dict[Occupation, complex]] = defaultdict(lambda: defaultdict(complex))
    overflow = []
    for counts, amp in state:
        local = [(counts[ix], counts[iy]) for ix, iy in idx]
        if any(cx > 1 or cy > 1 for cx, cy in local):
            overflow.append((counts, amp))
            continue
        residual = tuple(counts[i] for i in rest)
        for combo in itertools.product(*(_PAIR_IN_BELL[pc] for pc in local)):
            coeff = amp
            for _, c in combo:
                coeff *= c
            acc[tuple(lab for lab, _ in combo)][residual] += coeff

    entries = {}
    for labels in sorted(acc, key=lambda ls: [lab.value for lab in ls]):
        entry = QuantumState(residual_registry, acc[labels], state.eps)
        if not entry.is_empty:
            entries[labels] = entry
    return BellProductCoefficients(
        pairs=pairs,
        registry=state.registry,
        residual_registry=residual_registry,
        entries=entries,
        overflow=QuantumState(state.registry, overflow, state.eps),
    )


def psi_minus_parity(labels: Iterable[object]) -> Parity:
    """Even/odd count of Psi- outcomes; inapplicable if any outcome is Phi-type.

    Accepts :class:`BellLabel` values or detector-level outcomes; anything
    whose ``value`` starts with ``Phi`` counts as Phi-type.
    """
    minus = 0
    for lab in labels:
        value = getattr(lab, "value", lab)
        if str(value).startswith("Phi"):
            return Parity.INAPPLICABLE
        if value == BellLabel.PSI_MINUS.value:
            minus += 1
    return Parity.ODD if minus % 2 else Parity.EVEN
