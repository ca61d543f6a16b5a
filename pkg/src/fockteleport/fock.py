"""Sparse multi-mode Fock-space states.

A state is a map from occupation vectors (one photon count per named mode)
to complex amplitudes. Only nonzero amplitudes are stored, which keeps the
dual-rail states used here down to a handful of terms even over 14+ modes.
"""

from __future__ import annotations

import cmath
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ConfigurationError, InvalidStateError

EPS = 1e-12
NORM_TOL = 1e-9

Occupation = tuple[int, ...]


@dataclass(frozen=True)
class ModeRegistry:
    """Ordered, uniquely named optical modes.

    The order fixes the layout of every occupation vector built on the
    registry. An empty registry only arises as the remainder after measuring
    every mode of a state.
    """

    names: tuple[str, ...]
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        for name in names:
            if not isinstance(name, str) or not name:
                raise ConfigurationError(f"mode names must be non-empty strings, got {name!r}")
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ConfigurationError(f"duplicate mode names: {dupes}")
        object.__setattr__(self, "_index", MappingProxyType({n: i for i, n in enumerate(names)}))

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ConfigurationError(f"unknown mode {name!r}") from None

    def indices(self, names: Iterable[str]) -> list[int]:
        return [self.index(n) for n in names]

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._index


def registry_create(names: Sequence[str]) -> ModeRegistry:
    """Build a registry from a non-empty list of distinct mode names."""
    if len(names) == 0:
        raise ConfigurationError("a mode registry needs at least one mode")
    return ModeRegistry(tuple(names))


class QuantumState:
    """Immutable sparse pure state over a :class:`ModeRegistry`.

    Use :func:`state_from_terms` to build states from user data; the
    constructor itself only merges, validates shape and prunes.
    """

    __slots__ = ("registry", "eps", "_terms")

    def __init__(
        self,
        registry: ModeRegistry,
        terms: Iterable[tuple[Sequence[int], complex]] | Mapping[Sequence[int], complex],
        eps: float = EPS,
    ) -> None:
        items = terms.items() if isinstance(terms, Mapping) else terms
        width = len(registry)
        merged: dict[Occupation, complex] = defaultdict(complex)
        for counts, amp in items:
            key = tuple(int(c) for c in counts)
            if len(key) != width:
                raise InvalidStateError(
                    f"occupation vector {key} has length {len(key)}, registry has {width} modes"
                )
            if any(c < 0 for c in key):
                raise InvalidStateError(f"negative photon count in {key}")
            amp = complex(amp)
            if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
                raise InvalidStateError(f"non-finite amplitude {amp} for {key}")
            merged[key] += amp
        cutoff = eps * eps
        self.registry = registry
        self.eps = eps
        self._terms = MappingProxyType(
            {k: a for k, a in merged.items() if (a.real * a.real + a.imag * a.imag) >= cutoff}
        )

    @property
    def terms(self) -> Mapping[Occupation, complex]:
        return self._terms

    @property
    def modes(self) -> tuple[str, ...]:
        return self.registry.names

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Occupation, complex]]:
        return iter(self._terms.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuantumState):
            return NotImplemented
        return self.registry == other.registry and dict(self._terms) == dict(other._terms)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        body = " + ".join(f"({a:.6g})|{','.join(map(str, k))}>" for k, a in self.sorted_terms())
        return f"QuantumState[{','.join(self.modes)}]({body or '0'})"

    def sorted_terms(self) -> list[tuple[Occupation, complex]]:
        return sorted(self._terms.items(), reverse=True)

    def amplitude(self, counts: Sequence[int]) -> complex:
        return self._terms.get(tuple(counts), 0j)

    @property
    def is_empty(self) -> bool:
        return not self._terms

    @property
    def photon_numbers(self) -> set[int]:
        return {sum(k) for k in self._terms}

    @property
    def photon_number(self) -> int | None:
        """Total photon number, or None if the state is not a number eigenstate."""
        numbers = self.photon_numbers
        return numbers.pop() if len(numbers) == 1 else None

    def norm_squared(self) -> float:
        return math.fsum(a.real * a.real + a.imag * a.imag for a in self._terms.values())

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def scaled(self, factor: complex) -> QuantumState:
        return QuantumState(self.registry, ((k, a * factor) for k, a in self._terms.items()), self.eps)

    def normalize(self) -> QuantumState:
        n = self.norm()
        if n == 0.0:
            raise InvalidStateError("cannot normalize a zero-norm state")
        return self.scaled(1.0 / n)

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def allclose(self, other: QuantumState, atol: float = 1e-12) -> bool:
        """Termwise comparison of amplitudes on identical registries."""
        if self.registry != other.registry:
            return False
        keys = set(self._terms) | set(other._terms)
        return all(abs(self.amplitude(k) - other.amplitude(k)) <= atol for k in keys)


def state_from_terms(
    registry: ModeRegistry,
    terms: Iterable[tuple[Sequence[int], complex]] | Mapping[Sequence[int], complex],
    normalize: bool = False,
    eps: float = EPS,
) -> QuantumState:
    """Build a photon-number eigenstate from (occupation, amplitude) pairs.

    Duplicate occupation vectors are merged by adding amplitudes. Unless
    ``normalize`` is set, the squared amplitudes must already sum to one.

    Raises:
        InvalidStateError: mixed total photon numbers, zero norm, or a
            caller-normalized input that is off by more than 1e-9.
    """
    state = QuantumState(registry, terms, eps)
    if state.is_empty:
        raise InvalidStateError("state has zero norm")
    if state.photon_number is None:
        raise InvalidStateError(
            f"terms mix total photon numbers {sorted(state.photon_numbers)}"
        )
    if normalize:
        return state.normalize()
    if abs(state.norm_squared() - 1.0) > NORM_TOL:
        raise InvalidStateError(f"state is not normalized (norm^2 = {state.norm_squared()!r})")
    return state


def basis_state(registry: ModeRegistry, counts: Sequence[int]) -> QuantumState:
    return QuantumState(registry, [(counts, 1.0)])


def tensor(s1: QuantumState, s2: QuantumState) -> QuantumState:
    """Product state on the concatenated registry ``s1.modes + s2.modes``."""
    overlap = set(s1.modes) & set(s2.modes)
    if overlap:
        raise ConfigurationError(f"tensor factors share modes {sorted(overlap)}")
    registry = ModeRegistry(s1.modes + s2.modes)
    terms = [(k1 + k2, a1 * a2) for k1, a1 in s1 for k2, a2 in s2]
    return QuantumState(registry, terms, min(s1.eps, s2.eps))


def reorder(state: QuantumState, names: Sequence[str]) -> QuantumState:
    """Same state with its modes laid out in the order ``names``."""
    names = tuple(names)
    if sorted(names) != sorted(state.modes):
        raise ConfigurationError(f"{names} is not a permutation of {state.modes}")
    if names == state.modes:
        return state
    perm = state.registry.indices(names)
    return QuantumState(
        ModeRegistry(names), ((tuple(k[i] for i in perm), a) for k, a in state), state.eps
    )


def _require_same_registry(s1: QuantumState, s2: QuantumState) -> None:
    if s1.registry != s2.registry:
        raise ConfigurationError(f"registry mismatch: {s1.modes} vs {s2.modes}")


def inner_product(s1: QuantumState, s2: QuantumState) -> complex:
    """<s1|s2>, conjugate-linear in ``s1``."""
    _require_same_registry(s1, s2)
    small, large = (s1.terms, s2.terms) if len(s1) <= len(s2) else (s2.terms, s1.terms)
    acc = 0j
    for k in small:
        if k in large:
            acc += s1.terms[k].conjugate() * s2.terms[k]
    return acc


def fidelity(s1: QuantumState, s2: QuantumState) -> float:
    """|<s1|s2>|^2 for two normalized states on the same registry."""
    for s in (s1, s2):
        if not s.is_normalized():
            raise InvalidStateError(f"fidelity needs normalized states (norm = {s.norm()!r})")
    overlap = inner_product(s1, s2)
    return min(1.0, overlap.real * overlap.real + overlap.imag * overlap.imag)


def split_on(
    state: QuantumState, measured_modes: Sequence[str]
) -> tuple[ModeRegistry, dict[Occupation, dict[Occupation, complex]]]:
    """Group terms by the counts on ``measured_modes``.

    Returns the registry of the unmeasured modes and, for every measured
    count pattern present, the unnormalized branch on the remaining modes.
    """
    measured = state.registry.indices(measured_modes)
    if len(set(measured)) != len(measured):
        raise ConfigurationError(f"measured modes repeat: {list(measured_modes)}")
    taken = set(measured)
    rest = [i for i in range(len(state.registry)) if i not in taken]
    rest_registry = ModeRegistry(tuple(state.modes[i] for i in rest))
    branches: dict[Occupation, dict[Occupation, complex]] = defaultdict(dict)
    for k, a in state:
        branches[tuple(k[i] for i in measured)][tuple(k[i] for i in rest)] = a
    return rest_registry, dict(branches)


def project_counts(
    state: QuantumState, measured_modes: Sequence[str], counts: Sequence[int]
) -> tuple[float, QuantumState | None]:
    """Project onto photon counts on ``measured_modes``.

    Returns the outcome probability (relative to the state's norm squared)
    and the renormalized state on the remaining modes. A zero-probability
    outcome returns ``None`` in place of the conditional state.
    """
    counts = tuple(int(c) for c in counts)
    if len(counts) != len(measured_modes):
        raise ConfigurationError("one count is needed per measured mode")
    if any(c < 0 for c in counts):
        raise ConfigurationError(f"negative detector count in {counts}")
    rest_registry, branches = split_on(state, measured_modes)
    branch = branches.get(counts)
    total = state.norm_squared()
    if not branch or total == 0.0:
        return 0.0, None
    conditional = QuantumState(rest_registry, branch, state.eps)
    weight = conditional.norm_squared()
    if weight == 0.0:
        return 0.0, None
    return weight / total, conditional.scaled(1.0 / math.sqrt(weight))


def global_phase(state: QuantumState, theta: float) -> QuantumState:
    return state.scaled(cmath.exp(1j * theta))


def state_to_record(state: QuantumState) -> dict:
    """Plain-data form: mode names plus a list of ``{counts, re, im}`` terms."""
    return {
        "modes": list(state.modes),
        "terms": [
            {"counts": list(k), "re": a.real, "im": a.imag} for k, a in state.sorted_terms()
        ],
    }


def state_from_record(record: Mapping) -> QuantumState:
    registry = ModeRegistry(tuple(record["modes"]))
    terms = [(t["counts"], complex(float(t["re"]), float(t["im"]))) for t in record["terms"]]
    return QuantumState(registry, terms)


def dumps(state: QuantumState) -> str:
    # json writes floats with repr(), which round-trips doubles exactly
    return json.dumps(state_to_record(state))


def loads(text: str) -> QuantumState:
    return state_from_record(json.loads(text))
