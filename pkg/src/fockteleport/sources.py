"""Prepared states: the unknown dual-rail input, the entangled channel, heralded pair sources.

Programmatic runs use collision-free rail names: the input's k-th particle
lives on ``in.k.1 / in.k.2`` and the channel's k-th particle on
``ch.k.1 / ch.k.2``, with ``ch.0`` the pair kept by the sender.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import ConfigurationError, InvalidStateError
from .fock import NORM_TOL, ModeRegistry, QuantumState, tensor
from .optics import BeamSplitterSpec, beam_splitter_apply

SQRT1_2 = 1.0 / math.sqrt(2.0)

# conventional letters for the channel particles at N = 1, 2, 3
CHANNEL_LETTERS = {1: "AB", 2: "ABC", 3: "ABCE"}
INPUT_LETTERS = {1: "a", 2: "ab", 3: "abc"}

EVENT_READY_ROLES = ("A1", "A2", "B1", "B2", "G1", "G2", "H1", "H2")


@dataclass(frozen=True)
class InputSpec:
    """Amplitudes of the unknown state and the number of entangled particles."""

    alpha: complex
    beta: complex
    n: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        if not isinstance(self.n, int) or self.n < 1:
            raise ConfigurationError(f"particle number must be a positive integer, got {self.n!r}")
        for v in (self.alpha, self.beta):
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise InvalidStateError(f"non-finite amplitude {v}")
        norm2 = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm2 - 1.0) > NORM_TOL:
            raise InvalidStateError(f"|alpha|^2 + |beta|^2 = {norm2!r}, expected 1")


def input_rails(n: int) -> list[str]:
    return [f"in.{k}.{j}" for k in range(n) for j in (1, 2)]


def channel_rails(n: int) -> list[str]:
    return [f"ch.{k}.{j}" for k in range(n + 1) for j in (1, 2)]


def _dual_rail_pattern(registry: ModeRegistry, rails: Sequence[str], first: bool) -> list[int]:
    counts = [0] * len(registry)
    for pos, idx in enumerate(registry.indices(rails)):
        if (pos % 2 == 0) == first:
            counts[idx] = 1
    return counts


def _check_rails(registry: ModeRegistry, rails: Sequence[str], expected: int) -> None:
    if len(rails) != expected:
        raise ConfigurationError(f"expected {expected} rail names, got {len(rails)}")
    if len(set(rails)) != len(rails):
        raise ConfigurationError(f"rail names repeat: {list(rails)}")
    registry.indices(rails)


def input_entangled_state(
    registry: ModeRegistry, spec: InputSpec, rail_names: Sequence[str]
) -> QuantumState:
    """``alpha |1,0,1,0,...> + beta |0,1,0,1,...>`` over ``2N`` rails; other modes empty."""
    _check_rails(registry, rail_names, 2 * spec.n)
    return QuantumState(
        registry,
        [
            (_dual_rail_pattern(registry, rail_names, True), spec.alpha),
            (_dual_rail_pattern(registry, rail_names, False), spec.beta),
        ],
    )


def input_state_via_beam_splitter(
    registry: ModeRegistry, r: float, t: float, rails: Sequence[str] = ("a1", "a2")
) -> QuantumState:
    """Single photon split by a beam splitter with real coefficients ``r``, ``t``.

    The photon enters through the second rail's port: the transmitted part
    (amplitude ``t``) stays on the second rail and the reflected part
    (amplitude ``r``) lands on the first, giving ``r|1,0> + t|0,1>``.
    """
    if abs(r * r + t * t - 1.0) > NORM_TOL:
        raise InvalidStateError(f"r^2 + t^2 = {r * r + t * t!r}, expected 1")
    _check_rails(registry, rails, 2)
    counts = [0] * len(registry)
    counts[registry.index(rails[1])] = 1
    photon = QuantumState(registry, [(counts, 1.0)])
    return beam_splitter_apply(photon, BeamSplitterSpec(rails[1], rails[0], t=t, r=r))


def channel_state(registry: ModeRegistry, n: int, rail_names: Sequence[str]) -> QuantumState:
    """(N+1)-particle dual-rail GHZ channel ``(|1,0>^(N+1) + |0,1>^(N+1)) / sqrt 2``."""
    if n < 1:
        raise ConfigurationError(f"particle number must be positive, got {n}")
    _check_rails(registry, rail_names, 2 * (n + 1))
    return QuantumState(
        registry,
        [
            (_dual_rail_pattern(registry, rail_names, True), SQRT1_2),
            (_dual_rail_pattern(registry, rail_names, False), SQRT1_2),
        ],
    )


def pdc_pair_state(
    registry: ModeRegistry, rail_names: Sequence[str] = ("A1", "A2", "B1", "B2")
) -> QuantumState:
    """Down-conversion photon pair leaving through (A1, B1) or (A2, B2)."""
    return channel_state(registry, 1, rail_names)


def single_rail_pair(registry: ModeRegistry, mode_a: str, mode_b: str) -> QuantumState:
    """One photon shared between two modes: ``(|1,0> + |0,1>) / sqrt 2``."""
    ia, ib = registry.index(mode_a), registry.index(mode_b)
    one_a = [0] * len(registry)
    one_a[ia] = 1
    one_b = [0] * len(registry)
    one_b[ib] = 1
    return QuantumState(registry, [(one_a, SQRT1_2), (one_b, SQRT1_2)])


def event_ready_product(
    registry: ModeRegistry, names: Mapping[str, str] | None = None
) -> QuantumState:
    """Two independent pair sources feeding the heralding station.

    The first source emits into (A1, G1) or (B2, H2), the second into
    (A2, G2) or (B1, H1). ``names`` maps the roles A1..H2 onto registry
    modes; by default the roles are the mode names.
    """
    names = dict(names or {})
    role = {r: names.get(r, r) for r in EVENT_READY_ROLES}
    missing = [m for m in role.values() if m not in registry]
    if missing:
        raise ConfigurationError(f"registry lacks modes {missing}")

    def occupied(*roles: str) -> list[int]:
        counts = [0] * len(registry)
        for r in roles:
            counts[registry.index(role[r])] = 1
        return counts

    first = [(("A1", "G1"), SQRT1_2), (("B2", "H2"), SQRT1_2)]
    second = [(("A2", "G2"), SQRT1_2), (("B1", "H1"), SQRT1_2)]
    return QuantumState(
        registry, [(occupied(*r1, *r2), a1 * a2) for r1, a1 in first for r2, a2 in second]
    )


def assemble_input(spec: InputSpec, rails: Sequence[str] | None = None) -> QuantumState:
    rails = list(rails or input_rails(spec.n))
    return input_entangled_state(ModeRegistry(tuple(rails)), spec, rails)


def assemble_channel(n: int, rails: Sequence[str] | None = None) -> QuantumState:
    rails = list(rails or channel_rails(n))
    return channel_state(ModeRegistry(tuple(rails)), n, rails)


def total_input(spec: InputSpec) -> QuantumState:
    """Channel state times unknown input on the canonical registry."""
    return tensor(assemble_channel(spec.n), assemble_input(spec))
