"""Passive linear-optical elements acting on sparse Fock states."""

from __future__ import annotations

import cmath
import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

import numpy as np

from .errors import ConfigurationError
from .fock import ModeRegistry, QuantumState, reorder

SQRT1_2 = 1.0 / math.sqrt(2.0)
UNITARY_TOL = 1e-12


@dataclass(frozen=True)
class BeamSplitterSpec:
    """Two-mode beam splitter ``[[t, r], [conj(r), -conj(t)]]``.

    Column ``j`` of :attr:`matrix` says where a photon entering port ``j``
    goes: ``a_in^dag -> t a_out^dag + conj(r) b_out^dag`` and
    ``b_in^dag -> r a_out^dag - conj(t) b_out^dag``. The default is the
    50/50 Hadamard splitter, which routes Psi+ entirely to ``mode_a`` and
    Psi- entirely to ``mode_b``.
    """

    mode_a: str
    mode_b: str
    t: complex = SQRT1_2
    r: complex = SQRT1_2

    def __post_init__(self) -> None:
        if self.mode_a == self.mode_b:
            raise ConfigurationError("beam splitter needs two distinct modes")
        m = self.matrix
        err = np.abs(m @ m.conj().T - np.eye(2)).max()
        if not np.isfinite(err) or err > UNITARY_TOL:
            raise ConfigurationError(
                f"beam splitter matrix is not unitary (|t|^2+|r|^2 = {abs(self.t)**2 + abs(self.r)**2!r})"
            )

    @property
    def matrix(self) -> np.ndarray:
        t, r = complex(self.t), complex(self.r)
        return np.array([[t, r], [r.conjugate(), -t.conjugate()]], dtype=complex)

    def inverse(self) -> BeamSplitterSpec:
        # the adjoint keeps the same [[t, r], [r*, -t*]] form with t -> t*
        return BeamSplitterSpec(self.mode_a, self.mode_b, complex(self.t).conjugate(), self.r)


@lru_cache(maxsize=4096)
def _two_mode_expansion(
    m: int, n: int, u: tuple[complex, complex, complex, complex]
) -> tuple[tuple[int, int, complex], ...]:
    """Output terms of |m, n> through the mode matrix ``u`` (row-major)."""
    u00, u01, u10, u11 = u
    out: dict[tuple[int, int], complex] = defaultdict(complex)
    # (u00 a + u10 b)^m (u01 a + u11 b)^n, a/b the output creation operators
    for i in range(m + 1):
        ci = math.comb(m, i) * u00**i * u10 ** (m - i)
        if ci == 0:
            continue
        for j in range(n + 1):
            cj = math.comb(n, j) * u01**j * u11 ** (n - j)
            if cj == 0:
                continue
            p = i + j
            q = m + n - p
            out[(p, q)] += ci * cj * math.sqrt(math.factorial(p) * math.factorial(q))
    norm = math.sqrt(math.factorial(m) * math.factorial(n))
    return tuple((p, q, amp / norm) for (p, q), amp in out.items())


def beam_splitter_apply(state: QuantumState, spec: BeamSplitterSpec) -> QuantumState:
    """Apply ``spec`` to its two modes; outputs keep the input mode names."""
    ia = state.registry.index(spec.mode_a)
    ib = state.registry.index(spec.mode_b)
    m = spec.matrix
    key = (complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))
    out: dict[tuple[int, ...], complex] = defaultdict(complex)
    for counts, amp in state:
        base = list(counts)
        for p, q, c in _two_mode_expansion(counts[ia], counts[ib], key):
            base[ia], base[ib] = p, q
            out[tuple(base)] += amp * c
    return QuantumState(state.registry, out, state.eps)


def phase_shift(state: QuantumState, mode: str, phi: float) -> QuantumState:
    """Multiply every term by ``exp(i * phi * n)``, ``n`` the photon count in ``mode``."""
    i = state.registry.index(mode)
    if phi == 0.0:
        return state
    return QuantumState(
        state.registry, ((k, a * cmath.exp(1j * phi * k[i])) for k, a in state), state.eps
    )


def relabel_modes(state: QuantumState, mapping: Mapping[str, str]) -> QuantumState:
    """Rename modes according to ``mapping``.

    When the mapping permutes existing names (e.g. a swap) the registry
    keeps its order and the photon counts move between entries. Mapping onto
    fresh names renames those modes in place.
    """
    for src in mapping:
        state.registry.index(src)
    targets = list(mapping.values())
    if len(set(targets)) != len(targets):
        raise ConfigurationError(f"relabeling is not injective: {dict(mapping)}")
    renamed = tuple(mapping.get(n, n) for n in state.modes)
    if len(set(renamed)) != len(renamed):
        raise ConfigurationError(f"relabeling collides with an unmapped mode: {dict(mapping)}")
    moved = QuantumState(ModeRegistry(renamed), state.terms, state.eps)
    if set(renamed) == set(state.modes):
        return reorder(moved, state.modes)
    return moved


def swap_modes(state: QuantumState, x: str, y: str) -> QuantumState:
    return relabel_modes(state, {x: y, y: x})
