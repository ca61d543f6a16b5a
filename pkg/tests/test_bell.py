import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fockteleport.bell import BellLabel, Parity, bell_decompose, bell_state, psi_minus_parity
from fockteleport.errors import ConfigurationError
from fockteleport.fock import ModeRegistry, QuantumState, fidelity, inner_product, registry_create, tensor
from fockteleport.sources import InputSpec, assemble_channel, assemble_input
from oracles import DENSE_BELL, ket

S = 1 / math.sqrt(2)
PP, PM, QP, QM = BellLabel.PHI_PLUS, BellLabel.PHI_MINUS, BellLabel.PSI_PLUS, BellLabel.PSI_MINUS
XY = registry_create(["x", "y"])


def test_bell_state_definitions():
    assert dict(bell_state(XY, ("x", "y"), QP).terms) == pytest.approx({(1, 0): S, (0, 1): S})
    assert dict(bell_state(XY, ("x", "y"), PM).terms) == pytest.approx({(1, 1): S, (0, 0): -S})


def test_bell_states_orthonormal():
    for a, b in itertools.product(BellLabel, repeat=2):
        ip = inner_product(bell_state(XY, ("x", "y"), a), bell_state(XY, ("x", "y"), b))
        assert ip == pytest.approx(1.0 if a is b else 0.0, abs=1e-15)


def test_product_state_decomposes_to_single_unit_entry():
    reg = registry_create(["p", "q", "r", "s"])
    state = tensor(bell_state(registry_create(["p", "q"]), ("p", "q"), QM),
                   bell_state(registry_create(["r", "s"]), ("r", "s"), PP))
    dec = bell_decompose(state, [("p", "q"), ("r", "s")])
    assert list(dec.entries) == [(QM, PP)]
    (entry,) = dec.entries.values()
    assert entry.amplitude(()) == pytest.approx(1.0)
    assert dec.overflow.is_empty
    assert state.registry == reg


def test_overlapping_pairs_rejected():
    with pytest.raises(ConfigurationError):
        bell_decompose(bell_state(XY, ("x", "y"), QP), [("x", "y"), ("y", "x")])


def test_overflow_bucket_holds_bunched_terms():
    s = QuantumState(XY, {(2, 0): S, (1, 1): S})
    dec = bell_decompose(s, [("x", "y")])
    assert dict(dec.overflow.terms) == pytest.approx({(2, 0): S})
    assert dec.reconstruct().allclose(s)


# label pair -> (coefficient on |1,0>_B, coefficient on |0,1>_B) / (1/(2 sqrt2))
def expected_residuals(alpha, beta):
    return {
        (PP, PP): (alpha, beta),
        (PM, PM): (-alpha, -beta),
        (PM, PP): (alpha, -beta),
        (PP, PM): (-alpha, beta),
        (QP, QP): (beta, alpha),
        (QM, QM): (-beta, -alpha),
        (QM, QP): (beta, -alpha),
        (QP, QM): (-beta, alpha),
    }


def assembled_state(alpha, beta):
    return tensor(
        assemble_channel(1, ["A1", "A2", "B1", "B2"]),
        assemble_input(InputSpec(alpha, beta), ["a1", "a2"]),
    )


@pytest.mark.parametrize("alpha,beta", [(0.6, 0.8), (S, S), (0.28j, 0.96), (0.6 * np.exp(0.4j), -0.8j)])
def test_bell_product_expansion(alpha, beta):
    dec = bell_decompose(assembled_state(alpha, beta), [("A1", "a1"), ("A2", "a2")])
    assert dec.residual_registry.names == ("B1", "B2")
    expected = expected_residuals(alpha, beta)
    assert set(dec.entries) == set(expected)
    c = 1 / (2 * math.sqrt(2))
    for labels, (c10, c01) in expected.items():
        entry = dec.entries[labels]
        assert entry.amplitude((1, 0)) == pytest.approx(c * c10, abs=1e-12)
        assert entry.amplitude((0, 1)) == pytest.approx(c * c01, abs=1e-12)
        assert entry.norm() == pytest.approx(c, abs=1e-12)
    assert dec.overflow.is_empty
    assert dec.total_weight() == pytest.approx(1.0, abs=1e-12)


def test_expansion_against_dense_projection():
    """Independent route: project the dense 6-qubit vector onto Bell products with numpy."""
    alpha, beta = 0.6, 0.8j
    # mode order A1 A2 B1 B2 a1 a2
    vec = (
        (ket(1, 0, 1, 0) + ket(0, 1, 0, 1)) / math.sqrt(2)
    )
    vec = np.kron(vec, alpha * ket(1, 0) + beta * ket(0, 1)).reshape([2] * 6)
    # reorder axes to (A1, a1), (A2, a2), (B1, B2)
    vec = vec.transpose(0, 4, 1, 5, 2, 3).reshape(4, 4, 4)
    dec = bell_decompose(assembled_state(alpha, beta), [("A1", "a1"), ("A2", "a2")])
    for l1, l2 in itertools.product(BellLabel, repeat=2):
        residual = np.einsum("i,j,ijk->k", DENSE_BELL[l1.value].conj(), DENSE_BELL[l2.value].conj(), vec)
        entry = dec.entries.get((l1, l2))
        got = np.zeros(4, dtype=complex)
        if entry is not None:
            for (b1, b2), a in entry:
                got[2 * b1 + b2] = a
        assert np.allclose(got, residual, atol=1e-12)


def test_reconstruction_identity():
    state = assembled_state(0.6, 0.8j)
    dec = bell_decompose(state, [("A1", "a1"), ("A2", "a2")])
    assert dec.reconstruct().allclose(state, atol=1e-12)


@pytest.mark.parametrize("n", [2, 3])
def test_multi_particle_parity_grouping(n, amplitude_samples):
    for alpha, beta in amplitude_samples[:5]:
        spec = InputSpec(alpha, beta, n)
        state = tensor(assemble_channel(n), assemble_input(spec))
        pairs = [("ch.0.1", "in.0.1"), ("ch.0.2", "in.0.2")] + [(f"in.{k}.1", f"in.{k}.2") for k in range(1, n)]
        dec = bell_decompose(state, pairs)
        bob = ModeRegistry(tuple(f"ch.{k}.{j}" for k in range(1, n + 1) for j in (1, 2)))
        plus = QuantumState(bob, {tuple([1, 0] * n): beta, tuple([0, 1] * n): alpha})
        minus = QuantumState(bob, {tuple([1, 0] * n): beta, tuple([0, 1] * n): -alpha})
        psi_entries = [ls for ls in dec.entries if not any(lab.is_phi for lab in ls)]
        assert len(psi_entries) == 2 ** (n + 1)
        for labels in psi_entries:
            residual = dec.entries[labels].normalize()
            want = plus if psi_minus_parity(labels) is Parity.EVEN else minus
            assert fidelity(residual, want) == pytest.approx(1.0, abs=1e-12)
        assert dec.reconstruct().allclose(state, atol=1e-12)


@pytest.mark.parametrize(
    "labels,parity",
    [
        ([QP, QP], Parity.EVEN),
        ([QM, QP], Parity.ODD),
        ([QM, QM], Parity.EVEN),
        ([PP, QM], Parity.INAPPLICABLE),
        ([QM, QM, QM], Parity.ODD),
    ],
)
def test_psi_minus_parity(labels, parity):
    assert psi_minus_parity(labels) is parity


@st.composite
def zero_one_states(draw):
    m = draw(st.integers(2, 5))
    patterns = list(itertools.product((0, 1), repeat=m))
    chosen = draw(st.lists(st.sampled_from(patterns), min_size=1, max_size=8, unique=True))
    amps = draw(
        st.lists(
            st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False),
            min_size=len(chosen),
            max_size=len(chosen),
        )
    )
    s = QuantumState(ModeRegistry(tuple(f"m{i}" for i in range(m))), list(zip(chosen, amps)))
    return s if s.norm() > 1e-3 else QuantumState(s.registry, [(chosen[0], 1.0)])


@settings(max_examples=80, deadline=None)
@given(zero_one_states())
def test_bell_completeness_on_zero_one_sector(state):
    pairs = [(state.modes[i], state.modes[i + 1]) for i in range(0, len(state.modes) - 1, 2)]
    dec = bell_decompose(state, pairs)
    assert dec.overflow.is_empty
    assert dec.total_weight() == pytest.approx(state.norm_squared(), abs=1e-12)
    assert dec.reconstruct().allclose(state, atol=1e-12)
