import math

import numpy as np
import pytest

from fockteleport.errors import ConfigurationError, InvalidStateError
from fockteleport.fock import fidelity, project_counts, registry_create
from fockteleport.sources import (
    InputSpec,
    channel_rails,
    channel_state,
    event_ready_product,
    input_entangled_state,
    input_rails,
    input_state_via_beam_splitter,
    pdc_pair_state,
)

S = 1 / math.sqrt(2)


def test_input_spec_validation():
    with pytest.raises(InvalidStateError):
        InputSpec(0.6, 0.6)
    with pytest.raises(ConfigurationError):
        InputSpec(1, 0, n=0)


def test_symmetric_single_particle_input():
    reg = registry_create(["a1", "a2"])
    s = input_entangled_state(reg, InputSpec(S, S), ["a1", "a2"])
    assert dict(s.terms) == pytest.approx({(1, 0): S, (0, 1): S})


def test_boundary_input_is_basis_state():
    reg = registry_create(["a1", "a2"])
    s = input_entangled_state(reg, InputSpec(1, 0), ["a1", "a2"])
    assert dict(s.terms) == {(1, 0): 1}


def test_two_particle_input():
    reg = registry_create(["a1", "a2", "b1", "b2"])
    alpha, beta = 0.6, 0.8j
    s = input_entangled_state(reg, InputSpec(alpha, beta, 2), ["a1", "a2", "b1", "b2"])
    assert dict(s.terms) == {(1, 0, 1, 0): alpha, (0, 1, 0, 1): beta}
    assert s.photon_number == 2


def test_input_wrong_rail_count():
    reg = registry_create(["a1", "a2", "b1", "b2"])
    with pytest.raises(ConfigurationError):
        input_entangled_state(reg, InputSpec(1, 0, 2), ["a1", "a2"])


def test_input_leaves_other_modes_empty():
    reg = registry_create(["A1", "a1", "a2"])
    s = input_entangled_state(reg, InputSpec(0.6, 0.8), ["a1", "a2"])
    assert dict(s.terms) == {(0, 1, 0): 0.6, (0, 0, 1): 0.8}


@pytest.mark.parametrize(
    "r,t,expected",
    [
        (1.0, 0.0, {(1, 0): 1.0}),
        (S, S, {(1, 0): S, (0, 1): S}),
        (0.6, 0.8, {(1, 0): 0.6, (0, 1): 0.8}),
    ],
)
def test_beam_splitter_preparation(r, t, expected):
    s = input_state_via_beam_splitter(registry_create(["a1", "a2"]), r, t)
    assert dict(s.terms) == pytest.approx(expected, abs=1e-15)


def test_beam_splitter_preparation_rejects_unnormalized():
    with pytest.raises(InvalidStateError):
        input_state_via_beam_splitter(registry_create(["a1", "a2"]), 0.5, 0.5)


def test_beam_splitter_preparation_agrees_with_direct_over_grid():
    reg = registry_create(["a1", "a2"])
    for theta in np.linspace(0, math.pi / 2, 10):
        r, t = math.cos(theta), math.sin(theta)
        direct = input_entangled_state(reg, InputSpec(r, t), ["a1", "a2"])
        assert fidelity(input_state_via_beam_splitter(reg, r, t), direct) >= 1 - 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_channel_state_structure(n):
    rails = channel_rails(n)
    s = channel_state(registry_create(rails), n, rails)
    assert len(s) == 2
    assert all(a == pytest.approx(S) for _, a in s)
    assert s.photon_number == n + 1
    assert s.amplitude([1, 0] * (n + 1)) == pytest.approx(S)
    assert s.amplitude([0, 1] * (n + 1)) == pytest.approx(S)


def test_single_particle_channel_is_pdc_pair():
    reg = registry_create(["A1", "A2", "B1", "B2"])
    s = channel_state(reg, 1, ["A1", "A2", "B1", "B2"])
    assert s == pdc_pair_state(reg)
    assert dict(s.terms) == pytest.approx({(1, 0, 1, 0): S, (0, 1, 0, 1): S})


def test_letter_named_channels():
    reg = registry_create(["A1", "A2", "B1", "B2", "C1", "C2", "E1", "E2"])
    s = channel_state(reg, 3, list(reg))
    assert s.amplitude((1, 0, 1, 0, 1, 0, 1, 0)) == pytest.approx(S)


def test_channel_wrong_rail_count():
    with pytest.raises(ConfigurationError):
        channel_state(registry_create(channel_rails(2)), 1, channel_rails(2))


def test_canonical_rail_names():
    assert input_rails(2) == ["in.0.1", "in.0.2", "in.1.1", "in.1.2"]
    assert channel_rails(1) == ["ch.0.1", "ch.0.2", "ch.1.1", "ch.1.2"]


EVENT_REG = registry_create(["A1", "A2", "B1", "B2", "G1", "G2", "H1", "H2"])


def test_event_ready_product_terms():
    s = event_ready_product(EVENT_REG)
    assert len(s) == 4
    assert all(abs(a) == pytest.approx(0.5) for _, a in s)
    assert s.norm() == pytest.approx(1.0, abs=1e-15)
    assert s.photon_number == 4
    # (A1 G1 | B2 H2) x (A2 G2 | B1 H1)
    assert s.amplitude((1, 1, 0, 0, 1, 1, 0, 0)) == pytest.approx(0.5)
    assert s.amplitude((0, 0, 1, 1, 0, 0, 1, 1)) == pytest.approx(0.5)


def test_event_ready_first_source_marginal():
    s = event_ready_product(EVENT_REG)
    # fix the second source on its (A2, G2) branch
    p, cond = project_counts(s, ["A2", "G2", "B1", "H1"], [1, 1, 0, 0])
    assert p == pytest.approx(0.5)
    first = registry_create(["A1", "B2", "G1", "H2"])
    assert cond.modes == ("A1", "B2", "G1", "H2")
    assert dict(cond.terms) == pytest.approx({(1, 0, 1, 0): S, (0, 1, 0, 1): S})
    assert cond.registry == first


def test_event_ready_missing_modes():
    with pytest.raises(ConfigurationError):
        event_ready_product(registry_create(["A1", "A2"]))
