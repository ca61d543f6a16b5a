"""Sparse Fock-space simulation of total teleportation of dual-rail entangled photon states."""

from .bell import BellLabel, BellProductCoefficients, Parity, bell_decompose, bell_state, psi_minus_parity
from .errors import (
    ConfigurationError,
    ConventionViolation,
    FockTeleportError,
    InvalidStateError,
    InvariantViolation,
)
from .fock import (
    ModeRegistry,
    QuantumState,
    fidelity,
    inner_product,
    project_counts,
    registry_create,
    state_from_terms,
    tensor,
)
from .measurement import (
    BellOutcome,
    DetectorPattern,
    OutcomeDistribution,
    classify_pair,
    outcome_distribution,
    sample_outcome,
)
from .optics import BeamSplitterSpec, beam_splitter_apply, phase_shift, relabel_modes
from .protocol import (
    ProtocolConfig,
    RunReport,
    alice_interfere,
    assemble,
    bob_correct,
    run,
    run_event_ready,
    run_exact,
    run_sampled,
    run_sequential_swap,
)
from .sources import (
    InputSpec,
    channel_state,
    event_ready_product,
    input_entangled_state,
    input_state_via_beam_splitter,
    pdc_pair_state,
)

__version__ = "0.1.0"

__all__ = [
    "BellLabel",
    "BellProductCoefficients",
    "Parity",
    "bell_decompose",
    "bell_state",
    "psi_minus_parity",
    "ConfigurationError",
    "ConventionViolation",
    "FockTeleportError",
    "InvalidStateError",
    "InvariantViolation",
    "ModeRegistry",
    "QuantumState",
    "fidelity",
    "inner_product",
    "project_counts",
    "registry_create",
    "state_from_terms",
    "tensor",
    "BellOutcome",
    "DetectorPattern",
    "OutcomeDistribution",
    "classify_pair",
    "outcome_distribution",
    "sample_outcome",
    "BeamSplitterSpec",
    "beam_splitter_apply",
    "phase_shift",
    "relabel_modes",
    "ProtocolConfig",
    "RunReport",
    "alice_interfere",
    "assemble",
    "bob_correct",
    "run",
    "run_event_ready",
    "run_exact",
    "run_sampled",
    "run_sequential_swap",
    "InputSpec",
    "channel_state",
    "event_ready_product",
    "input_entangled_state",
    "input_state_via_beam_splitter",
    "pdc_pair_state",
]
