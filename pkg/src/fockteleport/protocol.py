"""End-to-end teleportation runs: exact enumeration, Monte Carlo, heralded source, sequential swap.

Mode layout (canonical names):

* ``ch.k.1 / ch.k.2``: channel particle ``k``; ``ch.0`` goes to Alice, the
  rest to Bob.
* ``in.k.1 / in.k.2``: particle ``k`` of the unknown input.
* ``det.k.1 / det.k.2``: Psi+ and Psi- output ports of Alice's k-th Bell
  splitter. Pair 0 mixes (ch.0.1, in.0.1), pair 1 mixes (ch.0.2, in.0.2)
  and pair k >= 2 mixes the input's own rails (in.{k-1}.1, in.{k-1}.2).
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .bell import Parity, psi_minus_parity
from .errors import ConfigurationError, InvariantViolation
from .fock import ModeRegistry, QuantumState, fidelity, reorder, tensor
from .measurement import (
    BellOutcome,
    DetectorPattern,
    Outcome,
    OutcomeDistribution,
    classify_pair,
    classify_pattern,
    draw_index,
    outcome_distribution,
    shot_rng,
)
from .optics import BeamSplitterSpec, beam_splitter_apply, phase_shift, relabel_modes
from .sources import (
    InputSpec,
    assemble_input,
    channel_rails,
    channel_state,
    event_ready_product,
    input_entangled_state,
    input_rails,
    single_rail_pair,
    total_input,
)

log = logging.getLogger(__name__)

SQRT1_2 = 1.0 / math.sqrt(2.0)
EXACT = "exact"
SAMPLE = "sample"
SEQUENTIAL_SWAP = "sequential_swap"

HERALD_MODES = ("her.G.1", "her.G.2", "her.H.1", "her.H.2")
HERALD_DETECTORS = ("det.G.1", "det.G.2", "det.H.1", "det.H.2")
# one photon at D_G1 and D_H1, or one at D_G2 and D_H2
HERALD_ACCEPT = ((1, 0, 1, 0), (0, 1, 0, 1))
EVENT_READY_NAMES = {
    "A1": "ch.0.1",
    "A2": "ch.0.2",
    "B1": "ch.1.1",
    "B2": "ch.1.2",
    "G1": "her.G.1",
    "G2": "her.G.2",
    "H1": "her.H.1",
    "H2": "her.H.2",
}


@dataclass(frozen=True)
class ProtocolConfig:
    n: int = 1
    alpha: complex = SQRT1_2
    beta: complex = SQRT1_2
    mode: str = EXACT
    shots: int = 1
    event_ready: bool = False
    seed: int = 1
    comparison: str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ConfigurationError(f"N must be a positive integer, got {self.n!r}")
        if self.mode not in (EXACT, SAMPLE):
            raise ConfigurationError(f"mode must be {EXACT!r} or {SAMPLE!r}, got {self.mode!r}")
        if self.mode == SAMPLE and (not isinstance(self.shots, int) or self.shots < 1):
            raise ConfigurationError(f"Monte Carlo runs need shots >= 1, got {self.shots!r}")
        if self.event_ready and self.n != 1:
            raise ConfigurationError("the event-ready source is defined for N = 1 only")
        if self.comparison not in (None, SEQUENTIAL_SWAP):
            raise ConfigurationError(f"unknown comparison {self.comparison!r}")
        if self.comparison is not None and self.n != 1:
            raise ConfigurationError("the sequential-swap comparison is defined for N = 1 only")
        self.input_spec  # validates alpha, beta

    @property
    def input_spec(self) -> InputSpec:
        return InputSpec(self.alpha, self.beta, self.n)

    def echo(self) -> dict:
        return {
            "n": self.n,
            "alpha": {"re": complex(self.alpha).real, "im": complex(self.alpha).imag},
            "beta": {"re": complex(self.beta).real, "im": complex(self.beta).imag},
            "mode": self.mode,
            "shots": self.shots if self.mode == SAMPLE else None,
            "event_ready": self.event_ready,
            "seed": self.seed,
            "comparison": self.comparison,
        }


@dataclass(frozen=True)
class ClassicalMessage:
    """What Alice sends Bob: success flag, parity on success, and the raw pattern."""

    success: bool
    parity: Parity | None
    pattern: DetectorPattern

    def __post_init__(self) -> None:
        if self.success != (self.parity in (Parity.EVEN, Parity.ODD)):
            raise InvariantViolation("parity must be present exactly when teleportation succeeded")


@dataclass
class ReportRow:
    pattern: DetectorPattern
    probability: float
    labels: tuple[str, ...]
    parity: str | None
    fidelity: float | None
    count: int | None = None

    @property
    def success(self) -> bool:
        return self.parity is not None

    def to_dict(self, rename: Mapping[str, str] | None = None) -> dict:
        rename = rename or {}
        row = {
            "pattern": {rename.get(d, d): c for d, c in self.pattern.as_dict().items()},
            "fired": [rename.get(d, d) for d in self.pattern.fired()],
            "probability" if self.count is None else "frequency": self.probability,
            "labels": list(self.labels),
            "parity": self.parity,
            "fidelity": self.fidelity,
        }
        if self.count is not None:
            row["count"] = self.count
        return row


@dataclass
class RunReport:
    config: dict
    rows: list[ReportRow]
    aggregates: dict
    warnings: list[str] = field(default_factory=list)
    heralding: list[ReportRow] | None = None
    scheme: str = "total_teleportation"

    @property
    def success_probability(self) -> float:
        return math.fsum(r.probability for r in self.rows if r.success)

    def to_dict(self, rename: Mapping[str, str] | None = None) -> dict:
        doc = {
            "scheme": self.scheme,
            "config": self.config,
            "rows": [r.to_dict(rename) for r in self.rows],
            "aggregates": self.aggregates,
            "warnings": list(self.warnings),
        }
        if self.heralding is not None:
            doc["heralding"] = [r.to_dict(rename) for r in self.heralding]
        return doc


# --------------------------------------------------------------------------- layout


def bell_pairs(n: int) -> list[tuple[str, str]]:
    """Mode pairs entering Alice's N+1 Bell splitters, in detector-pair order."""
    pairs = [("ch.0.1", "in.0.1"), ("ch.0.2", "in.0.2")]
    pairs += [(f"in.{k}.1", f"in.{k}.2") for k in range(1, n)]
    return pairs


def detector_pairs(n: int) -> list[tuple[str, str]]:
    return [(f"det.{k}.1", f"det.{k}.2") for k in range(n + 1)]


def detector_modes(n: int) -> list[str]:
    return [d for pair in detector_pairs(n) for d in pair]


def bob_pairs(n: int) -> list[tuple[str, str]]:
    return [(f"ch.{k}.1", f"ch.{k}.2") for k in range(1, n + 1)]


def bob_registry(n: int) -> ModeRegistry:
    return ModeRegistry(tuple(m for pair in bob_pairs(n) for m in pair))


def alice_beam_splitters(n: int) -> list[BeamSplitterSpec]:
    return [BeamSplitterSpec(x, y) for x, y in bell_pairs(n)]


# --------------------------------------------------------------------------- protocol steps


def _event_ready_source() -> QuantumState:
    names = tuple(EVENT_READY_NAMES.values())
    return event_ready_product(ModeRegistry(names), EVENT_READY_NAMES)


def assemble(config: ProtocolConfig) -> QuantumState:
    """Full photon-field state before any detection."""
    spec = config.input_spec
    if config.event_ready:
        return tensor(_event_ready_source(), assemble_input(spec))
    return total_input(spec)


def interfere(
    state: QuantumState, pairs: Sequence[tuple[str, str]], detectors: Sequence[tuple[str, str]]
) -> QuantumState:
    """50/50 splitter on each pair; output ports renamed to the detector ids."""
    for (x, y), (d1, d2) in zip(pairs, detectors):
        state = beam_splitter_apply(state, BeamSplitterSpec(x, y))
        state = relabel_modes(state, {x: d1, y: d2})
    return state


def alice_interfere(state: QuantumState, config: ProtocolConfig) -> QuantumState:
    return interfere(state, bell_pairs(config.n), detector_pairs(config.n))


def bob_correct(
    conditional: QuantumState, parity: Parity, pairs: Sequence[tuple[str, str]] | None = None
) -> QuantumState:
    """Bob's local correction on his dual-rail pairs.

    Even parity needs only the role swap inside every pair (rail 2 carries
    the image of the input's rail 1). Odd parity adds a pi phase on the
    first rail of the first pair before the swap. ``pairs`` defaults to
    consecutive modes of the state's registry.
    """
    if parity not in (Parity.EVEN, Parity.ODD):
        raise InvariantViolation(f"no correction exists for parity {parity}; filter failed outcomes first")
    if pairs is None:
        modes = conditional.modes
        if len(modes) % 2:
            raise ConfigurationError(f"cannot pair up Bob's modes {modes}")
        pairs = list(zip(modes[0::2], modes[1::2]))
    state = conditional
    if parity is Parity.ODD:
        state = phase_shift(state, pairs[0][0], math.pi)
    mapping = {}
    for x, y in pairs:
        mapping[x] = y
        mapping[y] = x
    return relabel_modes(state, mapping)


def target_state(config: ProtocolConfig) -> QuantumState:
    """Input state carried over onto Bob's rails (``in.k.j`` -> ``ch.{k+1}.j``)."""
    registry = bob_registry(config.n)
    return input_entangled_state(registry, config.input_spec, registry.names)


def _evaluate(
    outcome: Outcome, det_pairs: Sequence[tuple[str, str]], target: QuantumState
) -> tuple[tuple[str, ...], Parity, float | None]:
    labels = classify_pattern(outcome.pattern, det_pairs)
    parity = psi_minus_parity(labels)
    if parity is Parity.INAPPLICABLE:
        return tuple(map(str, labels)), parity, None
    corrected = bob_correct(reorder(outcome.conditional, target.modes), parity)
    return tuple(map(str, labels)), parity, fidelity(corrected, target)


def message_for(pattern: DetectorPattern, n: int) -> ClassicalMessage:
    parity = psi_minus_parity(classify_pattern(pattern, detector_pairs(n)))
    ok = parity is not Parity.INAPPLICABLE
    return ClassicalMessage(ok, parity if ok else None, pattern)


def _row(outcome: Outcome, evaluation, probability: float, count: int | None = None) -> ReportRow:
    labels, parity, fid = evaluation
    return ReportRow(
        pattern=outcome.pattern,
        probability=probability,
        labels=labels,
        parity=None if parity is Parity.INAPPLICABLE else str(parity),
        fidelity=fid,
        count=count,
    )


def teleport_rows(interfered: QuantumState, config: ProtocolConfig) -> list[ReportRow]:
    """Exact rows for a state already passed through Alice's splitters."""
    dist = outcome_distribution(interfered, detector_modes(config.n))
    target = target_state(config)
    pairs = detector_pairs(config.n)
    return [_row(o, _evaluate(o, pairs, target), o.probability) for o in dist]


def _exact_aggregates(rows: Sequence[ReportRow]) -> dict:
    success = [r for r in rows if r.success]
    p_success = math.fsum(r.probability for r in success)
    p_total = math.fsum(r.probability for r in rows)
    return {
        "success_probability": p_success,
        "failure_probability": math.fsum(r.probability for r in rows if not r.success),
        "total_probability": p_total,
        "parity_probability": {
            "even": math.fsum(r.probability for r in success if r.parity == "even"),
            "odd": math.fsum(r.probability for r in success if r.parity == "odd"),
        },
        "mean_success_fidelity": (
            math.fsum(r.probability * r.fidelity for r in success) / p_success if p_success else None
        ),
        "min_success_fidelity": min((r.fidelity for r in success), default=None),
        "success_patterns": len(success),
    }


def _check_rows(rows: Sequence[ReportRow]) -> None:
    for r in rows:
        if r.success and abs(r.fidelity - 1.0) > 1e-9:
            raise InvariantViolation(f"success pattern {r.pattern} has fidelity {r.fidelity!r}")


def run_exact(config: ProtocolConfig) -> RunReport:
    """Enumerate every detector pattern of the N+1 Bell measurements."""
    if config.event_ready:
        return run_event_ready(config)
    rows = teleport_rows(alice_interfere(assemble(config), config), config)
    _check_rows(rows)
    return RunReport(config.echo(), rows, _exact_aggregates(rows))


# --------------------------------------------------------------------------- sampling


def _sample_counts(cumulative: Sequence[float], shots: int, seed: int) -> Counter:
    counts: Counter = Counter()
    for shot in range(shots):
        counts[draw_index(cumulative, shot_rng(seed, shot))] += 1
    return counts


def _sampled_aggregates(rows: Sequence[ReportRow], shots: int, exact_success: float | None) -> dict:
    success = [r for r in rows if r.success]
    hits = sum(r.count for r in success)
    rate = hits / shots
    return {
        "shots": shots,
        "success_count": hits,
        "success_rate": rate,
        "success_rate_stderr": math.sqrt(rate * (1.0 - rate) / shots),
        "exact_success_probability": exact_success,
        "parity_rate": {
            "even": sum(r.count for r in success if r.parity == "even") / shots,
            "odd": sum(r.count for r in success if r.parity == "odd") / shots,
        },
        "mean_success_fidelity": (
            math.fsum(r.count * r.fidelity for r in success) / hits if hits else None
        ),
    }


def _sampled_rows(
    dist: OutcomeDistribution, counts: Counter, shots: int, evaluate: Callable[[Outcome], tuple]
) -> list[ReportRow]:
    rows = []
    for i, o in enumerate(dist.outcomes):
        if counts[i]:
            rows.append(_row(o, evaluate(o), counts[i] / shots, counts[i]))
    return rows


def run_sampled(config: ProtocolConfig) -> RunReport:
    """Monte Carlo shots; shot ``i`` draws from a stream derived from (seed, i) only."""
    if config.mode != SAMPLE:
        raise ConfigurationError("run_sampled needs mode='sample'")
    if config.event_ready:
        return _run_event_ready_sampled(config)
    dist = outcome_distribution(alice_interfere(assemble(config), config), detector_modes(config.n))
    target = target_state(config)
    pairs = detector_pairs(config.n)
    counts = _sample_counts(dist.cumulative(), config.shots, config.seed)
    rows = _sampled_rows(dist, counts, config.shots, lambda o: _evaluate(o, pairs, target))
    _check_rows(rows)
    exact = math.fsum(o.probability for o in dist if message_for(o.pattern, config.n).success)
    return RunReport(config.echo(), rows, _sampled_aggregates(rows, config.shots, exact))


# --------------------------------------------------------------------------- event-ready source


@dataclass(frozen=True)
class HeraldBranch:
    pattern: DetectorPattern
    probability: float
    accepted: bool
    source_fidelity: float | None
    conditional: QuantumState


def _herald(state: QuantumState) -> OutcomeDistribution:
    heralded = interfere(
        state,
        [("her.G.1", "her.G.2"), ("her.H.1", "her.H.2")],
        [("det.G.1", "det.G.2"), ("det.H.1", "det.H.2")],
    )
    return outcome_distribution(heralded, HERALD_DETECTORS)


def herald_branches(config: ProtocolConfig) -> list[HeraldBranch]:
    """Heralding patterns with the conditional (source + input) state of each."""
    source_dist = _herald(_event_ready_source())
    reference = channel_state(ModeRegistry(tuple(channel_rails(1))), 1, channel_rails(1))
    full_dist = _herald(assemble(config))
    order = tuple(channel_rails(1) + input_rails(1))
    branches = []
    for o in full_dist:
        accepted = o.pattern.counts in HERALD_ACCEPT
        source_fid = None
        if accepted:
            src = next(s for s in source_dist if s.pattern == o.pattern)
            source_fid = fidelity(reorder(src.conditional, reference.modes), reference)
        else:
            log.info("discarding heralding pattern %s (p=%.6g)", o.pattern, o.probability)
        branches.append(
            HeraldBranch(o.pattern, o.probability, accepted, source_fid, reorder(o.conditional, order))
        )
    return branches


def _herald_row(b: HeraldBranch, count: int | None = None, probability: float | None = None) -> ReportRow:
    return ReportRow(
        pattern=b.pattern,
        probability=b.probability if probability is None else probability,
        labels=("herald",) if b.accepted else ("reject",),
        parity=None,
        fidelity=b.source_fidelity,
        count=count,
    )


def run_event_ready(config: ProtocolConfig) -> RunReport:
    """Herald the source on the G/H detectors, then teleport on the accepted branches.

    Rows hold the downstream statistics conditioned on an accepted herald;
    the ``heralding`` rows list every herald pattern.
    """
    if not config.event_ready or config.n != 1:
        raise ConfigurationError("run_event_ready needs event_ready=True and N = 1")
    if config.mode == SAMPLE:
        return _run_event_ready_sampled(config)
    branches = herald_branches(config)
    accepted = [b for b in branches if b.accepted]
    p_herald = math.fsum(b.probability for b in accepted)
    merged: dict[tuple[int, ...], ReportRow] = {}
    for b in accepted:
        w = b.probability / p_herald
        for row in teleport_rows(alice_interfere(b.conditional, config), config):
            key = row.pattern.counts
            if key not in merged:
                merged[key] = ReportRow(row.pattern, 0.0, row.labels, row.parity, 0.0 if row.success else None)
            m = merged[key]
            m.probability += w * row.probability
            if row.success:
                m.fidelity += w * row.probability * row.fidelity
    rows = sorted(merged.values(), key=lambda r: r.pattern.counts, reverse=True)
    for r in rows:
        if r.success:
            r.fidelity = r.fidelity / r.probability
    _check_rows(rows)
    agg = _exact_aggregates(rows)
    agg.update(
        {
            "heralding_probability": p_herald,
            "heralded_source_fidelity": min(b.source_fidelity for b in accepted),
            "conditional_success_probability": agg["success_probability"],
            "overall_success_probability": p_herald * agg["success_probability"],
            "rejected_herald_probability": math.fsum(b.probability for b in branches if not b.accepted),
        }
    )
    return RunReport(config.echo(), rows, agg, heralding=[_herald_row(b) for b in branches])


def _run_event_ready_sampled(config: ProtocolConfig) -> RunReport:
    state = alice_interfere(
        interfere(
            assemble(config),
            [("her.G.1", "her.G.2"), ("her.H.1", "her.H.2")],
            [("det.G.1", "det.G.2"), ("det.H.1", "det.H.2")],
        ),
        config,
    )
    joint = outcome_distribution(state, list(HERALD_DETECTORS) + detector_modes(1))
    counts = _sample_counts(joint.cumulative(), config.shots, config.seed)
    target = target_state(config)
    pairs = detector_pairs(1)
    herald_counts: Counter = Counter()
    row_counts: Counter = Counter()
    outcomes: dict[tuple[int, ...], Outcome] = {}
    for i, c in counts.items():
        o = joint.outcomes[i]
        herald = o.pattern.restrict(HERALD_DETECTORS)
        herald_counts[herald.counts] += c
        if herald.counts in HERALD_ACCEPT:
            alice = o.pattern.restrict(detector_modes(1))
            row_counts[alice.counts] += c
            outcomes.setdefault(alice.counts, Outcome(alice, o.probability, o.conditional))
    heralded = sum(row_counts.values())
    rows = []
    for key in sorted(row_counts, reverse=True):
        o = outcomes[key]
        rows.append(_row(o, _evaluate(o, pairs, target), row_counts[key] / heralded, row_counts[key]))
    _check_rows(rows)
    branch_by_key = {b.pattern.counts: b for b in herald_branches(config)}
    herald_rows = [
        _herald_row(branch_by_key[k], herald_counts[k], herald_counts[k] / config.shots)
        for k in sorted(herald_counts, reverse=True)
    ]
    agg = _sampled_aggregates(rows, heralded, None) if heralded else {"success_count": 0}
    agg.update(
        {
            "shots": config.shots,
            "heralded_shots": heralded,
            "heralding_rate": heralded / config.shots,
            "heralding_rate_stderr": math.sqrt(
                (heralded / config.shots) * (1 - heralded / config.shots) / config.shots
            ),
            "conditional_success_rate": agg.get("success_rate"),
        }
    )
    return RunReport(config.echo(), rows, agg, heralding=herald_rows)


# --------------------------------------------------------------------------- sequential swap


def _sequential_setup(config: ProtocolConfig) -> QuantumState:
    # two single-photon pairs (A1, B1) and (A2, B2) next to the unknown input
    pair1 = single_rail_pair(ModeRegistry(("ch.0.1", "ch.1.1")), "ch.0.1", "ch.1.1")
    pair2 = single_rail_pair(ModeRegistry(("ch.0.2", "ch.1.2")), "ch.0.2", "ch.1.2")
    sources = reorder(tensor(pair1, pair2), channel_rails(1))
    return tensor(sources, assemble_input(config.input_spec))


_SEQ_STAGES = (
    (("ch.0.1", "in.0.1"), ("det.0.1", "det.0.2"), "ch.1.1"),
    (("ch.0.2", "in.0.2"), ("det.1.1", "det.1.2"), "ch.1.2"),
)


def _sequential_target(config: ProtocolConfig) -> QuantumState:
    reg = bob_registry(1)
    return input_entangled_state(reg, config.input_spec, reg.names)


def _stage(state: QuantumState, k: int) -> OutcomeDistribution:
    pair, dets, _ = _SEQ_STAGES[k]
    return outcome_distribution(interfere(state, [pair], [dets]), list(dets))


def _sequential_fidelity(conditional: QuantumState, labels: Sequence[BellOutcome], target: QuantumState) -> float:
    # each single-mode teleportation with a Psi- outcome leaves a pi phase on its output rail
    state = reorder(conditional, target.modes)
    for (_, _, rail), lab in zip(_SEQ_STAGES, labels):
        if lab is BellOutcome.PSI_MINUS:
            state = phase_shift(state, rail, math.pi)
    return fidelity(state, target)


def _sequential_tree(config: ProtocolConfig):
    """Stage-one outcomes, each with its stage-two distribution when stage one succeeded."""
    first = _stage(_sequential_setup(config), 0)
    tree = []
    for o1 in first:
        lab1 = classify_pair(o1.pattern.counts)
        second = None if lab1 is BellOutcome.PHI_AMBIGUOUS else _stage(o1.conditional, 1)
        tree.append((o1, lab1, second))
    return first, tree


def _sequential_row(o1, lab1, o2, probability, target, count=None) -> ReportRow:
    if o2 is None:
        return ReportRow(o1.pattern, probability, (str(lab1),), None, None, count)
    lab2 = classify_pair(o2.pattern.counts)
    labels = (lab1, lab2)
    pattern = o1.pattern + o2.pattern
    if lab2 is BellOutcome.PHI_AMBIGUOUS:
        return ReportRow(pattern, probability, tuple(map(str, labels)), None, None, count)
    parity = psi_minus_parity(labels)
    fid = _sequential_fidelity(o2.conditional, labels, target)
    return ReportRow(pattern, probability, tuple(map(str, labels)), str(parity), fid, count)


def run_sequential_swap(config: ProtocolConfig) -> RunReport:
    """Baseline: two independent single-photon pairs and two successive Bell measurements.

    A Phi-type result at the first splitter ends the shot; success needs Psi
    outcomes at both.
    """
    if config.n != 1:
        raise ConfigurationError("the sequential-swap scheme is defined for N = 1 only")
    target = _sequential_target(config)
    first, tree = _sequential_tree(config)
    echo = config.echo()
    if config.mode == EXACT:
        rows = []
        for o1, lab1, second in tree:
            if second is None:
                rows.append(_sequential_row(o1, lab1, None, o1.probability, target))
                continue
            for o2 in second:
                rows.append(_sequential_row(o1, lab1, o2, o1.probability * o2.probability, target))
        _check_rows(rows)
        agg = _exact_aggregates(rows)
        agg["first_stage_success_probability"] = math.fsum(
            o1.probability for o1, lab1, _ in tree if lab1 is not BellOutcome.PHI_AMBIGUOUS
        )
        return RunReport(echo, rows, agg, scheme=SEQUENTIAL_SWAP)

    cum1 = first.cumulative()
    cum2 = [None if s is None else s.cumulative() for _, _, s in tree]
    counts: Counter = Counter()
    for shot in range(config.shots):
        rng = shot_rng(config.seed, shot)
        i = draw_index(cum1, rng)
        j = None if cum2[i] is None else draw_index(cum2[i], rng)
        counts[(i, j)] += 1
    rows = []
    for (i, j) in sorted(counts, key=lambda ij: (ij[0], -1 if ij[1] is None else ij[1])):
        o1, lab1, second = tree[i]
        o2 = None if j is None else second.outcomes[j]
        rows.append(_sequential_row(o1, lab1, o2, counts[(i, j)] / config.shots, target, counts[(i, j)]))
    _check_rows(rows)
    exact = math.fsum(
        o1.probability * o2.probability
        for o1, lab1, second in tree
        if second is not None
        for o2 in second
        if classify_pair(o2.pattern.counts) is not BellOutcome.PHI_AMBIGUOUS
    )
    return RunReport(echo, rows, _sampled_aggregates(rows, config.shots, exact), scheme=SEQUENTIAL_SWAP)


# --------------------------------------------------------------------------- dispatch


def run(config: ProtocolConfig) -> RunReport:
    """Run the configured experiment, attaching the comparison scheme if requested."""
    if config.event_ready:
        report = run_event_ready(config)
    elif config.mode == EXACT:
        report = run_exact(config)
    else:
        report = run_sampled(config)
    if config.comparison == SEQUENTIAL_SWAP:
        other = run_sequential_swap(config)
        key = "success_probability" if config.mode == EXACT else "success_rate"
        report.aggregates["comparison"] = {
            "scheme": SEQUENTIAL_SWAP,
            "success_probability": other.aggregates[key],
            "mean_success_fidelity": other.aggregates["mean_success_fidelity"],
            "rows": [r.to_dict() for r in other.rows],
        }
    return report
