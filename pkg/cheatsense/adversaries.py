"""Cheating strategies for the OT protocol.

A malicious Alice is described by the joint state prepared on the two
message qubits and Alice's ancillas, plus one four-outcome measurement on the
returned qubit and those ancillas.  Outcome ``2k + l`` means "send m = k and
guess i = l".

A malicious Bob is described by a unitary on both message qubits and Bob's
ancillas, the register sent back, and one four-outcome measurement per
value of m on the registers Bob keeps.  Outcome ``2l + k`` means
"a0' = l, a1' = k".

Spec layouts list registers least significant first: ``msg0``, ``msg1``,
then the party's ancillas.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from .base import RETURNED, AliceStrategy, BobStrategy, PartyContext
from .branching import RngLike, as_generator
from .exceptions import InvalidArgumentError
from .ot import MAX_ANCILLA_QUBITS, MSG0, MSG1, AliceFactory, BobFactory, check_bit
from .quantum import (
    DensityMatrix,
    Measurement,
    StateVector,
    apply_operator,
    as_complex_matrix,
    helstrom_measurement,
    is_unitary,
    partial_trace,
    positive_projector,
    preparation_unitary,
    random_projective_measurement,
    random_state_vector,
    random_unitary,
    rotation,
)

logger = logging.getLogger(__name__)

DEFAULT_EPSILON_GRID = (0.01, 0.04, 0.09)

#: Outcome 2k + l -> (m = k, i' = l).
ALICE_DECODER: Tuple[Tuple[int, Optional[int]], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))
#: Outcome 2l + k -> (a0' = l, a1' = k).
BOB_DECODER: Tuple[Tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))

OUTCOME_LABELS = ("0", "1", "2", "3")


@dataclass(frozen=True)
class AttackParams:
    epsilon: float

    def __post_init__(self) -> None:
        try:
            value = float(self.epsilon)
        except (TypeError, ValueError):
            raise InvalidArgumentError(f"epsilon must be a real number, got {self.epsilon!r}") from None
        if not math.isfinite(value) or not 0.0 < value < 1.0:
            raise InvalidArgumentError(f"epsilon must lie in (0, 1), got {self.epsilon!r}")
        object.__setattr__(self, "epsilon", value)


def _epsilon(params: Union[AttackParams, float]) -> float:
    return params.epsilon if isinstance(params, AttackParams) else AttackParams(params).epsilon


def _check_ancillas(dims: Tuple[int, ...]) -> None:
    if any(d != 2 for d in dims) or len(dims) > MAX_ANCILLA_QUBITS:
        raise InvalidArgumentError(f"Ancillas must be at most {MAX_ANCILLA_QUBITS} qubits, got {dims}")


def _check_four_outcomes(measurement: Measurement, dim: int, what: str) -> None:
    if len(measurement.labels) != 4:
        raise InvalidArgumentError(f"{what} needs exactly 4 outcomes, got {len(measurement.labels)}")
    if measurement.dim != dim:
        raise InvalidArgumentError(f"{what} has dimension {measurement.dim}, expected {dim}")


@dataclass(frozen=True, eq=False)
class MaliciousAliceSpec:
    """Prepared state, final measurement and decoder of a cheating Alice.

    Attributes:
        name: Label used in reports.
        initial_state: State on (msg0, msg1, ancillas...).
        final_measurement: Four outcomes on (returned, ancillas...).
        outcome_decoder: Outcome index -> (m, guess); a guess of None means
            Alice flips a fair coin.
        epsilon: Attack parameter, for the explicit attack.
    """

    name: str
    initial_state: StateVector
    final_measurement: Measurement
    outcome_decoder: Tuple[Tuple[int, Optional[int]], ...] = ALICE_DECODER
    epsilon: Optional[float] = None

    def __post_init__(self) -> None:
        layout = self.initial_state.register_layout
        if layout[:2] != (2, 2):
            raise InvalidArgumentError(f"Alice's state must start with two message qubits, got layout {layout}")
        _check_ancillas(layout[2:])
        _check_four_outcomes(self.final_measurement, 2 * math.prod(layout[2:]), "Alice's final measurement")
        if len(self.outcome_decoder) != 4:
            raise InvalidArgumentError("Alice's decoder must cover all 4 outcomes")
        decoder = tuple(
            (check_bit(m, "m"), None if guess is None else check_bit(guess, "guess"))
            for m, guess in self.outcome_decoder
        )
        object.__setattr__(self, "outcome_decoder", decoder)

    @property
    def ancilla_dims(self) -> Tuple[int, ...]:
        return self.initial_state.register_layout[2:]

    def strategy(self) -> "SpecAlice":
        return SpecAlice(self)

    def as_factory(self) -> AliceFactory:
        strategy = SpecAlice(self)
        return lambda inputs: strategy


@dataclass(frozen=True, eq=False)
class MaliciousBobSpec:
    """Unitary, returned register, measurements and decoder of a cheating Bob.

    Attributes:
        name: Label used in reports.
        unitary: Acts on (msg0, msg1, ancillas...).
        ancilla_dims: Bob's ancilla registers.
        returned_register: Index into (msg0, msg1, ancillas...) of the qubit sent back.
        final_measurements: One four-outcome measurement per value of m, on
            the kept registers in index order.
        outcome_decoder: Outcome index -> (a0', a1').
        epsilon: Attack parameter, for the explicit attack.
    """

    name: str
    unitary: np.ndarray
    ancilla_dims: Tuple[int, ...]
    returned_register: int
    final_measurements: Tuple[Measurement, Measurement]
    outcome_decoder: Tuple[Tuple[int, int], ...] = BOB_DECODER
    epsilon: Optional[float] = None

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.ancilla_dims)
        _check_ancillas(dims)
        total = 4 * math.prod(dims)
        unitary = as_complex_matrix(self.unitary, square=True)
        if unitary.shape[0] != total:
            raise InvalidArgumentError(f"Bob's unitary must be {total}x{total}, got {unitary.shape}")
        if not is_unitary(unitary):
            raise InvalidArgumentError("Bob's operator is not unitary within 1e-12")
        if not 0 <= int(self.returned_register) < 2 + len(dims):
            raise InvalidArgumentError(f"Returned register {self.returned_register} out of range")
        if len(self.final_measurements) != 2:
            raise InvalidArgumentError("Bob needs one final measurement per value of m")
        for m, measurement in enumerate(self.final_measurements):
            _check_four_outcomes(measurement, total // 2, f"Bob's final measurement for m={m}")
        if len(self.outcome_decoder) != 4:
            raise InvalidArgumentError("Bob's decoder must cover all 4 outcomes")
        unitary.setflags(write=False)
        object.__setattr__(self, "unitary", unitary)
        object.__setattr__(self, "ancilla_dims", dims)
        object.__setattr__(self, "returned_register", int(self.returned_register))
        object.__setattr__(self, "final_measurements", tuple(self.final_measurements))
        object.__setattr__(
            self,
            "outcome_decoder",
            tuple((check_bit(g0, "a0'"), check_bit(g1, "a1'")) for g0, g1 in self.outcome_decoder),
        )

    @property
    def final_measurement(self) -> Measurement:
        """The measurement used after receiving m = 0."""
        return self.final_measurements[0]

    def register_names(self) -> Tuple[str, ...]:
        return (MSG0, MSG1) + tuple(f"bob.anc{k}" for k in range(len(self.ancilla_dims)))

    def kept_registers(self) -> Tuple[str, ...]:
        names = self.register_names()
        return names[: self.returned_register] + names[self.returned_register + 1 :]

    def strategy(self) -> "SpecBob":
        return SpecBob(self)

    def as_factory(self) -> BobFactory:
        strategy = SpecBob(self)
        return lambda inputs: strategy


class SpecAlice(AliceStrategy):
    """Runs a `MaliciousAliceSpec` inside the protocol."""

    def __init__(self, spec: MaliciousAliceSpec) -> None:
        self.spec = spec
        self._ancillas = [f"alice.anc{k}" for k in range(len(spec.ancilla_dims))]
        self._prepare = preparation_unitary(spec.initial_state)

    @property
    def ancilla_dims(self) -> Tuple[int, ...]:
        return self.spec.ancilla_dims

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def description(self) -> str:
        return "Prepares an entangled message state and measures the returned qubit with its ancillas."

    @property
    def key(self):
        return ("spec-alice", id(self.spec))

    def prepare(self, ctx: PartyContext) -> None:
        ctx.apply(self._prepare, [MSG0, MSG1, *self._ancillas])

    def respond(self, ctx: PartyContext) -> int:
        label = ctx.measure(self.spec.final_measurement, [RETURNED, *self._ancillas])
        m, guess = self.spec.outcome_decoder[self.spec.final_measurement.labels.index(label)]
        ctx.private.update(outcome=label, guess=guess)
        return m

    def finalize(self, ctx: PartyContext) -> int:
        guess = ctx.private["guess"]
        return ctx.coin("guess") if guess is None else guess


class SpecBob(BobStrategy):
    """Runs a `MaliciousBobSpec` inside the protocol."""

    def __init__(self, spec: MaliciousBobSpec) -> None:
        self.spec = spec

    @property
    def ancilla_dims(self) -> Tuple[int, ...]:
        return self.spec.ancilla_dims

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def description(self) -> str:
        return "Entangles both message qubits with ancillas, returns one register, measures the rest after m."

    @property
    def key(self):
        return ("spec-bob", id(self.spec))

    def respond(self, ctx: PartyContext) -> str:
        names = self.spec.register_names()
        ctx.apply(self.spec.unitary, list(names))
        return names[self.spec.returned_register]

    def finalize(self, ctx: PartyContext, m: int) -> Tuple[int, int]:
        measurement = self.spec.final_measurements[m]
        label = ctx.measure(measurement, list(self.spec.kept_registers()))
        return self.spec.outcome_decoder[measurement.labels.index(label)]


def alice_received_states(state: StateVector, beta: int) -> Tuple[DensityMatrix, DensityMatrix]:
    """Alice's registers (returned, ancillas...) facing honest Bob with i = 0 and i = 1.

    `state` is Alice's prepared state on (msg0, msg1, ancillas...).
    """
    n = len(state.register_layout)
    views = []
    for i in (0, 1):
        amplitudes = apply_operator(rotation(beta), state.amplitudes, state.register_layout, [i])
        moved = StateVector(amplitudes, state.register_layout)
        views.append(partial_trace(moved, [i, *range(2, n)]))
    return views[0], views[1]


def _alice_attack_state(epsilon: float) -> StateVector:
    amplitudes = np.zeros(8, dtype=complex)
    amplitudes[0b000] = math.sqrt(1.0 - epsilon)
    amplitudes[0b110] = math.sqrt(epsilon)
    return StateVector(amplitudes, (2, 2, 2))


def alice_attack_spec(epsilon: float) -> MaliciousAliceSpec:
    """Explicit Alice attack for any epsilon in [0, 1); epsilon = 0 is the honest-like corner."""
    eps = float(epsilon)
    if not math.isfinite(eps) or not 0.0 <= eps < 1.0:
        raise InvalidArgumentError(f"epsilon must lie in [0, 1), got {epsilon!r}")
    state = _alice_attack_state(eps)
    # Local basis index is 2 * anc + returned.
    h2 = np.diag([0.0, 1.0, 0.0, 0.0]).astype(complex)
    complement = np.eye(4) - h2
    rho0, rho1 = alice_received_states(state, 0)
    h0 = positive_projector(complement @ (rho0.matrix - rho1.matrix) @ complement)
    h1 = complement - h0
    measurement = Measurement(OUTCOME_LABELS, (h0, h1, h2, np.zeros((4, 4))), "projective")
    decoder = ((0, 0), (0, 1), (1, None), (1, 1))
    return MaliciousAliceSpec(f"alice-attack(eps={eps:g})", state, measurement, decoder, eps)


def alice_attack(params: Union[AttackParams, float]) -> MaliciousAliceSpec:
    """Alice prepares sqrt(1-eps)|000> + sqrt(eps)|110> (ancilla leftmost) and guesses i.

    Outcome H2 (returned qubit 1, ancilla 0) only occurs when beta = 1; it
    answers m = 1 and guesses i with a coin.  Outside H2 the Helstrom split
    of the two i-conditioned states answers m = 0 and guesses i.
    """
    return alice_attack_spec(_epsilon(params))


def _bob_attack_vectors(epsilon: float) -> Tuple[np.ndarray, np.ndarray]:
    theta = math.acos(math.sqrt(1.0 - epsilon))
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([c, s], dtype=complex), np.array([c, -s], dtype=complex)


def _diagonal_mixture(x: int) -> DensityMatrix:
    """Bit x sent with alpha uniform in {0, 1/2}."""
    ket = np.zeros(2, dtype=complex)
    ket[x] = 1.0
    rotated = rotation(0.5) @ ket
    return DensityMatrix(0.5 * (np.outer(ket, ket.conj()) + np.outer(rotated, rotated.conj())))


def bob_attack_spec(epsilon: float) -> MaliciousBobSpec:
    """Explicit Bob attack for any epsilon in [0, 1); epsilon = 0 leaves the ancilla untouched."""
    eps = float(epsilon)
    if not math.isfinite(eps) or not 0.0 <= eps < 1.0:
        raise InvalidArgumentError(f"epsilon must lie in [0, 1), got {epsilon!r}")
    v0, v1 = _bob_attack_vectors(eps)
    c, s = v0[0].real, v0[1].real
    rotations = (
        np.array([[c, -s], [s, c]], dtype=complex),
        np.array([[c, s], [-s, c]], dtype=complex),
    )
    # Controlled on msg0: |j><j| on msg0, identity on msg1, V_j on the ancilla.
    unitary = np.zeros((8, 8), dtype=complex)
    for j in (0, 1):
        control = np.zeros((2, 2), dtype=complex)
        control[j, j] = 1.0
        unitary += np.kron(rotations[j], np.kron(np.eye(2), control))

    ancilla_split = helstrom_measurement(StateVector(v0), StateVector(v1))
    bit_splits = {
        h: helstrom_measurement(_diagonal_mixture(0 ^ h), _diagonal_mixture(1 ^ h)) for h in (0, 1)
    }
    measurements = []
    for m in (0, 1):
        elements = []
        for g0 in (0, 1):
            for k in (0, 1):
                if g0 != m:
                    elements.append(np.zeros((4, 4), dtype=complex))
                    continue
                # Kept registers are (msg1, anc): local index is 2 * anc + msg1.
                elements.append(
                    sum(
                        np.kron(ancilla_split.elements[j], bit_splits[m ^ j].elements[k])
                        for j in (0, 1)
                    )
                )
        measurements.append(Measurement(OUTCOME_LABELS, tuple(elements), "projective"))
    return MaliciousBobSpec(
        f"bob-attack(eps={eps:g})", unitary, (2,), 0, (measurements[0], measurements[1]), BOB_DECODER, eps
    )


def bob_attack(params: Union[AttackParams, float]) -> MaliciousBobSpec:
    """Bob copies msg0 into an ancilla as |v_j> with <v0|v1> = sqrt(1-eps) and returns msg0.

    After m, Bob sets a0' = m, estimates j from the ancilla, derives
    h' = m xor j' and guesses a1 with the optimal measurement on msg1 for
    that h', averaged over alpha.
    """
    return bob_attack_spec(_epsilon(params))


def bob_attack_constants(epsilon: float) -> dict:
    """Closed-form figures for the explicit Bob attack against honest Alice."""
    eps = float(epsilon)
    return {
        "a0_error": (1.0 - math.sqrt(1.0 - eps)) / 4.0,
        "a1_advantage": math.sqrt(2.0) / 8.0 * math.sqrt(eps),
        "ancilla_advantage": 0.5 * math.sqrt(eps),
    }


def honest_equivalent_alice() -> MaliciousAliceSpec:
    """Sends |0>|0>, measures the returned qubit honestly and guesses i from a |+> ancilla."""
    amplitudes = np.zeros(8, dtype=complex)
    amplitudes[0b000] = amplitudes[0b100] = 1.0 / math.sqrt(2.0)
    elements = []
    for k in (0, 1):
        for g in (0, 1):
            projector = np.zeros((4, 4), dtype=complex)
            projector[2 * g + k, 2 * g + k] = 1.0
            elements.append(projector)
    measurement = Measurement(OUTCOME_LABELS, tuple(elements), "projective")
    return MaliciousAliceSpec("honest-equivalent-alice", StateVector(amplitudes, (2, 2, 2)), measurement)


def honest_equivalent_bob() -> MaliciousBobSpec:
    """Returns msg0 untouched, answers a0' = m and a constant a1' = 0."""
    measurements = []
    for m in (0, 1):
        elements = [np.zeros((4, 4), dtype=complex) for _ in range(4)]
        elements[2 * m] = np.eye(4, dtype=complex)
        measurements.append(Measurement(OUTCOME_LABELS, tuple(elements), "projective"))
    return MaliciousBobSpec(
        "honest-equivalent-bob", np.eye(8, dtype=complex), (2,), 0, (measurements[0], measurements[1])
    )


def random_alice_family(
    seed: RngLike, count: int, *, epsilon_grid: Tuple[float, ...] = DEFAULT_EPSILON_GRID
) -> List[MaliciousAliceSpec]:
    """Designated members (explicit attacks, honest-equivalent) followed by `count` random specs."""
    if int(count) < 1:
        raise InvalidArgumentError(f"count must be at least 1, got {count}")
    rng = as_generator(seed)
    family = [alice_attack(eps) for eps in epsilon_grid] + [honest_equivalent_alice()]
    for k in range(int(count)):
        n_anc = int(rng.integers(0, MAX_ANCILLA_QUBITS + 1))
        state = random_state_vector((2, 2) + (2,) * n_anc, rng)
        measurement = random_projective_measurement(2 ** (n_anc + 1), 4, rng)
        family.append(MaliciousAliceSpec(f"random-alice-{k}", state, measurement))
    logger.debug("Built Alice family of %d specs", len(family))
    return family


def random_bob_family(
    seed: RngLike, count: int, *, epsilon_grid: Tuple[float, ...] = DEFAULT_EPSILON_GRID
) -> List[MaliciousBobSpec]:
    """Designated members (explicit attacks, honest-equivalent) followed by `count` random specs."""
    if int(count) < 1:
        raise InvalidArgumentError(f"count must be at least 1, got {count}")
    rng = as_generator(seed)
    family = [bob_attack(eps) for eps in epsilon_grid] + [honest_equivalent_bob()]
    for k in range(int(count)):
        n_anc = int(rng.integers(1, MAX_ANCILLA_QUBITS + 1))
        total = 2 ** (n_anc + 2)
        unitary = random_unitary(total, rng)
        returned = int(rng.integers(0, 2 + n_anc))
        measurements = (
            random_projective_measurement(total // 2, 4, rng),
            random_projective_measurement(total // 2, 4, rng),
        )
        family.append(MaliciousBobSpec(f"random-bob-{k}", unitary, (2,) * n_anc, returned, measurements))
    logger.debug("Built Bob family of %d specs", len(family))
    return family
