"""Weak one-out-of-two oblivious transfer over a shared global quantum state.

The engine keeps a single pure state over every register of the run:

* ``msg0`` (index 0) and ``msg1`` (index 1), the two message qubits that
  Alice prepares, carrying ``a0`` and ``a1`` respectively;
* ``alice.anc<k>`` and ``bob.anc<k>``, the ancillas each party declares.

Sending a qubit re-assigns its owner; amplitudes are never copied.  Every
callback goes through a `PartyContext` that refuses registers the party
does not own.  Classical randomness comes from a `Sampler`, so the same
code produces Monte Carlo runs and exact branch enumerations.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .base import RETURNED, AliceStrategy, BobStrategy, PartyContext, Role
from .branching import ZERO_PROBABILITY, Branch, RandomSampler, RngLike, Sampler, enumerate_branches
from .exceptions import (
    AccessViolationError,
    CapacityError,
    InvalidArgumentError,
    NumericalError,
    ProtocolViolationError,
)
from .quantum import (
    MAX_DIMENSION,
    PAULI_X,
    DensityMatrix,
    Measurement,
    StateVector,
    apply_operator,
    branch_states,
    rotation,
)

logger = logging.getLogger(__name__)

MSG0 = "msg0"
MSG1 = "msg1"
MESSAGE_REGISTERS = (MSG0, MSG1)
#: Ancilla budget per party, in qubits.
MAX_ANCILLA_QUBITS = 2

COMPUTATIONAL = Measurement.computational(2)


def check_bit(value: Any, name: str) -> int:
    """Return `value` as 0 or 1, rejecting anything else."""
    if isinstance(value, (bool, np.bool_)):
        return int(value)
    if isinstance(value, (int, np.integer)) and int(value) in (0, 1):
        return int(value)
    raise InvalidArgumentError(f"{name} must be a bit (0 or 1), got {value!r}")


@dataclass(frozen=True)
class OtInputs:
    a0: int
    a1: int
    i: int

    def __post_init__(self) -> None:
        for name in ("a0", "a1", "i"):
            object.__setattr__(self, name, check_bit(getattr(self, name), name))

    @property
    def selected(self) -> int:
        return self.a1 if self.i else self.a0

    @property
    def other(self) -> int:
        return self.a0 if self.i else self.a1

    @classmethod
    def all(cls) -> Tuple["OtInputs", ...]:
        """The eight input combinations, ordered by (a0, a1, i)."""
        return tuple(cls(a0, a1, i) for a0 in (0, 1) for a1 in (0, 1) for i in (0, 1))


@dataclass(frozen=True)
class AliceSecrets:
    alpha: float
    h: int

    def __post_init__(self) -> None:
        if self.alpha not in (0.0, 0.5):
            raise InvalidArgumentError(f"alpha must be 0 or 1/2, got {self.alpha!r}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "h", check_bit(self.h, "h"))


@dataclass(frozen=True)
class BobSecrets:
    beta: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", check_bit(self.beta, "beta"))


@dataclass(frozen=True)
class MessageEvent:
    """A quantum register changing hands."""

    sender: Role
    receiver: Role
    register: str


@dataclass(frozen=True)
class OtTranscript:
    """Full record of one OT execution.

    Attributes:
        alice_secrets: (alpha, h) when Alice plays honestly.
        bob_secrets: beta when Bob plays honestly.
        quantum_message_log: Register hand-overs in order.
        n: Alice's measurement result, when reported.
        m: The classical message Alice sent.
        bob_output: Bob's output bit (honest Bob).
        bob_guesses: (a0', a1') for a Bob strategy that guesses both bits.
        alice_guess: Alice's guess of i, if any.
        alice_view: Alice's choices, outcomes and received messages.
        bob_view: The same for Bob.
        final_global_state: The global state at the end, when retained.
    """

    alice_secrets: Optional[AliceSecrets]
    bob_secrets: Optional[BobSecrets]
    quantum_message_log: Tuple[MessageEvent, ...]
    n: Optional[int]
    m: int
    bob_output: Optional[int]
    bob_guesses: Optional[Tuple[int, int]] = None
    alice_guess: Optional[int] = None
    alice_view: Tuple[Tuple[str, Any], ...] = ()
    bob_view: Tuple[Tuple[str, Any], ...] = ()
    final_global_state: Optional[DensityMatrix] = field(default=None, compare=False)

    def bob_value(self, selection: int) -> int:
        """The bit Bob holds for `selection`: the output, else the guess of that bit."""
        if self.bob_output is not None:
            return self.bob_output
        if self.bob_guesses is not None:
            return self.bob_guesses[selection]
        raise ProtocolViolationError("Bob produced neither an output nor guesses")


class _GlobalState:
    """Pure state over named registers plus the ownership map."""

    def __init__(self, names: Sequence[str], dims: Sequence[int], owners: Dict[str, Role]) -> None:
        self.names = list(names)
        self.layout = tuple(dims)
        self.index = {name: k for k, name in enumerate(self.names)}
        self.owner = dict(owners)
        self.amplitudes = np.zeros(math.prod(self.layout), dtype=complex)
        self.amplitudes[0] = 1.0
        self.returned: Optional[str] = None

    def dims_of(self, indices: Sequence[int]) -> int:
        return math.prod(self.layout[k] for k in indices)

    def transfer(self, register: str, receiver: Role) -> None:
        self.owner[register] = receiver

    def density(self) -> DensityMatrix:
        return StateVector(self.amplitudes, self.layout).density()


class _EngineContext(PartyContext):
    def __init__(self, state: _GlobalState, role: Role, sampler: Sampler) -> None:
        super().__init__(role)
        self._state = state
        self._sampler = sampler
        self.view: List[Tuple[str, Any]] = []

    def registers(self) -> Tuple[str, ...]:
        owned = [name for name in self._state.names if self._state.owner[name] == self.role]
        if self.role == "alice" and self._state.returned is not None:
            owned = [RETURNED if name == self._state.returned else name for name in owned]
        return tuple(owned)

    def _resolve(self, registers: Sequence[str]) -> List[int]:
        indices = []
        for name in registers:
            physical = name
            if name == RETURNED and self.role == "alice" and self._state.returned is not None:
                physical = self._state.returned
            elif self.role == "alice" and name == self._state.returned:
                raise AccessViolationError(f"Alice reaches the returned qubit only as '{RETURNED}'")
            if physical not in self._state.index:
                raise AccessViolationError(f"{self.role} referenced unknown register '{name}'")
            if self._state.owner[physical] != self.role:
                raise AccessViolationError(f"{self.role} does not own register '{name}'")
            indices.append(self._state.index[physical])
        return indices

    def apply(self, operator: np.ndarray, registers: Sequence[str]) -> None:
        indices = self._resolve(registers)
        self._state.amplitudes = apply_operator(operator, self._state.amplitudes, self._state.layout, indices)

    def measure(self, measurement: Measurement, registers: Sequence[str]) -> str:
        indices = self._resolve(registers)
        if measurement.dim != self._state.dims_of(indices):
            raise InvalidArgumentError(
                f"Measurement of dimension {measurement.dim} does not fit registers {list(registers)}"
            )
        branches = branch_states(self._state.amplitudes, self._state.layout, measurement, indices)
        probabilities = [min(max(p, 0.0), 1.0) for p, _ in branches]
        total = sum(probabilities)
        choice = self._sampler.choose(f"{self.role}.measure", [p / total for p in probabilities])
        probability, branch = branches[choice]
        if probability <= ZERO_PROBABILITY:
            raise NumericalError(
                "Measurement outcome has vanishing probability",
                {"role": self.role, "label": measurement.labels[choice], "probability": probability},
            )
        self._state.amplitudes = branch / math.sqrt(probability)
        label = measurement.labels[choice]
        self.view.append(("measure", label))
        return label

    def choose(self, label: str, probabilities: Sequence[float]) -> int:
        value = self._sampler.choose(f"{self.role}.{label}", probabilities)
        self.view.append((label, value))
        return value


def _ancilla_names(role: Role, dims: Sequence[int]) -> List[str]:
    if any(int(d) < 2 for d in dims):
        raise InvalidArgumentError(f"Ancilla dimensions must be at least 2, got {tuple(dims)}")
    if math.log2(math.prod(dims)) > MAX_ANCILLA_QUBITS + 1e-9:
        raise CapacityError(f"{role} asked for ancillas {tuple(dims)}, above the {MAX_ANCILLA_QUBITS}-qubit budget")
    return [f"{role}.anc{k}" for k in range(len(dims))]


def run_ot(
    alice: AliceStrategy,
    bob: BobStrategy,
    rng: RngLike = None,
    *,
    sampler: Optional[Sampler] = None,
    keep_state: bool = False,
    max_dimension: int = MAX_DIMENSION,
) -> OtTranscript:
    """Execute one OT run.

    Args:
        alice: Sender strategy.
        bob: Receiver strategy.
        rng: Seed or generator for a Monte Carlo run.
        sampler: Explicit sampler; overrides `rng` (used for exact enumeration).
        keep_state: Retain the final global state in the transcript.
        max_dimension: Cap on the total Hilbert-space dimension.

    Returns:
        The transcript of the run.
    """
    if not isinstance(alice, AliceStrategy) or not isinstance(bob, BobStrategy):
        raise InvalidArgumentError("run_ot needs an Alice strategy and a Bob strategy")
    alice_anc = _ancilla_names("alice", alice.ancilla_dims)
    bob_anc = _ancilla_names("bob", bob.ancilla_dims)
    names = [MSG0, MSG1, *alice_anc, *bob_anc]
    dims = [2, 2, *alice.ancilla_dims, *bob.ancilla_dims]
    if math.prod(dims) > max_dimension:
        raise CapacityError(f"Global state dimension {math.prod(dims)} exceeds cap {max_dimension}")
    owners: Dict[str, Role] = {name: "alice" for name in (MSG0, MSG1, *alice_anc)}
    owners.update({name: "bob" for name in bob_anc})
    state = _GlobalState(names, dims, owners)
    sampler = sampler if sampler is not None else RandomSampler(rng)
    alice_ctx = _EngineContext(state, "alice", sampler)
    bob_ctx = _EngineContext(state, "bob", sampler)
    log: List[MessageEvent] = []

    # Step 1: Alice prepares and sends both message qubits.
    alice.prepare(alice_ctx)
    for register in MESSAGE_REGISTERS:
        state.transfer(register, "bob")
        log.append(MessageEvent("alice", "bob", register))
        bob_ctx.view.append(("received", register))

    # Step 2: Bob acts and sends one qubit back.
    bob.prepare(bob_ctx)
    returned = bob.respond(bob_ctx)
    if not isinstance(returned, str) or state.owner.get(returned) != "bob":
        raise ProtocolViolationError(f"Bob must return a register it owns, got {returned!r}")
    if state.layout[state.index[returned]] != 2:
        raise ProtocolViolationError(f"Bob must return a qubit, register '{returned}' is not one")
    state.transfer(returned, "alice")
    state.returned = returned
    log.append(MessageEvent("bob", "alice", returned))
    alice_ctx.view.append(("received", RETURNED))

    # Step 3: Alice measures and announces m.
    m = alice.respond(alice_ctx)
    if isinstance(m, (bool, np.bool_)) or not isinstance(m, (int, np.integer)) or int(m) not in (0, 1):
        raise ProtocolViolationError(f"Alice must send exactly one classical bit, got {m!r}")
    m = int(m)
    bob_ctx.view.append(("m", m))

    # Step 4: Bob computes the output.
    result = bob.finalize(bob_ctx, m)
    bob_output: Optional[int] = None
    bob_guesses: Optional[Tuple[int, int]] = None
    if isinstance(result, tuple):
        if len(result) != 2:
            raise ProtocolViolationError(f"Bob's guesses must be a pair of bits, got {result!r}")
        try:
            bob_guesses = (check_bit(result[0], "a0'"), check_bit(result[1], "a1'"))
        except InvalidArgumentError as e:
            raise ProtocolViolationError(str(e)) from e
    else:
        try:
            bob_output = check_bit(result, "bob output")
        except InvalidArgumentError as e:
            raise ProtocolViolationError(str(e)) from e

    guess = alice.finalize(alice_ctx)
    if guess is not None:
        try:
            guess = check_bit(guess, "alice guess")
        except InvalidArgumentError as e:
            raise ProtocolViolationError(str(e)) from e

    return OtTranscript(
        alice_secrets=alice.secrets(alice_ctx),
        bob_secrets=bob.secrets(bob_ctx),
        quantum_message_log=tuple(log),
        n=alice.measured_bit(alice_ctx),
        m=m,
        bob_output=bob_output,
        bob_guesses=bob_guesses,
        alice_guess=guess,
        alice_view=tuple(alice_ctx.view),
        bob_view=tuple(bob_ctx.view),
        final_global_state=state.density() if keep_state else None,
    )


def ot_branches(
    alice: AliceStrategy, bob: BobStrategy, *, keep_state: bool = False, max_dimension: int = MAX_DIMENSION
) -> List[Branch[OtTranscript]]:
    """Every branch of positive probability of one OT execution."""
    return enumerate_branches(
        lambda sampler: run_ot(alice, bob, sampler=sampler, keep_state=keep_state, max_dimension=max_dimension)
    )


class HonestAlice(AliceStrategy):
    """Alice following the protocol with inputs (a0, a1)."""

    def __init__(self, a0: int, a1: int) -> None:
        self.a0 = check_bit(a0, "a0")
        self.a1 = check_bit(a1, "a1")

    @property
    def name(self) -> str:
        return "honest-alice"

    @property
    def description(self) -> str:
        return "Sends R_alpha|a1 xor h> (x) R_alpha|a0 xor h>, measures the returned qubit, announces n xor h."

    @property
    def key(self):
        return ("honest-alice", self.a0, self.a1)

    def prepare(self, ctx: PartyContext) -> None:
        alpha = (0.0, 0.5)[ctx.coin("alpha")]
        h = ctx.coin("h")
        ctx.private.update(alpha=alpha, h=h)
        for register, bit in ((MSG0, self.a0 ^ h), (MSG1, self.a1 ^ h)):
            flip = PAULI_X if bit else np.eye(2)
            ctx.apply(rotation(alpha) @ flip, [register])

    def respond(self, ctx: PartyContext) -> int:
        ctx.apply(rotation(-ctx.private["alpha"]), [RETURNED])
        n = int(ctx.measure(COMPUTATIONAL, [RETURNED]))
        ctx.private["n"] = n
        return n ^ ctx.private["h"]

    def secrets(self, ctx: PartyContext) -> AliceSecrets:
        return AliceSecrets(ctx.private["alpha"], ctx.private["h"])


class HonestBob(BobStrategy):
    """Bob following the protocol with selection bit i."""

    def __init__(self, i: int) -> None:
        self.i = check_bit(i, "i")

    @property
    def name(self) -> str:
        return "honest-bob"

    @property
    def description(self) -> str:
        return "Applies R_beta to message qubit i, returns it and outputs m xor beta."

    @property
    def key(self):
        return ("honest-bob", self.i)

    def respond(self, ctx: PartyContext) -> str:
        beta = ctx.coin("beta")
        ctx.private["beta"] = beta
        register = MESSAGE_REGISTERS[self.i]
        ctx.apply(rotation(beta), [register])
        return register

    def finalize(self, ctx: PartyContext, m: int) -> int:
        return m ^ ctx.private["beta"]

    def secrets(self, ctx: PartyContext) -> BobSecrets:
        return BobSecrets(ctx.private["beta"])


def honest_alice(a0: int, a1: int) -> HonestAlice:
    return HonestAlice(a0, a1)


def honest_bob(i: int) -> HonestBob:
    return HonestBob(i)


AliceFactory = Callable[[OtInputs], AliceStrategy]
BobFactory = Callable[[OtInputs], BobStrategy]


def honest_alice_factory(inputs: OtInputs) -> AliceStrategy:
    return HonestAlice(inputs.a0, inputs.a1)


def honest_bob_factory(inputs: OtInputs) -> BobStrategy:
    return HonestBob(inputs.i)


def forced_secrets(alpha: float, h: int, beta: int) -> Tuple[int, int, int]:
    """Choice path that fixes (alpha, h, beta) in an honest run, for `ReplaySampler`."""
    return (0 if alpha == 0 else 1, check_bit(h, "h"), check_bit(beta, "beta"))
