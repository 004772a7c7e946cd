"""Cheat-sensitive bit commitment built from two OT executions.

Depositing: Alice picks a0..a3, Bob picks b' and c.  OT number c selects
with b' and the other OT selects with the committed bit b; the OTs run in
index order, then Bob reveals c.  Revealing: Bob announces b, Alice opens
the pair of OT c and Bob checks it (sealing test), Bob sends v_{1-c} and
Alice checks it (binding test).  Both tests compare against the ideal OT
function value.

Parties are split by phase: a `QbcAlice`, and a `QbcBob` made of a
`BobDeposit` (depositing phase) and a `BobOpening` (revealing phase), so
one deposit can be paired with different openings.
"""

from __future__ import annotations

import dataclasses
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Dict, Hashable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .adversaries import MaliciousAliceSpec, MaliciousBobSpec, SpecAlice, SpecBob
from .base import AliceStrategy, BobStrategy, PartyContext, Role
from .branching import Branch, RandomSampler, RngLike, Sampler, as_generator, derive_seed, enumerate_branches
from .exceptions import AccessViolationError, InvalidArgumentError, ProtocolViolationError
from .ot import HonestAlice, HonestBob, OtTranscript, check_bit, ot_branches, run_ot

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
ERR = "err"
OK = "ok"

#: Stream labels xor-ed into the master seed.
QBC_STREAM = 0x9E3779B97F4A7C15
OT_STREAMS = (0x0000_0000_0000_0A01, 0x0000_0000_0000_0A02)

Verdict = Union[int, str]


def _ideal_ot(pair: Tuple[int, int], selection: int) -> int:
    return pair[selection]


def sealing_test(vc: int, a_pair: Tuple[int, int], b_prime: int) -> str:
    """Bob's check of the opened pair: pass iff vc equals a_pair[b']."""
    return PASS if check_bit(vc, "v_c") == _ideal_ot(a_pair, check_bit(b_prime, "b'")) else FAIL


def binding_test(v_other: int, a_pair: Tuple[int, int], b: int) -> str:
    """Alice's check of the revealed value: pass iff v_other equals a_pair[b]."""
    return PASS if check_bit(v_other, "v_(1-c)") == _ideal_ot(a_pair, check_bit(b, "b")) else FAIL


@dataclass(frozen=True)
class QbcInputs:
    b: int
    a: Tuple[int, int, int, int]
    b_prime: int
    c: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", check_bit(self.b, "b"))
        object.__setattr__(self, "b_prime", check_bit(self.b_prime, "b'"))
        object.__setattr__(self, "c", check_bit(self.c, "c"))
        if len(self.a) != 4:
            raise InvalidArgumentError(f"Alice needs four bits, got {self.a!r}")
        object.__setattr__(self, "a", tuple(check_bit(x, f"a{k}") for k, x in enumerate(self.a)))

    def pair(self, index: int) -> Tuple[int, int]:
        return self.a[2 * index], self.a[2 * index + 1]

    def selection(self, index: int) -> int:
        return self.b_prime if index == self.c else self.b


@dataclass(frozen=True)
class BobCommitment:
    """What Bob holds after the depositing phase."""

    b: int
    b_prime: int
    c: int
    ot_transcripts: Tuple[OtTranscript, OtTranscript]


@dataclass(frozen=True)
class QbcOutcome:
    committed_value_opened: int
    alice_detected_cheat: bool
    bob_detected_cheat: bool


@dataclass(frozen=True)
class QbcTranscript:
    """Full record of one commitment.

    Attributes:
        inputs: The committed bit and both parties' depositing choices.
        ot_transcripts: The two OT runs, index 0 then 1.
        c_revealed: The c Bob announced.
        revealed_b: The bit Bob opened.
        sealing_test: Bob's check of the pair of OT c.
        binding_test: Alice's check of v_{1-c}.
        alice_verdict: The opened bit, or "err".
        bob_verdict: "ok" or "err".
        alice_guess: Alice's guess of b before the revealing phase, if any.
        alice_view: Alice's classical view before the revealing phase.
    """

    inputs: QbcInputs
    ot_transcripts: Tuple[OtTranscript, OtTranscript]
    c_revealed: int
    revealed_b: int
    sealing_test: str
    binding_test: str
    alice_verdict: Verdict
    bob_verdict: str
    alice_guess: Optional[int] = None
    alice_view: Tuple[Any, ...] = ()

    def outcome(self) -> QbcOutcome:
        return QbcOutcome(
            committed_value_opened=self.revealed_b,
            alice_detected_cheat=self.alice_verdict == ERR,
            bob_detected_cheat=self.bob_verdict == ERR,
        )


class _ClassicalContext(PartyContext):
    """Context for the classical steps of the commitment; no quantum registers."""

    def __init__(self, role: Role, sampler: Sampler) -> None:
        super().__init__(role)
        self._sampler = sampler
        self.view: List[Tuple[str, Any]] = []

    def registers(self) -> Tuple[str, ...]:
        return ()

    def apply(self, operator: np.ndarray, registers: Sequence[str]) -> None:
        raise AccessViolationError(f"{self.role} holds no quantum registers outside an OT run")

    def measure(self, measurement, registers: Sequence[str]) -> str:
        raise AccessViolationError(f"{self.role} holds no quantum registers outside an OT run")

    def choose(self, label: str, probabilities: Sequence[float]) -> int:
        value = self._sampler.choose(f"{self.role}.{label}", probabilities)
        self.view.append((label, value))
        return value


class QbcAlice(ABC):
    """Alice's behaviour across the whole commitment."""

    name = "alice"

    @property
    def key(self) -> Hashable:
        return (type(self).__qualname__, id(self))

    def choose_bits(self, ctx: PartyContext) -> Tuple[int, int, int, int]:
        return tuple(ctx.coin(f"a{k}") for k in range(4))

    def ot_strategy(self, index: int, pair: Tuple[int, int]) -> AliceStrategy:
        return HonestAlice(*pair)

    def guess_commitment(self, ctx: PartyContext, c: int, transcripts: Tuple[OtTranscript, OtTranscript]) -> Optional[int]:
        return None

    def reveal_pair(self, ctx: PartyContext, c: int, pair: Tuple[int, int]) -> Tuple[int, int]:
        return pair


class HonestQbcAlice(QbcAlice):
    name = "honest"


class LiftedAliceAttack(QbcAlice):
    """Runs a malicious OT strategy inside OT number k, whose pair is fixed to (0, 0).

    When c != k that OT selected with b, so the OT guess of i is a guess of
    b; otherwise Alice guesses b with a coin.
    """

    def __init__(self, spec: MaliciousAliceSpec, k: int = 0) -> None:
        self.spec = spec
        self.k = check_bit(k, "k")
        self._strategy = SpecAlice(spec)
        self.name = f"lifted-{spec.name}"

    @property
    def key(self) -> Hashable:
        return ("lifted-alice", id(self.spec), self.k)

    def choose_bits(self, ctx: PartyContext) -> Tuple[int, int, int, int]:
        bits = [0, 0, 0, 0]
        other = 1 - self.k
        bits[2 * other] = ctx.coin(f"a{2 * other}")
        bits[2 * other + 1] = ctx.coin(f"a{2 * other + 1}")
        return tuple(bits)

    def ot_strategy(self, index: int, pair: Tuple[int, int]) -> AliceStrategy:
        return self._strategy if index == self.k else HonestAlice(*pair)

    def guess_commitment(self, ctx: PartyContext, c: int, transcripts: Tuple[OtTranscript, OtTranscript]) -> int:
        if c != self.k and transcripts[self.k].alice_guess is not None:
            return transcripts[self.k].alice_guess
        return ctx.coin("guess_b")


class BobDeposit(ABC):
    """Bob's depositing-phase behaviour."""

    name = "deposit"

    @property
    def key(self) -> Hashable:
        return (type(self).__qualname__, id(self))

    def choose(self, ctx: PartyContext, b: int) -> Tuple[int, int]:
        """Return (b', c)."""
        return ctx.coin("b_prime"), ctx.coin("c")

    def ot_strategy(self, index: int, selection: int) -> BobStrategy:
        return HonestBob(selection)


class HonestDeposit(BobDeposit):
    name = "honest"


class LiftedBobDeposit(BobDeposit):
    """Cheats with a malicious OT strategy in OT number k and reveals c = 1 - k,
    so the cheated OT is the one the binding test checks."""

    def __init__(self, spec: MaliciousBobSpec, k: int = 1) -> None:
        self.spec = spec
        self.k = check_bit(k, "k")
        self._strategy = SpecBob(spec)
        self.name = f"lifted-{spec.name}"

    @property
    def key(self) -> Hashable:
        return ("lifted-bob", id(self.spec), self.k)

    def choose(self, ctx: PartyContext, b: int) -> Tuple[int, int]:
        return ctx.coin("b_prime"), 1 - self.k

    def ot_strategy(self, index: int, selection: int) -> BobStrategy:
        return self._strategy if index == self.k else HonestBob(selection)


class BobOpening(ABC):
    """Bob's revealing-phase behaviour."""

    name = "opening"

    @abstractmethod
    def open(self, ctx: PartyContext, commitment: BobCommitment) -> Tuple[int, int]:
        """Return (revealed b, v_{1-c})."""


class HonestOpening(BobOpening):
    name = "open-b"

    def open(self, ctx: PartyContext, commitment: BobCommitment) -> Tuple[int, int]:
        other = 1 - commitment.c
        return commitment.b, commitment.ot_transcripts[other].bob_value(commitment.b)


class FlipOpening(BobOpening):
    """Reveals 1 - b but sends the honestly received v_{1-c}."""

    name = "flip"

    def open(self, ctx: PartyContext, commitment: BobCommitment) -> Tuple[int, int]:
        other = 1 - commitment.c
        return 1 - commitment.b, commitment.ot_transcripts[other].bob_value(commitment.b)


class GuessOpening(BobOpening):
    """Opens the value v using Bob's knowledge of bit v of the binding OT's pair."""

    def __init__(self, v: int) -> None:
        self.v = check_bit(v, "v")
        self.name = f"open-{self.v}"

    def open(self, ctx: PartyContext, commitment: BobCommitment) -> Tuple[int, int]:
        other = 1 - commitment.c
        return self.v, commitment.ot_transcripts[other].bob_value(self.v)


@dataclass(frozen=True)
class QbcBob:
    deposit: BobDeposit
    opening: BobOpening

    @classmethod
    def honest(cls) -> "QbcBob":
        return cls(HonestDeposit(), HonestOpening())


OtRunner = Callable[[AliceStrategy, BobStrategy, int, Sampler], OtTranscript]


class SampledOtRunner:
    """Runs each OT on its own stream derived from the master seed."""

    def __init__(self, master_seed: int) -> None:
        self.master_seed = int(master_seed)

    def __call__(self, alice: AliceStrategy, bob: BobStrategy, index: int, sampler: Sampler) -> OtTranscript:
        return run_ot(alice, bob, rng=derive_seed(self.master_seed, OT_STREAMS[index]))


class ExactOtRunner:
    """Replaces an OT run by a draw from its exact leaf distribution.

    Leaves are memoised per strategy key.  Unless `detailed` is set, leaves
    that agree on Bob's output, Bob's guesses and Alice's guess are merged
    and their representative keeps only those fields and m.
    """

    def __init__(self, detailed: bool = False) -> None:
        self.detailed = detailed
        self._cache: Dict[Hashable, List[Tuple[float, OtTranscript]]] = {}

    def leaves(self, alice: AliceStrategy, bob: BobStrategy) -> List[Tuple[float, OtTranscript]]:
        key = (alice.key, bob.key)
        if key not in self._cache:
            branches = ot_branches(alice, bob)
            if self.detailed:
                self._cache[key] = [(leaf.probability, leaf.value) for leaf in branches]
            else:
                merged: Dict[Tuple, List] = {}
                for leaf in branches:
                    t = leaf.value
                    group = (t.bob_output, t.bob_guesses, t.alice_guess)
                    if group not in merged:
                        merged[group] = [
                            0.0,
                            dataclasses.replace(
                                t, alice_secrets=None, bob_secrets=None, n=None, alice_view=(), bob_view=()
                            ),
                        ]
                    merged[group][0] += leaf.probability
                self._cache[key] = [(p, t) for p, t in merged.values()]
        return self._cache[key]

    def __call__(self, alice: AliceStrategy, bob: BobStrategy, index: int, sampler: Sampler) -> OtTranscript:
        leaves = self.leaves(alice, bob)
        probabilities = [p for p, _ in leaves]
        total = sum(probabilities)
        choice = sampler.choose(f"ot{index}", [p / total for p in probabilities])
        return leaves[choice][1]


def _master_seed(rng: RngLike) -> int:
    if isinstance(rng, np.random.Generator) or rng is None:
        return int(as_generator(rng).integers(0, 2 ** 63))
    return int(rng)


def run_qbc(
    b: int,
    alice: Optional[QbcAlice] = None,
    bob: Optional[QbcBob] = None,
    rng: RngLike = None,
    *,
    sampler: Optional[Sampler] = None,
    ot_runner: Optional[OtRunner] = None,
) -> QbcTranscript:
    """Commit to `b` and open it.

    Args:
        b: Bob's committed bit.
        alice: Alice's behaviour; honest when None.
        bob: Bob's deposit and opening; honest when None.
        rng: Master seed or generator for a Monte Carlo run.
        sampler: Explicit sampler for the classical choices (exact enumeration).
        ot_runner: How each OT is executed; defaults to seeded runs for a
            Monte Carlo run and exact leaf draws when `sampler` is given.

    Returns:
        The transcript of the commitment.
    """
    b = check_bit(b, "b")
    alice = alice if alice is not None else HonestQbcAlice()
    bob = bob if bob is not None else QbcBob.honest()
    if sampler is None:
        master = _master_seed(rng)
        sampler = RandomSampler(derive_seed(master, QBC_STREAM))
        ot_runner = ot_runner if ot_runner is not None else SampledOtRunner(master)
    elif ot_runner is None:
        ot_runner = ExactOtRunner()
    alice_ctx = _ClassicalContext("alice", sampler)
    bob_ctx = _ClassicalContext("bob", sampler)

    # Depositing phase.
    a = alice.choose_bits(alice_ctx)
    b_prime, c = bob.deposit.choose(bob_ctx, b)
    inputs = QbcInputs(b, tuple(a), b_prime, c)
    transcripts = []
    for index in (0, 1):
        transcripts.append(
            ot_runner(
                alice.ot_strategy(index, inputs.pair(index)),
                bob.deposit.ot_strategy(index, inputs.selection(index)),
                index,
                sampler,
            )
        )
    ot_transcripts = (transcripts[0], transcripts[1])
    alice_view = (
        tuple(alice_ctx.view),
        ("c", inputs.c),
        tuple(t.alice_view for t in ot_transcripts),
    )
    guess = alice.guess_commitment(alice_ctx, inputs.c, ot_transcripts)

    # Revealing phase.
    commitment = BobCommitment(b, inputs.b_prime, inputs.c, ot_transcripts)
    try:
        revealed_b, v_other = bob.opening.open(bob_ctx, commitment)
        revealed_b = check_bit(revealed_b, "revealed b")
        v_other = check_bit(v_other, "v_(1-c)")
    except (TypeError, ValueError) as e:
        raise ProtocolViolationError(f"Malformed opening from Bob: {e}") from e
    try:
        opened_pair = tuple(check_bit(x, "opened bit") for x in alice.reveal_pair(alice_ctx, inputs.c, inputs.pair(inputs.c)))
    except (TypeError, ValueError) as e:
        raise ProtocolViolationError(f"Malformed pair from Alice: {e}") from e
    if len(opened_pair) != 2:
        raise ProtocolViolationError(f"Alice must open exactly two bits, got {opened_pair!r}")

    vc = ot_transcripts[inputs.c].bob_value(inputs.b_prime)
    sealing = sealing_test(vc, opened_pair, inputs.b_prime)
    binding = binding_test(v_other, inputs.pair(1 - inputs.c), revealed_b)
    return QbcTranscript(
        inputs=inputs,
        ot_transcripts=ot_transcripts,
        c_revealed=inputs.c,
        revealed_b=revealed_b,
        sealing_test=sealing,
        binding_test=binding,
        alice_verdict=revealed_b if binding == PASS else ERR,
        bob_verdict=OK if sealing == PASS else ERR,
        alice_guess=None if guess is None else check_bit(guess, "guess of b"),
        alice_view=alice_view,
    )


def qbc_branches(
    b: int,
    alice: Optional[QbcAlice] = None,
    bob: Optional[QbcBob] = None,
    *,
    ot_runner: Optional[ExactOtRunner] = None,
) -> List[Branch[QbcTranscript]]:
    """Every branch of positive probability of one commitment."""
    runner = ot_runner if ot_runner is not None else ExactOtRunner()
    return enumerate_branches(lambda sampler: run_qbc(b, alice, bob, sampler=sampler, ot_runner=runner))
