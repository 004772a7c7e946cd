"""Tests for the bit commitment built on two OT runs."""

import numpy as np
import pytest

from cheatsense.adversaries import alice_attack, bob_attack, bob_attack_constants
from cheatsense.analysis import exact_ot_stats, qbc_sealing_stats, qbc_stats, qbc_view_distance, qbc_view_distribution
from cheatsense.exceptions import AccessViolationError, InvalidArgumentError, ProtocolViolationError
from cheatsense.qbc import (
    ERR,
    FAIL,
    OK,
    PASS,
    BobOpening,
    ExactOtRunner,
    FlipOpening,
    GuessOpening,
    HonestDeposit,
    HonestOpening,
    HonestQbcAlice,
    LiftedAliceAttack,
    LiftedBobDeposit,
    QbcBob,
    QbcInputs,
    binding_test,
    qbc_branches,
    run_qbc,
    sealing_test,
)
from cheatsense.quantum import PAULI_X

from .conftest import log_stats


class _BadOpening(BobOpening):
    def open(self, ctx, commitment):
        return commitment.b, 2


class _ShortPairAlice(HonestQbcAlice):
    def reveal_pair(self, ctx, c, pair):
        return pair[:1]


class _QuantumAlice(HonestQbcAlice):
    def choose_bits(self, ctx):
        ctx.apply(PAULI_X, ["msg0"])
        return (0, 0, 0, 0)


def test_test_functions_compare_with_ideal_ot() -> None:
    assert sealing_test(1, (0, 1), 1) == PASS
    assert sealing_test(0, (0, 1), 1) == FAIL
    assert binding_test(0, (0, 1), 0) == PASS
    assert binding_test(0, (0, 1), 1) == FAIL
    with pytest.raises(InvalidArgumentError):
        sealing_test(2, (0, 1), 0)
    with pytest.raises(InvalidArgumentError):
        binding_test(0, (0, 1), None)


def test_inputs_route_selections() -> None:
    inputs = QbcInputs(1, (0, 1, 1, 0), 0, 1)
    assert inputs.pair(0) == (0, 1)
    assert inputs.pair(1) == (1, 0)
    assert inputs.selection(1) == 0
    assert inputs.selection(0) == 1
    with pytest.raises(InvalidArgumentError):
        QbcInputs(0, (0, 1, 1), 0, 0)
    with pytest.raises(InvalidArgumentError):
        QbcInputs(0, (0, 1, 1, 0), 2, 0)


@pytest.mark.parametrize("b", [0, 1])
def test_honest_commitment_always_opens(b: int) -> None:
    leaves = qbc_branches(b)
    assert sum(leaf.probability for leaf in leaves) == pytest.approx(1.0)
    for leaf in leaves:
        t = leaf.value
        assert t.alice_verdict == b
        assert t.bob_verdict == OK
        assert t.sealing_test == PASS
        assert t.binding_test == PASS
        assert t.alice_guess is None


def test_honest_monte_carlo_run() -> None:
    t = run_qbc(1, rng=42)
    assert t.revealed_b == 1
    assert t.outcome().committed_value_opened == 1
    assert not t.outcome().alice_detected_cheat
    assert not t.outcome().bob_detected_cheat
    assert run_qbc(1, rng=42) == t


def test_guess_openings_against_honest_deposit() -> None:
    stats = qbc_stats()
    log_stats("honest-deposit", stats)
    assert stats.p0 == pytest.approx(1.0)
    assert stats.p_err == pytest.approx(0.0, abs=1e-12)
    assert stats.q1 == pytest.approx(0.5)
    assert stats.q_err == pytest.approx(0.5)
    assert stats.max_error == pytest.approx(0.5)
    assert stats.bob_detection_prob == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("b", [0, 1])
def test_flip_opening_is_caught_half_the_time(b: int) -> None:
    stats = qbc_stats(HonestDeposit(), HonestOpening(), FlipOpening(), b=b)
    assert stats.p_err == pytest.approx(0.0, abs=1e-12)
    assert stats.q_err == pytest.approx(0.5)
    assert (stats.q0, stats.q1)[1 - b] == pytest.approx(0.5)


def test_honest_sealing_stats() -> None:
    stats = qbc_sealing_stats()
    assert stats.advantage == pytest.approx(0.0, abs=1e-12)
    assert stats.detection == pytest.approx(0.0, abs=1e-12)
    assert stats.holds


@pytest.mark.parametrize("epsilon", [0.01, 0.04])
def test_lifted_alice_attack(epsilon: float) -> None:
    spec = alice_attack(epsilon)
    stats = qbc_sealing_stats(LiftedAliceAttack(spec))
    delta = exact_ot_stats(spec).alice_advantage
    assert stats.advantage == pytest.approx(delta / 2, abs=1e-9)
    assert stats.detection == pytest.approx(epsilon / 4, abs=1e-9)
    assert stats.detection >= stats.quadratic_bound
    assert stats.holds


def test_lifted_alice_attack_fixes_cheated_pair() -> None:
    alice = LiftedAliceAttack(alice_attack(0.04), k=1)
    for leaf in qbc_branches(0, alice):
        assert leaf.value.inputs.pair(1) == (0, 0)
        assert leaf.value.alice_guess in (0, 1)


def test_lifted_bob_deposit() -> None:
    epsilon = 0.04
    deposit = LiftedBobDeposit(bob_attack(epsilon))
    for leaf in qbc_branches(0, None, QbcBob(deposit, GuessOpening(1))):
        assert leaf.value.c_revealed == 0
    stats = qbc_stats(deposit, GuessOpening(0), GuessOpening(1))
    constants = bob_attack_constants(epsilon)
    assert stats.p_err == pytest.approx(constants["a0_error"], abs=1e-9)
    assert stats.q_err == pytest.approx(0.5 - constants["a1_advantage"], abs=1e-9)
    assert stats.bob_detection_prob == pytest.approx(0.0, abs=1e-12)


def test_exact_runner_memoises_leaves() -> None:
    runner = ExactOtRunner()
    alice = HonestQbcAlice()
    qbc_branches(0, alice, ot_runner=runner)
    cached = len(runner._cache)
    qbc_branches(1, alice, ot_runner=runner)
    assert len(runner._cache) == cached
    assert all(abs(sum(p for p, _ in leaves) - 1.0) < 1e-9 for leaves in runner._cache.values())


def test_detailed_runner_keeps_secrets() -> None:
    runner = ExactOtRunner(detailed=True)
    leaf = qbc_branches(0, ot_runner=runner)[0]
    assert leaf.value.ot_transcripts[0].alice_secrets is not None
    merged = qbc_branches(0)[0]
    assert merged.value.ot_transcripts[0].alice_secrets is None


def test_malformed_opening_is_rejected() -> None:
    with pytest.raises(ProtocolViolationError):
        run_qbc(0, bob=QbcBob(HonestDeposit(), _BadOpening()), rng=0)


def test_malformed_pair_is_rejected() -> None:
    with pytest.raises(ProtocolViolationError):
        run_qbc(0, alice=_ShortPairAlice(), rng=0)


def test_classical_steps_hold_no_registers() -> None:
    with pytest.raises(AccessViolationError):
        run_qbc(0, alice=_QuantumAlice(), rng=0)


def test_generator_seed_is_accepted() -> None:
    t = run_qbc(0, rng=np.random.default_rng(3))
    assert t.alice_verdict == 0
    assert t.bob_verdict == OK
    assert ERR not in (t.alice_verdict, t.bob_verdict)


def _summed_views(b: int) -> dict:
    views: dict = {}
    for leaf in qbc_branches(b, ot_runner=ExactOtRunner(detailed=True)):
        views[leaf.value.alice_view] = views.get(leaf.value.alice_view, 0.0) + leaf.probability
    return views


def test_alice_view_before_reveal_is_independent_of_b() -> None:
    views0, views1 = _summed_views(0), _summed_views(1)
    assert sum(views0.values()) == pytest.approx(1.0)
    assert len(views0) > 2
    keys = set(views0) | set(views1)
    assert sum(abs(views0.get(k, 0.0) - views1.get(k, 0.0)) for k in keys) <= 1e-12


def test_view_distribution_keeps_ot_views() -> None:
    detailed = qbc_view_distribution(0)
    assert all(view[2][0] != () for view in detailed)
    merged = qbc_branches(0)[0]
    assert merged.value.alice_view[2][0] == ()


@pytest.mark.parametrize("bob", [None, QbcBob(HonestDeposit(), FlipOpening())])
def test_view_distance_is_zero_against_honest_deposit(bob) -> None:
    assert qbc_view_distance(bob=bob) == pytest.approx(0.0, abs=1e-12)
