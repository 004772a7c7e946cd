"""Tests for exact statistics, Monte Carlo cross-checks and the bound sweeps."""

import json
import math

import pytest

import cheatsense.analysis
from cheatsense.adversaries import (
    alice_attack,
    bob_attack,
    bob_attack_constants,
    honest_equivalent_alice,
    honest_equivalent_bob,
    random_alice_family,
    random_bob_family,
)
from cheatsense.analysis import (
    MONTE_CARLO_TRIALS,
    RESEED_LABEL,
    Frequency,
    compare_with_exact,
    cross_check_frequencies,
    cross_check_ot,
    default_lambda_family,
    estimate_lambda,
    exact_ot_stats,
    honest_flip_strategy,
    input_distribution,
    lemma1_row,
    lemma2_row,
    lift_bob_spec,
    monte_carlo_ot,
    verify_akn,
    verify_lambda,
    verify_lemma1,
    verify_lemma2,
    verify_sealing,
)
from cheatsense.branching import derive_seed
from cheatsense.exceptions import InvalidArgumentError
from cheatsense.ot import OtInputs
from cheatsense.quantum import random_povm

from .conftest import log_report, log_violations


def test_input_distribution_forms() -> None:
    uniform = input_distribution()
    assert len(uniform) == 8
    assert sum(w for _, w in uniform) == pytest.approx(1.0)
    single = OtInputs(1, 0, 1)
    assert input_distribution(single) == [(single, 1.0)]
    weighted = input_distribution([(OtInputs(0, 0, 0), 0.25), (OtInputs(1, 1, 1), 0.75)])
    assert [w for _, w in weighted] == [0.25, 0.75]
    with pytest.raises(InvalidArgumentError):
        input_distribution([])
    with pytest.raises(InvalidArgumentError):
        input_distribution([(OtInputs(0, 0, 0), 0.5), (OtInputs(1, 1, 1), 0.6)])


def test_single_input_statistics() -> None:
    stats = exact_ot_stats(inputs=OtInputs(0, 1, 1))
    assert stats.bob_error_prob == 0.0
    assert stats.bob_pair_stats["a1_correct"] == pytest.approx(1.0)
    assert stats.bob_pair_stats["a0_correct"] == pytest.approx(0.5)
    assert set(stats.branch_table["i"]) == {1}


def test_frequency_interval() -> None:
    f = Frequency(successes=50, trials=100)
    assert f.estimate == 0.5
    low, high = f.interval(0.5, sigmas=2.0)
    assert (low, high) == pytest.approx((0.4, 0.6))
    assert f.within(0.5)
    assert not Frequency(successes=99, trials=100).within(0.5)
    assert math.isnan(Frequency().estimate)


def test_monte_carlo_is_reproducible_and_checked() -> None:
    first = monte_carlo_ot(trials=200, seed=9)
    second = monte_carlo_ot(trials=200, seed=9)
    assert first.estimates() == second.estimates()
    assert first.estimates()["bob_correct"] == 1.0
    rows = compare_with_exact(first, exact_ot_stats())
    assert [r["quantity"] for r in rows] == ["bob_correct"]
    assert rows[0]["within"]
    with pytest.raises(InvalidArgumentError):
        monte_carlo_ot(trials=0)


def test_cross_check_alice_attack() -> None:
    spec = alice_attack(0.04)
    rows = cross_check_ot(spec, trials=2000, seed=1)
    assert {r["quantity"] for r in rows} == {"bob_correct", "alice_correct"}
    assert all(r["within"] for r in rows)
    assert all(r["trials"] == 2000 for r in rows)


def test_cross_check_bob_attack() -> None:
    inputs = [OtInputs(a0, a1, 0) for a0 in (0, 1) for a1 in (0, 1)]
    rows = cross_check_ot(bob=bob_attack(0.09), inputs=inputs, trials=2000, seed=2)
    assert {r["quantity"] for r in rows} == {"a0_correct", "a1_correct"}
    assert all(r["within"] for r in rows)


@pytest.mark.parametrize("epsilon", [0.01, 0.04, 0.09])
def test_lemma1_row_for_explicit_attack(epsilon: float) -> None:
    row = lemma1_row(alice_attack(epsilon))
    assert row["best_pair"] == "00"
    assert row["eps_fail"] == pytest.approx(epsilon / 2, abs=1e-9)
    assert row["holds"]
    assert row["view_bound_holds"]
    assert row["witness"]
    assert row["within_ceiling"]
    assert row["required_failure"] <= row["eps_fail"]


def test_lemma1_row_for_honest_equivalent() -> None:
    row = lemma1_row(honest_equivalent_alice())
    assert row["eps_fail"] == pytest.approx(0.0, abs=1e-12)
    assert row["delta"] == pytest.approx(0.0, abs=1e-12)
    assert row["holds"]
    assert "witness" not in row


def test_verify_lemma1_small_family() -> None:
    report = verify_lemma1(random_alice_family(4, 3))
    log_report(report)
    log_violations(report, columns=["spec", "eps_fail", "delta", "bound"])
    assert report.passed
    assert len(report.rows) == 7
    assert report.metadata["family_size"] == 7
    with pytest.raises(InvalidArgumentError):
        verify_lemma1([])


@pytest.mark.parametrize("epsilon", [0.01, 0.04, 0.09])
def test_lemma2_row_for_explicit_attack(epsilon: float) -> None:
    row = lemma2_row(bob_attack(epsilon))
    constants = bob_attack_constants(epsilon)
    assert row["better_bit"] == 0
    assert row["eps"] == pytest.approx(math.sqrt(constants["a0_error"]), abs=1e-9)
    assert row["witness"]
    assert row["holds"]
    assert row["m0_probability"] == pytest.approx(0.5, abs=1e-9)
    assert row["advantage_ratio"] == pytest.approx(math.sqrt(2) / 8, abs=1e-9)


def test_lemma2_row_for_honest_equivalent() -> None:
    row = lemma2_row(honest_equivalent_bob())
    assert row["a0_correct"] == pytest.approx(1.0)
    assert row["other_correct"] == pytest.approx(0.5)
    assert row["eps"] == pytest.approx(0.0, abs=1e-7)


def test_verify_lemma2_small_family() -> None:
    report = verify_lemma2(random_bob_family(5, 2))
    log_report(report)
    assert report.passed
    assert len(report.rows) == 6


def test_verify_sealing() -> None:
    report = verify_sealing((0.04,))
    log_report(report)
    assert report.passed
    honest, attack = report.rows
    assert honest["strategy"] == "honest"
    assert honest["detection"] == pytest.approx(0.0, abs=1e-12)
    assert attack["epsilon"] == 0.04
    assert attack["detection"] == pytest.approx(0.01, abs=1e-9)
    assert attack["within_4_sqrt_detection"]
    assert attack["within_4_sqrt_2_detection"]


def test_estimate_lambda_on_known_strategies() -> None:
    epsilon = 0.04
    family = [honest_flip_strategy(), lift_bob_spec(bob_attack(epsilon))]
    estimate = estimate_lambda(family)
    assert estimate.relevant_count == 2
    flip = estimate.frontier.iloc[0]
    assert flip["p0"] == pytest.approx(1.0)
    assert flip["q1"] == pytest.approx(0.5)
    assert flip["max_err"] == pytest.approx(0.5)
    expected = 0.5 - bob_attack_constants(epsilon)["a1_advantage"]
    assert estimate.lambda_est == pytest.approx(expected, abs=1e-9)
    with pytest.raises(InvalidArgumentError):
        estimate_lambda([])


def test_verify_lambda_records_estimate() -> None:
    family = default_lambda_family(seed=0, count=2, epsilon_grid=(0.04,))
    assert [m.name for m in family[:2]] == ["lifted-bob-attack(eps=0.04)", "honest-commit-0-flip"]
    report = verify_lambda(family)
    log_report(report)
    assert report.passed
    assert report.metadata["lambda_est"] > 0
    assert report.metadata["relevant_strategies"] >= 2
    assert len(report.rows) == len(family)


def test_verify_akn_small(tmp_path) -> None:
    report = verify_akn(seed=3, pairs=5, povms=10, max_dim=4)
    assert report.passed
    assert len(report.rows) == 5
    assert all(2 <= r["dim"] <= 4 for r in report.rows)
    path = report.write(str(tmp_path / "akn.json"), "json", {"seed": 3})
    data = json.loads((tmp_path / "akn.json").read_text(encoding="utf-8"))
    assert path.endswith("akn.json")
    assert data["config"] == {"seed": 3}
    assert data["metadata"]["verifier"] == "akn"
    with pytest.raises(InvalidArgumentError):
        verify_akn(pairs=0)


def test_report_csv_output(tmp_path) -> None:
    report = verify_sealing((0.01,))
    path = report.write(str(tmp_path / "out" / "sealing.csv"), "csv")
    header = (tmp_path / "out" / "sealing.csv").read_text(encoding="utf-8").splitlines()[0]
    assert path.endswith("sealing.csv")
    assert header.split(",")[:2] == ["strategy", "epsilon"]
    with pytest.raises(InvalidArgumentError):
        report.write(str(tmp_path / "x.txt"), "txt")


def test_frequency_check_reruns_once_on_derived_seed() -> None:
    calls = []

    def sample(seed: int) -> dict:
        calls.append(seed)
        hits = 90 if seed == 5 else 50
        return {"coin": Frequency(successes=hits, trials=100)}

    rows = cross_check_frequencies({"coin": 0.5}, sample, seed=5)
    assert calls == [5, derive_seed(5, RESEED_LABEL)]
    assert rows[0]["reseeded"]
    assert rows[0]["within"]
    assert rows[0]["seed"] == calls[1]

    calls.clear()
    rows = cross_check_frequencies({"coin": 0.5}, sample, seed=6)
    assert calls == [6]
    assert not rows[0]["reseeded"]


def test_akn_draws_fresh_povms_per_pair(monkeypatch) -> None:
    draws = []

    def counting_povm(dim, outcomes, rng):
        draws.append(dim)
        return random_povm(dim, outcomes, rng)

    monkeypatch.setattr(cheatsense.analysis, "random_povm", counting_povm)
    report = verify_akn(seed=11, pairs=3, povms=4, max_dim=2)
    assert report.passed
    assert draws == [2] * 12
    assert report.metadata["distinct_povms"] == 12


def test_monte_carlo_default_sample_size() -> None:
    assert MONTE_CARLO_TRIALS == 100_000
    rows = cross_check_ot(alice_attack(0.04), seed=1)
    assert all(r["trials"] == MONTE_CARLO_TRIALS for r in rows)
    assert all(r["within"] for r in rows)


def test_lemma1_sweep_over_two_hundred_strategies() -> None:
    report = verify_lemma1(random_alice_family(1, 200))
    log_report(report)
    log_violations(report, columns=["spec", "eps_fail", "delta", "bound"])
    assert len(report.rows) == 204
    assert report.passed


def test_lemma2_sweep_over_two_hundred_strategies() -> None:
    report = verify_lemma2(random_bob_family(1, 200))
    log_report(report)
    assert len(report.rows) == 204
    assert report.passed


def test_lambda_over_default_family() -> None:
    family = default_lambda_family()
    report = verify_lambda(family)
    log_report(report)
    assert len(report.rows) == len(family)
    assert report.passed
    assert report.metadata["lambda_est"] > 0


def test_akn_suite_at_full_size() -> None:
    report = verify_akn()
    log_report(report)
    assert len(report.rows) == 1000
    assert report.metadata["distinct_povms"] == 100_000
    assert report.passed
