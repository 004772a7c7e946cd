"""Exact and sampled statistics of the protocols, and the bound checks built on them.

Exact numbers come from enumerating every classical branch of a run (see
`cheatsense.branching`); Monte Carlo runs exist to cross-check the sampling
path against them.  Sweep functions return `SweepReport` objects whose rows
are flat dicts, ready for CSV or JSON.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .adversaries import (
    DEFAULT_EPSILON_GRID,
    MaliciousAliceSpec,
    MaliciousBobSpec,
    alice_attack,
    bob_attack,
    bob_attack_constants,
    random_bob_family,
)
from .base import AliceStrategy, BobStrategy, SweepReport
from .branching import RngLike, as_generator, derive_seed, spawn_generators
from .exceptions import InvalidArgumentError
from .ot import AliceFactory, BobFactory, OtInputs, honest_alice_factory, honest_bob_factory, ot_branches, run_ot
from .qbc import (
    ERR,
    BobDeposit,
    BobOpening,
    ExactOtRunner,
    FlipOpening,
    GuessOpening,
    HonestDeposit,
    HonestOpening,
    LiftedAliceAttack,
    LiftedBobDeposit,
    QbcAlice,
    QbcBob,
    qbc_branches,
)
from .quantum import (
    ATOL,
    helstrom_measurement,
    random_density_matrix,
    random_povm,
    trace_norm,
)

logger = logging.getLogger(__name__)

#: Slack allowed on every bound check.
BOUND_TOL = 1e-9
#: Width of Monte Carlo acceptance intervals, in standard deviations.
SIGMAS = 4.0
#: Default sample size of a Monte Carlo cross-check.
MONTE_CARLO_TRIALS = 100_000
#: Stream label for the single re-run after a failed interval check.
RESEED_LABEL = 0x00C0_FFEE
#: |p0 - q0| above which a Bob strategy counts as opening both values.
LAMBDA_RELEVANCE = 0.1

BRANCH_COLUMNS = [
    "a0",
    "a1",
    "i",
    "a_i",
    "weight",
    "branch_probability",
    "probability",
    "alpha",
    "h",
    "beta",
    "n",
    "m",
    "bob_output",
    "a0_guess",
    "a1_guess",
    "alice_guess",
    "alice_view",
]

InputsLike = Union[None, OtInputs, Sequence[OtInputs], Sequence[Tuple[OtInputs, float]]]


def input_distribution(inputs: InputsLike = None) -> List[Tuple[OtInputs, float]]:
    """Normalise `inputs` to (inputs, weight) pairs; None means all eight inputs, uniform."""
    if inputs is None:
        items: List[Any] = list(OtInputs.all())
    elif isinstance(inputs, OtInputs):
        return [(inputs, 1.0)]
    else:
        items = list(inputs)
    if not items:
        raise InvalidArgumentError("Input distribution must not be empty")
    if all(isinstance(x, OtInputs) for x in items):
        return [(x, 1.0 / len(items)) for x in items]
    pairs = [(x, float(w)) for x, w in items]
    if any(w < 0 for _, w in pairs) or abs(sum(w for _, w in pairs) - 1.0) > ATOL:
        raise InvalidArgumentError("Input weights must be non-negative and sum to one")
    return pairs


def _alice_factory(alice: Union[AliceFactory, AliceStrategy, MaliciousAliceSpec]) -> AliceFactory:
    if isinstance(alice, MaliciousAliceSpec):
        return alice.as_factory()
    if isinstance(alice, AliceStrategy):
        return lambda inputs: alice
    return alice


def _bob_factory(bob: Union[BobFactory, BobStrategy, MaliciousBobSpec]) -> BobFactory:
    if isinstance(bob, MaliciousBobSpec):
        return bob.as_factory()
    if isinstance(bob, BobStrategy):
        return lambda inputs: bob
    return bob


def _l1(p: Dict[Any, float], q: Dict[Any, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


@dataclass
class ExactOtStats:
    """Exact statistics of one OT strategy pairing.

    Attributes:
        bob_error_prob: Prob[a' != a_i] when Bob outputs a bit, else None.
        alice_advantage: Prob[i' = i] - 1/2; a missing guess counts 1/2.
            None when Alice never guesses.
        alice_bias: Prob[i' = 0 | i = 0] - Prob[i' = 0 | i = 1].
        bob_pair_stats: Prob[a0' = a0] and Prob[a1' = a1]; a bit Bob has no
            value for counts 1/2.
        branch_table: One row per (inputs, branch).
        alice_view_distance: L1 distance of Alice's view given i = 0 and i = 1.
        m_distribution: Marginal distribution of the message m.
    """

    bob_error_prob: Optional[float]
    alice_advantage: Optional[float]
    alice_bias: Optional[float]
    bob_pair_stats: Dict[str, float]
    branch_table: pd.DataFrame
    alice_view_distance: float
    m_distribution: Dict[int, float] = field(default_factory=dict)

    def per_pair_failure(self) -> Dict[Tuple[int, int], float]:
        """Prob[a' != a_i] for each (a0, a1) pair present in the table."""
        frame = self.branch_table
        failed = (frame["bob_output"] != frame["a_i"]).astype(float) * frame["probability"]
        keys = [frame["a0"], frame["a1"]]
        ratio = failed.groupby(keys).sum() / frame["probability"].groupby(keys).sum()
        return {(int(a0), int(a1)): float(v) for (a0, a1), v in ratio.items()}

    def per_pair_advantage(self) -> Dict[Tuple[int, int], float]:
        """Alice's advantage for each (a0, a1) pair, with i weighted as in the table."""
        frame = self.branch_table
        credit = frame.apply(
            lambda r: 0.5 if pd.isna(r["alice_guess"]) else float(r["alice_guess"] == r["i"]), axis=1
        )
        keys = [frame["a0"], frame["a1"]]
        ratio = (credit * frame["probability"]).groupby(keys).sum() / frame["probability"].groupby(keys).sum()
        return {(int(a0), int(a1)): float(v) - 0.5 for (a0, a1), v in ratio.items()}


def exact_ot_stats(
    alice: Union[AliceFactory, AliceStrategy, MaliciousAliceSpec] = honest_alice_factory,
    bob: Union[BobFactory, BobStrategy, MaliciousBobSpec] = honest_bob_factory,
    inputs: InputsLike = None,
) -> ExactOtStats:
    """Exact statistics by enumerating every branch for every input.

    Args:
        alice: Alice factory, strategy or malicious spec.
        bob: Bob factory, strategy or malicious spec.
        inputs: Input distribution; all eight inputs, uniform, by default.

    Returns:
        The aggregated statistics and the full branch table.
    """
    alice_factory, bob_factory = _alice_factory(alice), _bob_factory(bob)
    rows: List[Dict[str, Any]] = []
    for inp, weight in input_distribution(inputs):
        if weight <= 0:
            continue
        for leaf in ot_branches(alice_factory(inp), bob_factory(inp)):
            t = leaf.value
            guesses = t.bob_guesses
            if guesses is not None:
                a0_guess, a1_guess = guesses
            else:
                a0_guess = t.bob_output if inp.i == 0 else None
                a1_guess = t.bob_output if inp.i == 1 else None
            rows.append(
                {
                    "a0": inp.a0,
                    "a1": inp.a1,
                    "i": inp.i,
                    "a_i": inp.selected,
                    "weight": weight,
                    "branch_probability": leaf.probability,
                    "probability": weight * leaf.probability,
                    "alpha": t.alice_secrets.alpha if t.alice_secrets else None,
                    "h": t.alice_secrets.h if t.alice_secrets else None,
                    "beta": t.bob_secrets.beta if t.bob_secrets else None,
                    "n": t.n,
                    "m": t.m,
                    "bob_output": t.bob_output,
                    "a0_guess": a0_guess,
                    "a1_guess": a1_guess,
                    "alice_guess": t.alice_guess,
                    "alice_view": repr(t.alice_view),
                }
            )

    output_mass = sum(r["probability"] for r in rows if r["bob_output"] is not None)
    bob_error = None
    if output_mass > 0:
        bob_error = sum(
            r["probability"] for r in rows if r["bob_output"] is not None and r["bob_output"] != r["a_i"]
        ) / output_mass

    def credit(guess: Optional[int], truth: int) -> float:
        return 0.5 if guess is None else float(guess == truth)

    pair_stats = {
        "a0_correct": sum(r["probability"] * credit(r["a0_guess"], r["a0"]) for r in rows),
        "a1_correct": sum(r["probability"] * credit(r["a1_guess"], r["a1"]) for r in rows),
    }

    guessing = any(r["alice_guess"] is not None for r in rows)
    advantage = None
    bias = None
    if guessing:
        advantage = sum(r["probability"] * credit(r["alice_guess"], r["i"]) for r in rows) - 0.5
        conditional = {}
        for i in (0, 1):
            mass = sum(r["probability"] for r in rows if r["i"] == i)
            if mass > 0:
                conditional[i] = sum(r["probability"] * credit(r["alice_guess"], 0) for r in rows if r["i"] == i) / mass
        if len(conditional) == 2:
            bias = conditional[0] - conditional[1]

    views: Dict[int, Dict[str, float]] = {0: defaultdict(float), 1: defaultdict(float)}
    for r in rows:
        views[r["i"]][r["alice_view"]] += r["probability"]
    for i in (0, 1):
        mass = sum(views[i].values())
        views[i] = {k: v / mass for k, v in views[i].items()} if mass > 0 else {}
    view_distance = _l1(views[0], views[1]) if views[0] and views[1] else 0.0

    m_distribution: Dict[int, float] = defaultdict(float)
    for r in rows:
        m_distribution[r["m"]] += r["probability"]

    return ExactOtStats(
        bob_error_prob=bob_error,
        alice_advantage=advantage,
        alice_bias=bias,
        bob_pair_stats=pair_stats,
        branch_table=pd.DataFrame(rows, columns=BRANCH_COLUMNS),
        alice_view_distance=view_distance,
        m_distribution=dict(m_distribution),
    )


@dataclass
class Frequency:
    """Count of successes over trials."""

    successes: int = 0
    trials: int = 0

    @property
    def estimate(self) -> float:
        return self.successes / self.trials if self.trials else float("nan")

    def interval(self, p: float, sigmas: float = SIGMAS) -> Tuple[float, float]:
        half = sigmas * math.sqrt(max(p * (1.0 - p), 0.0) / self.trials)
        return p - half, p + half

    def within(self, p: float, sigmas: float = SIGMAS) -> bool:
        low, high = self.interval(p, sigmas)
        return low - 1e-12 <= self.estimate <= high + 1e-12


@dataclass
class MonteCarloOtResult:
    seed: int
    trials: int
    frequencies: Dict[str, Frequency]

    def estimates(self) -> Dict[str, float]:
        return {name: f.estimate for name, f in self.frequencies.items()}


def monte_carlo_ot(
    alice: Union[AliceFactory, AliceStrategy, MaliciousAliceSpec] = honest_alice_factory,
    bob: Union[BobFactory, BobStrategy, MaliciousBobSpec] = honest_bob_factory,
    inputs: InputsLike = None,
    trials: int = MONTE_CARLO_TRIALS,
    seed: int = 0,
) -> MonteCarloOtResult:
    """Sample `trials` runs, one independent generator per trial.

    Frequencies: ``bob_correct`` (a' = a_i, when Bob outputs), ``alice_correct``
    (i' = i, when Alice guesses) and ``a0_correct`` / ``a1_correct`` (when Bob
    guesses both bits).
    """
    if int(trials) < 1:
        raise InvalidArgumentError(f"trials must be at least 1, got {trials}")
    alice_factory, bob_factory = _alice_factory(alice), _bob_factory(bob)
    distribution = input_distribution(inputs)
    weights = np.array([w for _, w in distribution])
    counts: Dict[str, Frequency] = defaultdict(Frequency)
    for generator in spawn_generators(seed, int(trials)):
        index = int(generator.choice(len(distribution), p=weights)) if len(distribution) > 1 else 0
        inp = distribution[index][0]
        t = run_ot(alice_factory(inp), bob_factory(inp), rng=generator)
        observations = {}
        if t.bob_output is not None:
            observations["bob_correct"] = t.bob_output == inp.selected
        if t.alice_guess is not None:
            observations["alice_correct"] = t.alice_guess == inp.i
        if t.bob_guesses is not None:
            observations["a0_correct"] = t.bob_guesses[0] == inp.a0
            observations["a1_correct"] = t.bob_guesses[1] == inp.a1
        for name, success in observations.items():
            counts[name].trials += 1
            counts[name].successes += int(success)
    return MonteCarloOtResult(seed=int(seed), trials=int(trials), frequencies=dict(counts))


def _exact_counterparts(stats: ExactOtStats) -> Dict[str, Optional[float]]:
    return {
        "bob_correct": None if stats.bob_error_prob is None else 1.0 - stats.bob_error_prob,
        "alice_correct": None if stats.alice_advantage is None else 0.5 + stats.alice_advantage,
        "a0_correct": stats.bob_pair_stats["a0_correct"],
        "a1_correct": stats.bob_pair_stats["a1_correct"],
    }


def compare_with_exact(result: MonteCarloOtResult, stats: ExactOtStats, sigmas: float = SIGMAS) -> List[Dict[str, Any]]:
    """One row per sampled frequency with its exact value and acceptance interval."""
    exact = _exact_counterparts(stats)
    rows = []
    for name, frequency in sorted(result.frequencies.items()):
        p = exact.get(name)
        if p is None or frequency.trials == 0:
            continue
        low, high = frequency.interval(p, sigmas)
        rows.append(
            {
                "quantity": name,
                "exact": p,
                "sampled": frequency.estimate,
                "trials": frequency.trials,
                "low": low,
                "high": high,
                "within": frequency.within(p, sigmas),
                "seed": result.seed,
            }
        )
    return rows


def cross_check_ot(
    alice: Union[AliceFactory, AliceStrategy, MaliciousAliceSpec] = honest_alice_factory,
    bob: Union[BobFactory, BobStrategy, MaliciousBobSpec] = honest_bob_factory,
    inputs: InputsLike = None,
    trials: int = MONTE_CARLO_TRIALS,
    seed: int = 0,
    stats: Optional[ExactOtStats] = None,
) -> List[Dict[str, Any]]:
    """Compare sampled frequencies to exact values; a failed check is re-run once on a fresh stream."""
    exact = stats if stats is not None else exact_ot_stats(alice, bob, inputs)
    rows = compare_with_exact(monte_carlo_ot(alice, bob, inputs, trials, seed), exact)
    if all(r["within"] for r in rows):
        return [{**r, "reseeded": False} for r in rows]
    reseed = derive_seed(seed, RESEED_LABEL)
    logger.info("Monte Carlo check outside %g sigma at seed %d; re-running with seed %d", SIGMAS, seed, reseed)
    rows = compare_with_exact(monte_carlo_ot(alice, bob, inputs, trials, reseed), exact)
    return [{**r, "reseeded": True} for r in rows]


def _frequency_rows(
    exact: Dict[str, float], frequencies: Dict[str, Frequency], seed: int, sigmas: float
) -> List[Dict[str, Any]]:
    rows = []
    for name in sorted(exact):
        frequency = frequencies[name]
        low, high = frequency.interval(exact[name], sigmas)
        rows.append(
            {
                "quantity": name,
                "exact": exact[name],
                "sampled": frequency.estimate,
                "trials": frequency.trials,
                "low": low,
                "high": high,
                "within": frequency.within(exact[name], sigmas),
                "seed": seed,
            }
        )
    return rows


def cross_check_frequencies(
    exact: Dict[str, float],
    sample: Callable[[int], Dict[str, Frequency]],
    seed: int,
    sigmas: float = SIGMAS,
) -> List[Dict[str, Any]]:
    """Same acceptance rule as `cross_check_ot` for any sampler of named frequencies.

    `sample(seed)` runs the experiment on that seed.  A failed check is
    re-run once on the derived seed.
    """
    rows = _frequency_rows(exact, sample(seed), seed, sigmas)
    if all(r["within"] for r in rows):
        return [{**r, "reseeded": False} for r in rows]
    reseed = derive_seed(seed, RESEED_LABEL)
    logger.info("Monte Carlo check outside %g sigma at seed %d; re-running with seed %d", sigmas, seed, reseed)
    rows = _frequency_rows(exact, sample(reseed), reseed, sigmas)
    return [{**r, "reseeded": True} for r in rows]


def alice_attack_floor(epsilon: float) -> float:
    """Lower bound 1/2 sqrt(eps) - 3/2 eps on the distinguishing bias of the explicit attack."""
    return 0.5 * math.sqrt(epsilon) - 1.5 * epsilon


def alice_attack_ceiling(epsilon: float) -> float:
    """Helstrom ceiling 1/4 sqrt(eps (1 - eps)) on the explicit attack's advantage."""
    return 0.25 * math.sqrt(epsilon * (1.0 - epsilon))


def lemma1_row(spec: MaliciousAliceSpec) -> Dict[str, Any]:
    """Failure probability and guessing advantage of one Alice spec against honest Bob."""
    stats = exact_ot_stats(spec, honest_bob_factory, None)
    failures = stats.per_pair_failure()
    advantages = stats.per_pair_advantage()
    best_pair = min(failures, key=lambda pair: (failures[pair], pair))
    eps_fail = failures[best_pair]
    delta = advantages[best_pair]
    bound = 16.0 * math.sqrt(eps_fail)
    row = {
        "spec": spec.name,
        "epsilon": spec.epsilon,
        "best_pair": f"{best_pair[0]}{best_pair[1]}",
        "eps_fail": eps_fail,
        "delta": delta,
        "bias": stats.alice_bias,
        "bound": bound,
        "margin": bound - delta,
        "required_failure": (max(delta, 0.0) / 16.0) ** 2,
        "holds": delta <= bound + BOUND_TOL,
        "view_bound_holds": delta <= 0.5 * stats.alice_view_distance + BOUND_TOL,
    }
    if spec.epsilon is not None and spec.epsilon > 0:
        floor = alice_attack_floor(spec.epsilon)
        ceiling = alice_attack_ceiling(spec.epsilon)
        row.update(
            bias_floor=floor,
            witness=(stats.alice_bias or 0.0) >= floor - BOUND_TOL,
            delta_ceiling=ceiling,
            within_ceiling=delta <= ceiling + BOUND_TOL,
        )
    return row


def verify_lemma1(family: Sequence[MaliciousAliceSpec]) -> SweepReport:
    """Check Prob[i' = i] <= 1/2 + 16 sqrt(eps_fail) on every spec of `family`."""
    if not family:
        raise InvalidArgumentError("Alice family must not be empty")
    rows = []
    for index, spec in enumerate(family, start=1):
        logger.debug("lemma1: evaluating %s (%d/%d)", spec.name, index, len(family))
        rows.append(lemma1_row(spec))
    violations = [r for r in rows if not r["holds"] or not r["view_bound_holds"] or r.get("within_ceiling") is False]
    violations += [r for r in rows if r.get("witness") is False and r not in violations]
    return SweepReport(
        verifier_name="lemma1",
        rows=rows,
        metadata={"family_size": len(family), "tolerance": BOUND_TOL},
        violations=violations,
        message=f"{len(rows)} Alice strategies, {len(violations)} violations",
    )


def lemma2_row(spec: MaliciousBobSpec) -> Dict[str, Any]:
    """Knowledge of both bits for one Bob spec against honest Alice with uniform (a0, a1)."""
    inputs = [OtInputs(a0, a1, 0) for a0 in (0, 1) for a1 in (0, 1)]
    stats = exact_ot_stats(honest_alice_factory, spec, inputs)
    p0, p1 = stats.bob_pair_stats["a0_correct"], stats.bob_pair_stats["a1_correct"]
    better = 0 if p0 >= p1 else 1
    p_good, p_other = max(p0, p1), min(p0, p1)
    eps = math.sqrt(max(1.0 - p_good, 0.0))
    bound = 0.5 + 16.0 * math.sqrt(2.0) * eps
    row = {
        "spec": spec.name,
        "epsilon": spec.epsilon,
        "a0_correct": p0,
        "a1_correct": p1,
        "better_bit": better,
        "eps": eps,
        "other_correct": p_other,
        "bound": bound,
        "margin": bound - p_other,
        "holds": p_other <= bound + BOUND_TOL,
        "m0_probability": stats.m_distribution.get(0, 0.0),
    }
    if spec.epsilon is not None and spec.epsilon > 0:
        constants = bob_attack_constants(spec.epsilon)
        a1_advantage = p1 - 0.5
        row.update(
            a0_error=1.0 - p0,
            a0_error_exact=constants["a0_error"],
            a1_advantage=a1_advantage,
            a1_advantage_exact=constants["a1_advantage"],
            advantage_ratio=a1_advantage / math.sqrt(spec.epsilon),
            ancilla_advantage=constants["ancilla_advantage"],
            witness=abs(a1_advantage - constants["a1_advantage"]) <= 1e-9
            and abs((1.0 - p0) - constants["a0_error"]) <= 1e-9,
        )
    return row


def verify_lemma2(family: Sequence[MaliciousBobSpec]) -> SweepReport:
    """Check Prob[a'_other = a_other] <= 1/2 + 16 sqrt(2) eps on every spec of `family`."""
    if not family:
        raise InvalidArgumentError("Bob family must not be empty")
    rows = []
    for index, spec in enumerate(family, start=1):
        logger.debug("lemma2: evaluating %s (%d/%d)", spec.name, index, len(family))
        rows.append(lemma2_row(spec))
    violations = [r for r in rows if not r["holds"] or r.get("witness") is False]
    return SweepReport(
        verifier_name="lemma2",
        rows=rows,
        metadata={"family_size": len(family), "tolerance": BOUND_TOL},
        violations=violations,
        message=f"{len(rows)} Bob strategies, {len(violations)} violations",
    )


@dataclass
class QbcStats:
    """Exact commitment statistics for one deposit and two openings.

    p0, p1, p_err: Alice's verdict distribution under the "open 0" opening;
    q0, q1, q_err: the same under "open 1".
    """

    p0: float
    p1: float
    p_err: float
    q0: float
    q1: float
    q_err: float
    alice_guess_advantage: float
    bob_detection_prob: float

    @property
    def max_error(self) -> float:
        return max(self.p_err, self.q_err)


def _verdicts(branches) -> Tuple[float, float, float]:
    totals = {0: 0.0, 1: 0.0, ERR: 0.0}
    for leaf in branches:
        totals[leaf.value.alice_verdict] += leaf.probability
    return totals[0], totals[1], totals[ERR]


def _guess_and_detection(branches, b: int) -> Tuple[float, float]:
    correct = 0.0
    detected = 0.0
    for leaf in branches:
        t = leaf.value
        correct += leaf.probability * (0.5 if t.alice_guess is None else float(t.alice_guess == b))
        detected += leaf.probability * float(t.bob_verdict == ERR)
    return correct - 0.5, detected


def qbc_stats(
    deposit: Optional[BobDeposit] = None,
    open0: Optional[BobOpening] = None,
    open1: Optional[BobOpening] = None,
    alice: Optional[QbcAlice] = None,
    b: int = 0,
    ot_runner: Optional[ExactOtRunner] = None,
) -> QbcStats:
    """Exact (p0, p1, p_err) and (q0, q1, q_err) for one deposit and its two openings."""
    deposit = deposit if deposit is not None else HonestDeposit()
    open0 = open0 if open0 is not None else GuessOpening(0)
    open1 = open1 if open1 is not None else GuessOpening(1)
    runner = ot_runner if ot_runner is not None else ExactOtRunner()
    first = qbc_branches(b, alice, QbcBob(deposit, open0), ot_runner=runner)
    second = qbc_branches(b, alice, QbcBob(deposit, open1), ot_runner=runner)
    p0, p1, p_err = _verdicts(first)
    q0, q1, q_err = _verdicts(second)
    advantage, detection = _guess_and_detection(first, b)
    return QbcStats(p0, p1, p_err, q0, q1, q_err, advantage, detection)



def qbc_view_distribution(
    b: int, alice: Optional[QbcAlice] = None, bob: Optional[QbcBob] = None
) -> Dict[Any, float]:
    """Exact distribution of Alice's view before the revealing phase, for committed bit `b`.

    Runs the inner OTs with a detailed runner so their views are kept.
    """
    views: Dict[Any, float] = defaultdict(float)
    for leaf in qbc_branches(b, alice, bob, ot_runner=ExactOtRunner(detailed=True)):
        views[leaf.value.alice_view] += leaf.probability
    return dict(views)


def qbc_view_distance(alice: Optional[QbcAlice] = None, bob: Optional[QbcBob] = None) -> float:
    """Half L1 distance between Alice's pre-reveal views for b = 0 and b = 1."""
    return _l1(qbc_view_distribution(0, alice, bob), qbc_view_distribution(1, alice, bob))


@dataclass
class SealingStats:
    advantage: float
    detection: float

    @property
    def quadratic_bound(self) -> float:
        return self.advantage ** 2 / 32.0

    @property
    def holds(self) -> bool:
        return self.detection >= self.quadratic_bound - BOUND_TOL


def qbc_sealing_stats(alice: Optional[QbcAlice] = None, bob: Optional[QbcBob] = None) -> SealingStats:
    """Alice's advantage on a uniform b and the probability Bob's sealing test rejects."""
    runner = ExactOtRunner()
    advantage = 0.0
    detection = 0.0
    for b in (0, 1):
        adv, det = _guess_and_detection(qbc_branches(b, alice, bob, ot_runner=runner), b)
        advantage += 0.5 * adv
        detection += 0.5 * det
    return SealingStats(advantage, detection)


def verify_sealing(epsilon_grid: Sequence[float] = DEFAULT_EPSILON_GRID) -> SweepReport:
    """Sealing sweep: the lifted Alice attack at each epsilon, plus honest Alice."""
    rows = []
    cases: List[Tuple[str, Optional[float], Optional[QbcAlice]]] = [("honest", None, None)]
    cases += [(f"lifted-alice-attack(eps={eps:g})", float(eps), LiftedAliceAttack(alice_attack(eps))) for eps in epsilon_grid]
    for name, eps, alice in cases:
        stats = qbc_sealing_stats(alice)
        rows.append(
            {
                "strategy": name,
                "epsilon": eps,
                "advantage": stats.advantage,
                "detection": stats.detection,
                "quadratic_bound": stats.quadratic_bound,
                "margin": stats.detection - stats.quadratic_bound,
                "holds": stats.holds,
                "within_4_sqrt_detection": abs(stats.advantage) <= 4.0 * math.sqrt(stats.detection) + BOUND_TOL,
                "within_4_sqrt_2_detection": abs(stats.advantage) <= 4.0 * math.sqrt(2.0 * stats.detection) + BOUND_TOL,
            }
        )
    violations = [r for r in rows if not r["holds"] or r["detection"] > 1.0 + BOUND_TOL]
    return SweepReport(
        verifier_name="sealing",
        rows=rows,
        metadata={"epsilon_grid": list(epsilon_grid), "tolerance": BOUND_TOL},
        violations=violations,
        message=f"{len(rows)} sealing rows, {len(violations)} violations",
    )


@dataclass(frozen=True)
class LiftedBob:
    """A deposit with its "open 0" and "open 1" openings."""

    name: str
    deposit: BobDeposit
    open0: BobOpening
    open1: BobOpening
    epsilon: Optional[float] = None


def lift_bob_spec(spec: MaliciousBobSpec, k: int = 1) -> LiftedBob:
    return LiftedBob(f"lifted-{spec.name}", LiftedBobDeposit(spec, k), GuessOpening(0), GuessOpening(1), spec.epsilon)


def honest_flip_strategy() -> LiftedBob:
    """Honest commitment to 0, opened honestly or flipped."""
    return LiftedBob("honest-commit-0-flip", HonestDeposit(), HonestOpening(), FlipOpening())


def default_lambda_family(
    seed: RngLike = 0, count: int = 100, epsilon_grid: Sequence[float] = DEFAULT_EPSILON_GRID
) -> List[LiftedBob]:
    """Explicit Bob attacks, the honest flip baseline and `count` random Bob specs, all lifted."""
    family = [lift_bob_spec(bob_attack(eps)) for eps in epsilon_grid]
    family.append(honest_flip_strategy())
    family += [lift_bob_spec(spec) for spec in random_bob_family(seed, count, epsilon_grid=())]
    return family


@dataclass
class LambdaEstimate:
    """Empirical lower estimate of the binding constant over a finite family."""

    lambda_est: Optional[float]
    frontier: pd.DataFrame
    relevance_threshold: float

    @property
    def relevant_count(self) -> int:
        return int(self.frontier["relevant"].sum()) if not self.frontier.empty else 0


def estimate_lambda(family: Sequence[LiftedBob], relevance: float = LAMBDA_RELEVANCE) -> LambdaEstimate:
    """Minimum of max(p_err, q_err) over the strategies with |p0 - q0| > `relevance`."""
    if not family:
        raise InvalidArgumentError("Lambda family must not be empty")
    rows = []
    for index, member in enumerate(family, start=1):
        logger.debug("lambda: evaluating %s (%d/%d)", member.name, index, len(family))
        stats = qbc_stats(member.deposit, member.open0, member.open1)
        rows.append(
            {
                "strategy": member.name,
                "epsilon": member.epsilon,
                "p0": stats.p0,
                "p1": stats.p1,
                "p_err": stats.p_err,
                "q0": stats.q0,
                "q1": stats.q1,
                "q_err": stats.q_err,
                "max_err": stats.max_error,
                "relevant": abs(stats.p0 - stats.q0) > relevance,
            }
        )
    frontier = pd.DataFrame(rows)
    relevant = frontier[frontier["relevant"]]
    lambda_est = float(relevant["max_err"].min()) if not relevant.empty else None
    return LambdaEstimate(lambda_est, frontier, relevance)


def verify_lambda(family: Sequence[LiftedBob], relevance: float = LAMBDA_RELEVANCE) -> SweepReport:
    estimate = estimate_lambda(family, relevance)
    rows = estimate.frontier.to_dict(orient="records")
    violations = [r for r in rows if r["relevant"] and r["max_err"] <= 0]
    return SweepReport(
        verifier_name="lambda",
        rows=rows,
        metadata={
            "lambda_est": estimate.lambda_est,
            "lambda_note": "empirical lower estimate over a finite strategy family",
            "relevance_threshold": relevance,
            "relevant_strategies": estimate.relevant_count,
        },
        violations=violations,
        message=f"lambda_est = {estimate.lambda_est} over {estimate.relevant_count} relevant strategies",
    )


def verify_akn(seed: RngLike = 0, pairs: int = 1000, povms: int = 100, max_dim: int = 8) -> SweepReport:
    """Random density-matrix pairs, each against fresh random POVMs and the Helstrom measurement.

    Every POVM must stay below half the trace distance; Helstrom must reach it.
    """
    if pairs < 1 or povms < 1 or max_dim < 2:
        raise InvalidArgumentError("pairs and povms must be positive and max_dim at least 2")
    rng = as_generator(seed)
    rows = []
    for index in range(int(pairs)):
        dim = int(rng.integers(2, max_dim + 1))
        rho0 = random_density_matrix(dim, rng)
        rho1 = random_density_matrix(dim, rng)
        half_norm = 0.5 * trace_norm(rho0.matrix - rho1.matrix)
        best = 0.0
        for _ in range(int(povms)):
            elements = np.stack(random_povm(dim, int(rng.integers(2, 5)), rng).elements)
            p = np.einsum("kij,ji->k", elements, rho0.matrix).real
            q = np.einsum("kij,ji->k", elements, rho1.matrix).real
            best = max(best, 0.5 * float(np.abs(p - q).sum()))
        helstrom = helstrom_measurement(rho0, rho1)
        p = np.array([np.trace(e @ rho0.matrix).real for e in helstrom.elements])
        q = np.array([np.trace(e @ rho1.matrix).real for e in helstrom.elements])
        achieved = 0.5 * float(np.abs(p - q).sum())
        rows.append(
            {
                "pair": index,
                "dim": dim,
                "half_trace_norm": half_norm,
                "best_povm_l1": best,
                "helstrom_l1": achieved,
                "margin": half_norm - best,
                "povm_bound_holds": best <= half_norm + BOUND_TOL,
                "helstrom_tight": abs(achieved - half_norm) <= BOUND_TOL,
            }
        )
    violations = [r for r in rows if not r["povm_bound_holds"] or not r["helstrom_tight"]]
    return SweepReport(
        verifier_name="akn",
        rows=rows,
        metadata={
            "pairs": int(pairs),
            "povms_per_pair": int(povms),
            "distinct_povms": int(pairs) * int(povms),
            "max_dim": int(max_dim),
            "tolerance": BOUND_TOL,
        },
        violations=violations,
        message=f"{len(rows)} state pairs x {povms} POVMs, {len(violations)} violations",
    )
