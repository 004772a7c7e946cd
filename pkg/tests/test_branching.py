"""Tests for samplers, seed handling and exhaustive branch enumeration."""

import numpy as np
import pytest

from cheatsense.branching import (
    RandomSampler,
    ReplaySampler,
    as_generator,
    derive_seed,
    enumerate_branches,
    spawn_generators,
)
from cheatsense.exceptions import InvalidArgumentError, NumericalError


def _two_coins(sampler):
    first = sampler.coin("first")
    second = sampler.choose("second", (0.25, 0.75)) if first else sampler.coin("second")
    return first, second


def test_enumerate_branches_covers_every_leaf() -> None:
    leaves = enumerate_branches(_two_coins)
    assert [leaf.path for leaf in leaves] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert [leaf.probability for leaf in leaves] == pytest.approx([0.25, 0.25, 0.125, 0.375])
    assert [leaf.value for leaf in leaves] == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_enumerate_branches_skips_zero_probability_options() -> None:
    leaves = enumerate_branches(lambda s: s.choose("x", (0.0, 1.0, 0.0)))
    assert len(leaves) == 1
    assert leaves[0].value == 1
    assert leaves[0].probability == pytest.approx(1.0)


def test_enumerate_branches_cap() -> None:
    with pytest.raises(NumericalError):
        enumerate_branches(_two_coins, max_branches=2)


def test_replay_sampler_forces_prefix() -> None:
    sampler = ReplaySampler((1, 0))
    assert _two_coins(sampler) == (1, 0)
    assert sampler.probability == pytest.approx(0.125)
    assert sampler.pending == []


def test_replay_sampler_rejects_impossible_prefix() -> None:
    with pytest.raises(NumericalError):
        ReplaySampler((0,)).choose("x", (0.0, 1.0))


def test_random_sampler_is_reproducible() -> None:
    first = RandomSampler(42)
    second = RandomSampler(42)
    assert [first.coin("c") for _ in range(50)] == [second.coin("c") for _ in range(50)]


def test_random_sampler_never_picks_impossible_outcome() -> None:
    sampler = RandomSampler(7)
    assert {sampler.choose("x", (0.0, 1.0)) for _ in range(200)} == {1}


def test_invalid_distributions() -> None:
    with pytest.raises(NumericalError):
        RandomSampler(0).choose("x", (0.5, 0.6))
    with pytest.raises(InvalidArgumentError):
        RandomSampler(0).choose("x", ())


@pytest.mark.parametrize("bad", [True, 1.5, -1, 2 ** 64])
def test_as_generator_rejects_bad_seeds(bad) -> None:
    with pytest.raises(InvalidArgumentError):
        as_generator(bad)


def test_seed_derivation() -> None:
    assert derive_seed(5, 3) == 6
    assert derive_seed(2 ** 64 - 1, 0) == 2 ** 64 - 1
    generators = spawn_generators(1, 3)
    draws = [g.integers(0, 2 ** 32) for g in generators]
    assert len(set(draws)) == 3
    again = [g.integers(0, 2 ** 32) for g in spawn_generators(1, 3)]
    assert draws == again
    assert isinstance(as_generator(None), np.random.Generator)
