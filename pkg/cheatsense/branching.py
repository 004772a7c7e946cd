"""Classical randomness for protocol runs.

Every coin a party flips and every measurement outcome the engine draws goes
through a `Sampler`.  A `RandomSampler` draws from a seeded numpy generator
(the Monte Carlo path).  A `ReplaySampler` forces a prefix of choices and
records the alternatives it did not take, which lets `enumerate_branches`
walk every branch of positive probability by replaying the run (the exact
path).  The same protocol code serves both.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Generic, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np

from .exceptions import InvalidArgumentError, NumericalError

logger = logging.getLogger(__name__)

T = TypeVar("T")

#: Branches below this probability are treated as impossible.
ZERO_PROBABILITY = 1e-15

_SEED_MASK = (1 << 64) - 1

RngLike = Union[None, int, np.random.Generator, np.random.SeedSequence]


def as_generator(rng: RngLike) -> np.random.Generator:
    """Return a numpy Generator for a seed, seed sequence or generator."""
    if isinstance(rng, (bool, float)):
        raise InvalidArgumentError(f"Seed must be an integer or Generator, got {type(rng).__name__}")
    if isinstance(rng, int) and not 0 <= rng <= _SEED_MASK:
        raise InvalidArgumentError(f"Seed must be a 64-bit unsigned integer, got {rng}")
    return np.random.default_rng(rng)


def derive_seed(seed: int, label: int) -> int:
    """Derive an independent stream seed as ``seed xor label``."""
    return (int(seed) ^ int(label)) & _SEED_MASK


def spawn_generators(seed: int, count: int) -> List[np.random.Generator]:
    """Return `count` independent generators derived from one master seed."""
    children = np.random.SeedSequence(int(seed) & _SEED_MASK).spawn(count)
    return [np.random.default_rng(child) for child in children]


class Sampler(ABC):
    """Source of every discrete random choice made during a run."""

    @abstractmethod
    def choose(self, label: str, probabilities: Sequence[float]) -> int:
        """Pick an index with the given probabilities.

        Args:
            label: Name of the choice point, used in diagnostics.
            probabilities: Non-negative weights summing to one.

        Returns:
            The chosen index.
        """

    def coin(self, label: str) -> int:
        """Uniform random bit."""
        return self.choose(label, (0.5, 0.5))


def _check_probabilities(label: str, probabilities: Sequence[float]) -> np.ndarray:
    probs = np.asarray(probabilities, dtype=float)
    if probs.ndim != 1 or probs.size == 0:
        raise InvalidArgumentError(f"Choice '{label}' needs a non-empty probability vector")
    if np.any(probs < -1e-12) or abs(probs.sum() - 1.0) > 1e-9:
        raise NumericalError(
            f"Choice '{label}' has an invalid distribution",
            {"probabilities": probs.tolist(), "total": float(probs.sum())},
        )
    return np.clip(probs, 0.0, 1.0)


class RandomSampler(Sampler):
    """Sampler backed by a numpy Generator; single owner, never shared."""

    def __init__(self, rng: RngLike) -> None:
        self.rng = as_generator(rng)

    def choose(self, label: str, probabilities: Sequence[float]) -> int:
        probs = _check_probabilities(label, probabilities)
        cumulative = np.cumsum(probs)
        draw = self.rng.random() * cumulative[-1]
        index = min(int(np.searchsorted(cumulative, draw, side="right")), probs.size - 1)
        if probs[index] <= ZERO_PROBABILITY:
            raise NumericalError(
                f"Sampled a zero-probability outcome at choice '{label}'",
                {"index": index, "probabilities": probs.tolist(), "draw": float(draw)},
            )
        return index


class ReplaySampler(Sampler):
    """Sampler that replays a forced path and records untaken alternatives.

    Beyond the forced prefix it takes the first option of positive
    probability and queues every other positive option as a new prefix.
    """

    def __init__(self, prefix: Tuple[int, ...] = ()) -> None:
        self.prefix = tuple(prefix)
        self.path: List[int] = []
        self.probability = 1.0
        self.pending: List[Tuple[int, ...]] = []

    def choose(self, label: str, probabilities: Sequence[float]) -> int:
        probs = _check_probabilities(label, probabilities)
        depth = len(self.path)
        if depth < len(self.prefix):
            index = self.prefix[depth]
            if index >= probs.size or probs[index] <= ZERO_PROBABILITY:
                raise NumericalError(
                    f"Replay diverged at choice '{label}'",
                    {"depth": depth, "index": index, "probabilities": probs.tolist()},
                )
        else:
            viable = [k for k in range(probs.size) if probs[k] > ZERO_PROBABILITY]
            if not viable:
                raise NumericalError(f"No viable outcome at choice '{label}'", {"depth": depth})
            index = viable[0]
            base = tuple(self.path)
            self.pending.extend(base + (k,) for k in viable[1:])
        self.path.append(index)
        self.probability *= float(probs[index])
        return index


@dataclass(frozen=True)
class Branch(Generic[T]):
    """One leaf of an exhaustive enumeration."""

    path: Tuple[int, ...]
    probability: float
    value: T


def enumerate_branches(run: Callable[[Sampler], T], max_branches: Optional[int] = None) -> List[Branch[T]]:
    """Run `run` once per branch of positive probability.

    Args:
        run: Callable executing one protocol run against the sampler it gets.
        max_branches: Optional safety cap on the number of leaves.

    Returns:
        Leaves sorted by their choice path.  Their probabilities sum to one.
    """
    stack: List[Tuple[int, ...]] = [()]
    leaves: List[Branch[T]] = []
    while stack:
        prefix = stack.pop()
        sampler = ReplaySampler(prefix)
        value = run(sampler)
        leaves.append(Branch(tuple(sampler.path), sampler.probability, value))
        stack.extend(reversed(sampler.pending))
        if max_branches is not None and len(leaves) > max_branches:
            raise NumericalError("Branch enumeration exceeded its cap", {"max_branches": max_branches})
    leaves.sort(key=lambda leaf: leaf.path)
    total = sum(leaf.probability for leaf in leaves)
    if abs(total - 1.0) > 1e-9:
        raise NumericalError("Branch probabilities do not sum to one", {"total": total})
    logger.debug("Enumerated %d branches", len(leaves))
    return leaves
