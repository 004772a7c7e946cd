"""Lemma1Verifier bounds a cheating Alice's knowledge of Bob's selection bit."""

from __future__ import annotations

from typing import Any, Dict

from ..adversaries import DEFAULT_EPSILON_GRID, random_alice_family
from ..analysis import verify_lemma1
from ..base import BaseVerifier, SweepReport
from ..registry import VerifierRegistry


@VerifierRegistry.register
class Lemma1Verifier(BaseVerifier):
    """Check Prob[i' = i] <= 1/2 + 16 sqrt(eps_fail) over a seeded Alice family."""

    @property
    def name(self) -> str:
        return "lemma1"

    @property
    def description(self) -> str:
        return "Bound a malicious Alice's advantage on i by the failure probability"

    def get_required_params(self) -> Dict[str, Dict[str, Any]]:
        return {
            "family_size": {
                "type": int,
                "default": 200,
                "description": "Number of random Alice strategies",
                "required": False,
            },
            "seed": {
                "type": int,
                "default": 1,
                "description": "Seed of the random family",
                "required": False,
            },
            "epsilon_grid": {
                "type": list,
                "default": list(DEFAULT_EPSILON_GRID),
                "description": "Epsilon values of the explicit attack",
                "required": False,
            },
        }

    def verify(self) -> SweepReport:
        family = random_alice_family(
            self.param("seed"), self.param("family_size"), epsilon_grid=tuple(self.param("epsilon_grid"))
        )
        report = verify_lemma1(family)
        report.metadata["seed"] = self.param("seed")
        return report
