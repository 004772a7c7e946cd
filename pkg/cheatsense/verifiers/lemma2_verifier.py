"""Lemma2Verifier bounds a cheating Bob's knowledge of both of Alice's bits."""

from __future__ import annotations

from typing import Any, Dict

from ..adversaries import DEFAULT_EPSILON_GRID, random_bob_family
from ..analysis import verify_lemma2
from ..base import BaseVerifier, SweepReport
from ..registry import VerifierRegistry


@VerifierRegistry.register
class Lemma2Verifier(BaseVerifier):
    """Check Prob[a'_other = a_other] <= 1/2 + 16 sqrt(2) eps over a seeded Bob family."""

    @property
    def name(self) -> str:
        return "lemma2"

    @property
    def description(self) -> str:
        return "Bound a malicious Bob's knowledge of the second bit by the error on the first"

    def get_required_params(self) -> Dict[str, Dict[str, Any]]:
        return {
            "family_size": {
                "type": int,
                "default": 200,
                "description": "Number of random Bob strategies",
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
        family = random_bob_family(
            self.param("seed"), self.param("family_size"), epsilon_grid=tuple(self.param("epsilon_grid"))
        )
        report = verify_lemma2(family)
        report.metadata["seed"] = self.param("seed")
        return report
