"""LambdaVerifier estimates the binding constant over a seeded Bob family."""

from __future__ import annotations

from typing import Any, Dict

from ..adversaries import DEFAULT_EPSILON_GRID
from ..analysis import LAMBDA_RELEVANCE, default_lambda_family, verify_lambda
from ..base import BaseVerifier, SweepReport
from ..registry import VerifierRegistry


@VerifierRegistry.register
class LambdaVerifier(BaseVerifier):
    @property
    def name(self) -> str:
        return "lambda"

    @property
    def description(self) -> str:
        return "Estimate min max(p_err, q_err) over Bob strategies that open both values"

    def get_required_params(self) -> Dict[str, Dict[str, Any]]:
        return {
            "family_size": {
                "type": int,
                "default": 100,
                "description": "Number of random Bob strategies lifted into the commitment",
                "required": False,
            },
            "seed": {
                "type": int,
                "default": 0,
                "description": "Seed of the random family",
                "required": False,
            },
            "epsilon_grid": {
                "type": list,
                "default": list(DEFAULT_EPSILON_GRID),
                "description": "Epsilon values of the explicit Bob attack",
                "required": False,
            },
            "relevance": {
                "type": (int, float),
                "default": LAMBDA_RELEVANCE,
                "description": "Minimum |p0 - q0| for a strategy to count",
                "required": False,
            },
        }

    def verify(self) -> SweepReport:
        family = default_lambda_family(
            self.param("seed"), self.param("family_size"), tuple(self.param("epsilon_grid"))
        )
        report = verify_lambda(family, float(self.param("relevance")))
        report.metadata["seed"] = self.param("seed")
        return report
