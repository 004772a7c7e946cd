"""SealingVerifier checks the quadratic sealing relation of the bit commitment."""

from __future__ import annotations

from typing import Any, Dict

from ..adversaries import DEFAULT_EPSILON_GRID
from ..analysis import verify_sealing
from ..base import BaseVerifier, SweepReport
from ..registry import VerifierRegistry


@VerifierRegistry.register
class SealingVerifier(BaseVerifier):
    """detection >= advantage^2 / 32 for the lifted Alice attack at each epsilon."""

    @property
    def name(self) -> str:
        return "sealing"

    @property
    def description(self) -> str:
        return "Check that Alice's advantage on b costs a quadratic detection probability"

    def get_required_params(self) -> Dict[str, Dict[str, Any]]:
        return {
            "epsilon_grid": {
                "type": list,
                "default": list(DEFAULT_EPSILON_GRID),
                "description": "Epsilon values of the lifted attack",
                "required": False,
            },
        }

    def verify(self) -> SweepReport:
        return verify_sealing(tuple(self.param("epsilon_grid")))
