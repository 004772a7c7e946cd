"""AknVerifier checks that no measurement beats half the trace distance."""

from __future__ import annotations

from typing import Any, Dict

from ..analysis import verify_akn
from ..base import BaseVerifier, SweepReport
from ..registry import VerifierRegistry


@VerifierRegistry.register
class AknVerifier(BaseVerifier):
    """Random state pairs against random POVMs; Helstrom must meet the bound."""

    @property
    def name(self) -> str:
        return "akn"

    @property
    def description(self) -> str:
        return "Check the trace-distance bound on measurement statistics"

    def get_required_params(self) -> Dict[str, Dict[str, Any]]:
        return {
            "seed": {"type": int, "default": 0, "description": "Seed of the random states", "required": False},
            "pairs": {"type": int, "default": 1000, "description": "Number of state pairs", "required": False},
            "povms": {"type": int, "default": 100, "description": "Random POVMs per pair", "required": False},
            "max_dim": {"type": int, "default": 8, "description": "Largest dimension drawn", "required": False},
        }

    def verify(self) -> SweepReport:
        report = verify_akn(self.param("seed"), self.param("pairs"), self.param("povms"), self.param("max_dim"))
        report.metadata["seed"] = self.param("seed")
        return report
