"""Verification pipeline and associated configuration/result classes."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from .base import BaseVerifier, SweepReport
from .exceptions import InvalidConfigError, UnknownVerifierError
from .registry import VerifierRegistry

logger = logging.getLogger(__name__)


@dataclass
class PipelineConfig:
    """Configuration for the verification pipeline.

    Attributes:
        verifications: A list of verification specs.  Each item is a dict
            with keys `verifier` (str) and `params` (dict of parameters).
    """

    verifications: List[Dict[str, Any]]


@dataclass
class PipelineResult:
    """Result of running every configured verifier."""

    passed: bool
    total_verifications: int
    passed_verifications: int
    failed_verifications: int
    reports: List[SweepReport]
    duration_seconds: Optional[float] = None


class VerificationPipeline:
    """Runs a sequence of verifiers and aggregates their reports."""

    def __init__(self, config: PipelineConfig) -> None:
        self.config = config
        self._verifiers: List[BaseVerifier] = []

        for idx, spec in enumerate(self.config.verifications):
            if not isinstance(spec, dict):
                raise InvalidConfigError(f"Verification entry at index {idx} must be a dict.")
            name = spec.get("verifier")
            if name is None:
                raise InvalidConfigError(f"Verification entry at index {idx} must contain a 'verifier' key.")
            verifier_class = VerifierRegistry.get_verifier(name)
            if verifier_class is None:
                raise UnknownVerifierError(f"Unknown verifier '{name}' in verification entry {idx}.")
            self._verifiers.append(verifier_class(spec.get("params", {}) or {}))

        self.last_result: Optional[PipelineResult] = None

    def run(self) -> PipelineResult:
        start_time = time.perf_counter()
        reports: List[SweepReport] = []
        total = len(self._verifiers)

        for index, verifier in enumerate(self._verifiers, start=1):
            logger.info("Running verifier '%s' (%d/%d)", verifier.name, index, total)
            verifier_start = time.perf_counter()
            report = verifier.verify()
            report.duration_seconds = time.perf_counter() - verifier_start
            logger.info("Verifier '%s': %s", verifier.name, report.message)
            reports.append(report)

        passed_count = sum(1 for r in reports if r.passed)
        self.last_result = PipelineResult(
            passed=passed_count == total,
            total_verifications=total,
            passed_verifications=passed_count,
            failed_verifications=total - passed_count,
            reports=reports,
            duration_seconds=time.perf_counter() - start_time,
        )
        return self.last_result

    def get_summary(self) -> str:
        """Return a human-readable summary of the most recent run.

        Raises:
            RuntimeError: If the pipeline has not been run yet.
        """
        if self.last_result is None:
            raise RuntimeError("Pipeline has not been run yet.")

        lines: List[str] = ["Verification Results:", "====================="]
        for idx, report in enumerate(self.last_result.reports, start=1):
            status = "✓ PASSED" if report.passed else "✗ FAILED"
            lines.append(f"\n{idx}. Verifier: {report.verifier_name}")
            lines.append(f"   Status: {status}")
            lines.append(f"   Message: {report.message}")
            if report.duration_seconds is not None:
                lines.append(f"   Time: {report.duration_seconds:.3f} seconds")
            for violation in report.violations:
                label = violation.get("spec", violation.get("strategy", violation.get("pair")))
                lines.append(f"     - {label}: {violation}")
        lines.append("\n=====================")

        result = self.last_result
        lines.append(f"Overall Result: {'PASSED' if result.passed else 'FAILED'}")
        lines.append(f"Passed: {result.passed_verifications}/{result.total_verifications} verifications")
        lines.append(f"Failed: {result.failed_verifications}/{result.total_verifications} verifications")
        if result.duration_seconds is not None:
            lines.append(f"Total verification time: {result.duration_seconds:.3f} seconds.")
        return "\n".join(lines)
