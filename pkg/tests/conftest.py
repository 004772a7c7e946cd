# tests/conftest.py

import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Iterable, Optional

import pytest


def pretty_report(report) -> str:
    """
    Build a compact one-line summary for SweepReport/PipelineResult.
    """
    name = getattr(report, "verifier_name", None)
    if name is not None:
        return (f"[SweepReport] name={name} passed={report.passed} "
                f"rows={len(report.rows)} violations={len(report.violations)}")

    return (f"[PipelineResult] passed={getattr(report, 'passed', None)} "
            f"total={getattr(report, 'total_verifications', None)} "
            f"failed={getattr(report, 'failed_verifications', None)}")


def log_report(report, logger_name: str = "tests") -> None:
    """
    Log the report using the test logger at INFO level.
    """
    logging.getLogger(logger_name).info(pretty_report(report))


def log_violations(
    report: Any,
    *,
    columns: Optional[Iterable[str]] = None,
    logger_name: str = "tests",
    max_show: int = 20,
) -> None:
    """
    Log the violating rows of a SweepReport, one row per line.

    Parameters
    ----------
    report : Any
        A SweepReport-like object with a `violations` list of dicts.
    columns : Iterable[str] | None
        Optional subset of keys to include (if None, include all).
    max_show : int
        Cap on how many rows to log.
    """
    logger = logging.getLogger(logger_name)
    violations = getattr(report, "violations", []) or []
    if not violations:
        return
    logger.info("[%s] %d violation(s):", getattr(report, "verifier_name", "report"), len(violations))
    for row in violations[:max_show]:
        if columns is not None:
            row = {k: row.get(k) for k in columns}
        logger.info("  %s", row)
    if len(violations) > max_show:
        logger.info("... %d more violation(s) not shown", len(violations) - max_show)


def log_stats(label: str, stats: Any, logger_name: str = "tests") -> None:
    """
    Log the headline numbers of an ExactOtStats/QbcStats-like object.
    """
    fields = {
        k: v for k, v in vars(stats).items()
        if isinstance(v, (int, float, dict)) or v is None
    }
    logging.getLogger(logger_name).info("[%s] %s", label, fields)


@pytest.fixture(scope="session", autouse=True)
def _setup_rotating_log_file() -> None:
    """
    Create a rotating file handler for test logs and attach it to the root logger.
    This runs once per test session (autouse=True).
    """
    logs_dir = Path("tests/logs")
    logs_dir.mkdir(parents=True, exist_ok=True)

    handler = RotatingFileHandler(
        logs_dir / "test.log",
        maxBytes=1_000_000,
        backupCount=5,
        encoding="utf-8",
        delay=True
    )
    handler.setFormatter(logging.Formatter(fmt="%(levelname)s %(name)s - %(message)s"))

    root = logging.getLogger()
    root.addHandler(handler)
    root.setLevel(logging.INFO)
