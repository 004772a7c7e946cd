"""Top level package for the cheat-sensitive commitment simulator.

Importing this module registers all built-in verifiers via the verifier
registry.  Protocol runs, attacks and exact statistics are reached through
the submodules; the names below are the common entry points.
"""

__version__ = "0.1.0"

from .registry import VerifierRegistry
from .pipeline import PipelineConfig, PipelineResult, VerificationPipeline
from .config_loader import load_config
from .exceptions import (
    AccessViolationError,
    CapacityError,
    CheatsenseError,
    InvalidArgumentError,
    InvalidConfigError,
    NumericalError,
    ProtocolViolationError,
    UnknownVerifierError,
)
from .ot import HonestAlice, HonestBob, OtInputs, OtTranscript, ot_branches, run_ot
from .qbc import QbcTranscript, qbc_branches, run_qbc
from .analysis import exact_ot_stats, monte_carlo_ot, qbc_stats

# Import verifiers to trigger decorator-based registration
from . import verifiers  # noqa: F401

__all__ = [
    "__version__",
    "VerifierRegistry",
    "VerificationPipeline",
    "PipelineConfig",
    "PipelineResult",
    "load_config",
    "AccessViolationError",
    "CapacityError",
    "CheatsenseError",
    "InvalidArgumentError",
    "InvalidConfigError",
    "NumericalError",
    "ProtocolViolationError",
    "UnknownVerifierError",
    "HonestAlice",
    "HonestBob",
    "OtInputs",
    "OtTranscript",
    "run_ot",
    "ot_branches",
    "QbcTranscript",
    "run_qbc",
    "qbc_branches",
    "exact_ot_stats",
    "monte_carlo_ot",
    "qbc_stats",
]
