"""Custom exception types for the protocol simulator and verifiers."""

from __future__ import annotations

from typing import Any, Dict, Optional


class CheatsenseError(Exception):
    """Base class for every error raised by the package."""


class InvalidArgumentError(CheatsenseError, ValueError):
    """Raised when an operation receives an argument outside its domain."""


class CapacityError(CheatsenseError, RuntimeError):
    """Raised when a Hilbert space or ancilla budget exceeds its cap."""


class AccessViolationError(CheatsenseError):
    """Raised when a party strategy touches a register it does not own."""


class ProtocolViolationError(CheatsenseError):
    """Raised when a party emits a message of the wrong shape or arity."""


class NumericalError(CheatsenseError, ArithmeticError):
    """Raised when the numerics break an invariant the engine relies on.

    Attributes:
        diagnostics: Free-form values describing the failing computation.
    """

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.diagnostics: Dict[str, Any] = dict(diagnostics or {})

    def __str__(self) -> str:
        base = super().__str__()
        if not self.diagnostics:
            return base
        details = ", ".join(f"{k}={v!r}" for k, v in sorted(self.diagnostics.items()))
        return f"{base} ({details})"


class InvalidConfigError(CheatsenseError):
    """Raised when a run or verification configuration is malformed or invalid."""


class UnknownVerifierError(CheatsenseError):
    """Raised when a configuration references a verifier that is not registered."""
