"""Base classes for protocol parties and verifiers.

Protocol parties are strategy objects with one callback per protocol phase.
A callback never sees the global quantum state: it receives a
`PartyContext` that lets it act on the registers its party currently owns,
make random choices and keep private classical notes for the rest of the
run.  Strategies hold no per-run state themselves, so one instance can be
used for any number of runs.

Verifiers follow the plug-in pattern: each concrete verifier subclasses
`BaseVerifier`, declares its parameter schema and registers itself with
the `VerifierRegistry`.  A verifier returns a `SweepReport`.
"""

from __future__ import annotations

import os
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, Hashable, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .exceptions import InvalidArgumentError
from .quantum import Measurement
from .serialization import serialise_result, write_json

if TYPE_CHECKING:
    from .ot import AliceSecrets, BobSecrets

Role = Literal["alice", "bob"]

#: Name under which Alice reaches the qubit Bob sent back.
RETURNED = "returned"


class PartyContext(ABC):
    """Everything a strategy callback may touch during one run."""

    def __init__(self, role: Role) -> None:
        self.role = role
        self.private: Dict[str, Any] = {}

    @abstractmethod
    def registers(self) -> Tuple[str, ...]:
        """Names of the registers this party currently owns."""

    @abstractmethod
    def apply(self, operator: np.ndarray, registers: Sequence[str]) -> None:
        """Apply a unitary to owned registers, listed least significant first."""

    @abstractmethod
    def measure(self, measurement: Measurement, registers: Sequence[str]) -> str:
        """Measure owned registers and return the outcome label."""

    @abstractmethod
    def choose(self, label: str, probabilities: Sequence[float]) -> int:
        """Private random choice."""

    def coin(self, label: str) -> int:
        return self.choose(label, (0.5, 0.5))


class OtPartyStrategy(ABC):
    """One party's behaviour in a single OT execution."""

    #: Dimensions of the ancilla registers the party asks for.
    ancilla_dims: Tuple[int, ...] = ()

    @property
    @abstractmethod
    def name(self) -> str:
        """Short name used in logs and reports."""

    @property
    @abstractmethod
    def description(self) -> str:
        """Human-readable description of the strategy."""

    @property
    @abstractmethod
    def role(self) -> Role:
        """Which side of the protocol the strategy plays."""

    @property
    def key(self) -> Hashable:
        """Identity for memoising exact statistics; equal keys must mean equal behaviour."""
        return (type(self).__qualname__, id(self))

    def prepare(self, ctx: PartyContext) -> None:
        """Prepare-phase callback; does nothing by default."""


class AliceStrategy(OtPartyStrategy):
    """Sender side of the OT.

    `prepare` writes the two message qubits ``msg0`` and ``msg1`` (and any
    ancilla); `respond` receives the returned qubit as ``"returned"`` and
    produces the classical message m; `finalize` may produce a guess of
    Bob's selection bit.
    """

    @property
    def role(self) -> Role:
        return "alice"

    @abstractmethod
    def prepare(self, ctx: PartyContext) -> None:
        ...

    @abstractmethod
    def respond(self, ctx: PartyContext) -> int:
        """Return the classical bit m sent to Bob."""

    def finalize(self, ctx: PartyContext) -> Optional[int]:
        """Return a guess of Bob's selection bit, or None if Alice makes none."""
        return None

    def measured_bit(self, ctx: PartyContext) -> Optional[int]:
        return ctx.private.get("n")

    def secrets(self, ctx: PartyContext) -> Optional["AliceSecrets"]:
        return None


class BobStrategy(OtPartyStrategy):
    """Receiver side of the OT.

    `respond` gets both message qubits, may act on them jointly with its
    ancillas and names the qubit it sends back; `finalize` receives m and
    returns either the selected bit or a pair of guesses ``(a0', a1')``.
    """

    @property
    def role(self) -> Role:
        return "bob"

    @abstractmethod
    def respond(self, ctx: PartyContext) -> str:
        """Return the name of the register sent back to Alice."""

    @abstractmethod
    def finalize(self, ctx: PartyContext, m: int) -> Union[int, Tuple[int, int]]:
        ...

    def secrets(self, ctx: PartyContext) -> Optional["BobSecrets"]:
        return None


@dataclass
class SweepReport:
    """Result of a verification sweep.

    Attributes:
        verifier_name: Name of the verifier that produced the report.
        rows: One flat dict per evaluated point (strategy, epsilon, ...).
        metadata: Seeds, trial counts, tolerances and other provenance.
        violations: The subset of rows that broke the checked bound.
        message: Human-readable summary.
        duration_seconds: Optional runtime; never written to report files.
    """

    verifier_name: str
    rows: List[Dict[str, Any]] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)
    violations: List[Dict[str, Any]] = field(default_factory=list)
    message: str = ""
    duration_seconds: Optional[float] = None

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)

    def to_dict(self, config: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        return {
            "config": serialise_result(config or {}),
            "metadata": serialise_result({"verifier": self.verifier_name, **self.metadata}),
            "rows": serialise_result(self.rows),
            "violations": serialise_result(self.violations),
        }

    def write(self, path: str, output_format: str = "json", config: Optional[Dict[str, Any]] = None) -> str:
        """Write the report as CSV or JSON and return the path written."""
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        if output_format == "csv":
            frame = self.to_frame()
            frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
        elif output_format == "json":
            write_json(self.to_dict(config), path)
        else:
            raise InvalidArgumentError(f"Unsupported output format '{output_format}'")
        return path


class BaseVerifier(ABC):
    """Abstract base class for all verifiers.

    Verifiers are initialised with a configuration dictionary; missing
    parameters fall back to the defaults of `get_required_params`.
    """

    def __init__(self, config: Dict[str, Any]) -> None:
        self.config: Dict[str, Any] = config

    @property
    @abstractmethod
    def name(self) -> str:
        """Short name used for registration and lookup."""

    @property
    @abstractmethod
    def description(self) -> str:
        """Human-readable description of what the verifier checks."""

    @abstractmethod
    def verify(self) -> SweepReport:
        """Run the sweep and return its report."""

    @abstractmethod
    def get_required_params(self) -> Dict[str, Dict[str, Any]]:
        """Return the parameter schema for this verifier.

        Maps each parameter name to a dict with the expected ``type``,
        optional ``default``, ``description`` and ``required`` flag.  The
        config loader validates incoming configuration against it.
        """
        raise NotImplementedError

    def param(self, name: str) -> Any:
        """Configured value of `name`, or its schema default."""
        if name in self.config and self.config[name] is not None:
            return self.config[name]
        return self.get_required_params()[name].get("default")
