"""JSON codecs for matrices, states, transcripts, strategy specs and reports.

Complex numbers are written as ``[re, im]`` pairs.  A matrix dump has the
form::

    {"schema": "cheatsense.matrix/1", "rows": 2, "cols": 2,
     "entries": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]}

with entries in row-major order.  Everything else is converted by
`serialise_result`, which walks dataclasses, mappings and sequences.
"""

from __future__ import annotations

import dataclasses
import json
import math
from typing import Any, Dict

import numpy as np
import pandas as pd

from .exceptions import InvalidArgumentError
from .quantum import DensityMatrix, Measurement, ProbDist, StateVector

MATRIX_SCHEMA = "cheatsense.matrix/1"
STATE_SCHEMA = "cheatsense.state/1"
MEASUREMENT_SCHEMA = "cheatsense.measurement/1"
TRANSCRIPT_SCHEMA = "cheatsense.transcript/1"


def complex_pair(value: complex) -> list:
    c = complex(value)
    return [float(c.real), float(c.imag)]


def matrix_to_json(matrix) -> Dict[str, Any]:
    m = np.atleast_2d(np.asarray(matrix, dtype=complex))
    return {
        "schema": MATRIX_SCHEMA,
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[complex_pair(value) for value in row] for row in m],
    }


def matrix_from_json(data: Dict[str, Any]) -> np.ndarray:
    if data.get("schema") != MATRIX_SCHEMA:
        raise InvalidArgumentError(f"Unsupported matrix schema {data.get('schema')!r}")
    try:
        entries = np.array(
            [[complex(re, im) for re, im in row] for row in data["entries"]], dtype=complex
        )
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidArgumentError(f"Malformed matrix entries: {e}") from e
    if entries.shape != (data["rows"], data["cols"]):
        raise InvalidArgumentError(
            f"Matrix entries have shape {entries.shape}, header says ({data['rows']}, {data['cols']})"
        )
    return entries


def state_to_json(state: StateVector) -> Dict[str, Any]:
    return {
        "schema": STATE_SCHEMA,
        "register_layout": list(state.register_layout),
        "amplitudes": [complex_pair(a) for a in state.amplitudes],
    }


def state_from_json(data: Dict[str, Any]) -> StateVector:
    if data.get("schema") != STATE_SCHEMA:
        raise InvalidArgumentError(f"Unsupported state schema {data.get('schema')!r}")
    amplitudes = [complex(re, im) for re, im in data["amplitudes"]]
    return StateVector(np.array(amplitudes), tuple(data["register_layout"]))


def measurement_to_json(measurement: Measurement) -> Dict[str, Any]:
    return {
        "schema": MEASUREMENT_SCHEMA,
        "kind": measurement.kind,
        "labels": list(measurement.labels),
        "elements": [matrix_to_json(e) for e in measurement.elements],
    }


def measurement_from_json(data: Dict[str, Any]) -> Measurement:
    if data.get("schema") != MEASUREMENT_SCHEMA:
        raise InvalidArgumentError(f"Unsupported measurement schema {data.get('schema')!r}")
    return Measurement(
        tuple(data["labels"]),
        tuple(matrix_from_json(e) for e in data["elements"]),
        data["kind"],
    )


def serialise_result(result: Any) -> Any:
    """Recursively convert results to JSON-serialisable values."""
    if result is None or isinstance(result, (bool, str)):
        return result
    if isinstance(result, StateVector):
        return state_to_json(result)
    if isinstance(result, DensityMatrix):
        return {"register_layout": list(result.register_layout), "matrix": matrix_to_json(result.matrix)}
    if isinstance(result, Measurement):
        return measurement_to_json(result)
    if isinstance(result, ProbDist):
        return dict(result.probabilities)
    if isinstance(result, pd.DataFrame):
        return [serialise_result(row) for row in result.to_dict(orient="records")]
    if isinstance(result, np.ndarray):
        if np.iscomplexobj(result):
            return matrix_to_json(result) if result.ndim == 2 else [complex_pair(v) for v in result.ravel()]
        return [serialise_result(v) for v in result.tolist()]
    if isinstance(result, (np.bool_,)):
        return bool(result)
    if isinstance(result, (int, np.integer)):
        return int(result)
    if isinstance(result, (float, np.floating)):
        value = float(result)
        return value if math.isfinite(value) else None
    if isinstance(result, (complex, np.complexfloating)):
        return complex_pair(result)
    if dataclasses.is_dataclass(result) and not isinstance(result, type):
        return {
            f.name: serialise_result(getattr(result, f.name))
            for f in dataclasses.fields(result)
            if not f.name.startswith("_")
        }
    if isinstance(result, dict):
        return {str(k): serialise_result(v) for k, v in result.items()}
    if isinstance(result, (list, tuple)):
        return [serialise_result(item) for item in result]
    return str(result)


def transcript_to_dict(transcript: Any) -> Dict[str, Any]:
    """Serialise an OT or QBC transcript, tagged with the schema version."""
    data = serialise_result(transcript)
    data["schema"] = TRANSCRIPT_SCHEMA
    return data


def dumps(data: Any) -> str:
    """Deterministic JSON text (sorted keys, two-space indent, trailing newline)."""
    return json.dumps(serialise_result(data), indent=2, sort_keys=True) + "\n"


def write_json(data: Any, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(data))
