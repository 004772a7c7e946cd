"""Loading and validation of verification configuration files."""

from __future__ import annotations

import json
import logging
import os
from typing import Any, Dict, List

from .exceptions import InvalidConfigError, UnknownVerifierError
from .pipeline import PipelineConfig
from .registry import VerifierRegistry

logger = logging.getLogger(__name__)


def _load_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise InvalidConfigError(f"Malformed JSON in {path}: {e}") from e


def _load_yaml(path: str) -> Any:
    try:
        import yaml  # type: ignore
    except ImportError as e:
        raise ImportError("YAML verification configs need pyyaml (`pip install pyyaml`)") from e

    with open(path, "r", encoding="utf-8") as f:
        try:
            return yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise InvalidConfigError(f"Malformed YAML in {path}: {e}") from e


def load_config(path: str) -> PipelineConfig:
    """Load a verification configuration from a JSON or YAML file.

    Args:
        path: Path to the configuration file (.json, .yaml or .yml).

    Returns:
        A `PipelineConfig` with every verifier's parameters filled in.

    Raises:
        InvalidConfigError: If the file is missing or malformed.
        UnknownVerifierError: If an unregistered verifier is referenced.
    """
    if not os.path.exists(path):
        raise InvalidConfigError(f"Configuration file not found: {path}")
    ext = os.path.splitext(path)[1].lower()

    if ext == ".json":
        config_data = _load_json(path)
    elif ext in {".yaml", ".yml"}:
        config_data = _load_yaml(path)
    else:
        raise InvalidConfigError(f"Unsupported configuration file extension '{ext}'. Use .json or .yaml/.yml")

    if not isinstance(config_data, dict):
        raise InvalidConfigError("Top level of config file must be a JSON/YAML object")

    verifications = validate_verifications(config_data)
    logger.debug("Loaded %d verifications from %s", len(verifications), path)
    return PipelineConfig(verifications=verifications)


def _check_type(value: Any, expected_type: Any, param_name: str, verifier_name: str) -> None:
    types = expected_type if isinstance(expected_type, tuple) else (expected_type,)
    # bool is an int subclass; it never stands in for a number here
    if isinstance(value, bool) and bool not in types:
        raise InvalidConfigError(
            f"Parameter '{param_name}' for verifier '{verifier_name}' must be of type {expected_type}, got bool"
        )
    if not isinstance(value, types):
        raise InvalidConfigError(
            f"Parameter '{param_name}' for verifier '{verifier_name}'"
            f" must be of type {expected_type}, got {type(value).__name__}"
        )


def validate_verifications(config: Dict[str, Any]) -> List[Dict[str, Any]]:
    """Validate the configuration structure and fill parameter defaults."""
    if "verifications" not in config:
        raise InvalidConfigError("Configuration must contain a 'verifications' list")

    verifications = config["verifications"]
    if not isinstance(verifications, list):
        raise InvalidConfigError("'verifications' must be a list")

    normalized: List[Dict[str, Any]] = []
    for idx, entry in enumerate(verifications):
        if not isinstance(entry, dict):
            raise InvalidConfigError(f"Verification entry at index {idx} must be a dict")
        verifier_name = entry.get("verifier")
        params = entry.get("params", {}) or {}
        if verifier_name is None:
            raise InvalidConfigError(f"Verification entry at index {idx} must contain a 'verifier' key")
        if not isinstance(params, dict):
            raise InvalidConfigError(f"'params' of verification entry {idx} must be a mapping")

        verifier_class = VerifierRegistry.get_verifier(verifier_name)
        if verifier_class is None:
            raise UnknownVerifierError(f"Unknown verifier '{verifier_name}' in verification entry {idx}")

        schema = verifier_class({}).get_required_params()
        for param_name in params:
            if param_name not in schema:
                raise InvalidConfigError(
                    f"Unknown parameter '{param_name}' for verifier '{verifier_name}' in entry {idx}"
                )

        normalized_params: Dict[str, Any] = {}
        for param_name, meta in schema.items():
            default = meta.get("default")
            if param_name in params:
                value = params[param_name]
            else:
                if meta.get("required", False) and default is None:
                    raise InvalidConfigError(
                        f"Missing required parameter '{param_name}' for verifier '{verifier_name}' in entry {idx}"
                    )
                value = default
            if value is not None and meta.get("type") is not None:
                _check_type(value, meta["type"], param_name, verifier_name)
            normalized_params[param_name] = value

        normalized.append({"verifier": verifier_name, "params": normalized_params})
    return normalized
