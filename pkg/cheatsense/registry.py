"""Verifier registry for managing verifier plugins.

The registry maps verifier names to their classes.  Verifiers register
themselves with the `@VerifierRegistry.register` decorator; the pipeline
and the CLI look them up by name and create instances from configuration.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Type

from .base import BaseVerifier


class VerifierRegistry:
    """Registry for managing verifier plugins."""

    _verifiers: Dict[str, Type[BaseVerifier]] = {}

    @classmethod
    def register(cls, verifier_class: Type[BaseVerifier]) -> Type[BaseVerifier]:
        """Register a verifier class and return it.

        The class is instantiated with an empty configuration to read its
        name.  A verifier registered under an existing name replaces it.
        """
        try:
            instance = verifier_class(config={})
        except Exception as e:
            raise RuntimeError(f"Failed to instantiate verifier '{verifier_class}' while registering.") from e
        cls._verifiers[instance.name] = verifier_class
        return verifier_class

    @classmethod
    def get_verifier(cls, name: str) -> Optional[Type[BaseVerifier]]:
        """Return a verifier class by its registered name, or None."""
        return cls._verifiers.get(name)

    @classmethod
    def create_verifier(cls, name: str, config: Dict[str, Any]) -> Optional[BaseVerifier]:
        verifier_class = cls.get_verifier(name)
        if verifier_class is None:
            return None
        return verifier_class(config)

    @classmethod
    def list_verifiers(cls) -> List[str]:
        return sorted(cls._verifiers.keys())
