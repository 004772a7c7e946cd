"""Expose verifier implementations and trigger their registration.

Importing this module makes every built-in verifier register itself with
the `VerifierRegistry`.  A new verifier follows the same pattern: subclass
`BaseVerifier`, implement the required methods and apply the
`@VerifierRegistry.register` decorator.
"""

from .akn_verifier import AknVerifier
from .lambda_verifier import LambdaVerifier
from .lemma1_verifier import Lemma1Verifier
from .lemma2_verifier import Lemma2Verifier
from .sealing_verifier import SealingVerifier

__all__ = [
    "AknVerifier",
    "LambdaVerifier",
    "Lemma1Verifier",
    "Lemma2Verifier",
    "SealingVerifier",
]
