"""Certificates and counterexample constructions for regularized runs."""

from .certificates import (
    Certificate,
    entropy_inequality_residual,
    min_entropy_certificate,
    positivity_certificate,
)
from .constructions import (
    Counterexample,
    NSDemo,
    a_neq_d_counterexample,
    ns_entropy_violation_demo,
    rigid_rotation_heating,
)
from .contact import ContactReport, contact_quality, contact_width
from .entropies import EntropyFamily, family_from_spec

__all__ = [
    "Certificate",
    "min_entropy_certificate",
    "positivity_certificate",
    "entropy_inequality_residual",
    "EntropyFamily",
    "family_from_spec",
    "Counterexample",
    "a_neq_d_counterexample",
    "NSDemo",
    "ns_entropy_violation_demo",
    "rigid_rotation_heating",
    "ContactReport",
    "contact_quality",
    "contact_width",
]
