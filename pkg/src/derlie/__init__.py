"""Exact-arithmetic models for classifying spaces of fibrewise self-equivalences."""

from .algebra import AlgElement, Generator, GradedAlgebra, extend_derivation
from .classify import (
    BundleFamilySpec,
    classify_su_family,
    example2_check,
    homotopy_report,
    hspace_decision,
    su_bundle_model,
)
from .cochains import cochain_presentation, check_d_squared
from .correspondence import dualize_base, hom_bracket, hom_differential, phi, phi_tilde, verify_psi
from .derivations import (
    Derivation,
    der_basis,
    der_bracket,
    der_differential,
    based_variant_complex,
    homology,
    homology_bracket,
    ker_DW_and_J,
    n_invariant,
    whitehead_trivial,
)
from .dsl import parse_model
from .model import RelativeModel

__all__ = [
    "AlgElement",
    "BundleFamilySpec",
    "Derivation",
    "Generator",
    "GradedAlgebra",
    "RelativeModel",
    "based_variant_complex",
    "check_d_squared",
    "classify_su_family",
    "cochain_presentation",
    "der_basis",
    "der_bracket",
    "der_differential",
    "dualize_base",
    "example2_check",
    "extend_derivation",
    "hom_bracket",
    "hom_differential",
    "homology",
    "homology_bracket",
    "homotopy_report",
    "hspace_decision",
    "ker_DW_and_J",
    "n_invariant",
    "parse_model",
    "phi",
    "phi_tilde",
    "su_bundle_model",
    "verify_psi",
    "whitehead_trivial",
]
