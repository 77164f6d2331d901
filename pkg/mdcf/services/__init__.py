"""mdcf.services
=================
Mini-README: Declares the service layer: the expansion engine, the family catalogue
with its published tables, and the independent interval oracle.
"""

from .expansion_service import (
    LeftDomainError,
    cf_expand,
    cf_step,
    convergent,
    jp_expand,
    jp_step,
    jp_step_inverse,
    make_state,
    pivot_select,
    step_inverse,
    validate_state,
)
from .family_service import (
    BuiltFamily,
    FamilyPresentation,
    TableNotFoundError,
    default_strategy,
    depress_cubic,
    expected_period_length,
    expected_table,
    family_build,
    family_presentation,
    shifted_state_identity,
    verify_family,
)
from .oracle_service import cross_check, norm_cross_check, oracle_expand

__all__ = [
    "LeftDomainError",
    "cf_expand",
    "cf_step",
    "convergent",
    "jp_expand",
    "jp_step",
    "jp_step_inverse",
    "make_state",
    "pivot_select",
    "step_inverse",
    "validate_state",
    "BuiltFamily",
    "FamilyPresentation",
    "TableNotFoundError",
    "default_strategy",
    "depress_cubic",
    "expected_period_length",
    "expected_table",
    "family_build",
    "family_presentation",
    "shifted_state_identity",
    "verify_family",
    "cross_check",
    "norm_cross_check",
    "oracle_expand",
]
