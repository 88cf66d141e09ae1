"""Class groups of quadratic fields via binary quadratic forms."""

from __future__ import annotations

from ..arith import is_fundamental_discriminant
from ..errors import InvalidInputError
from .batch import class_group, class_number_batch, family_groups
from .forms import QuadraticForm, compose, inverse, power, prime_form_or_none, principal_form, reduce_form
from .imaginary import class_group_imaginary, reduced_forms
from .real import NarrowGroup, class_group_real, fundamental_unit_norm, narrow_class_number
from .structure import ClassGroup, elementary_divisors, torsion_size, two_rank_doubled

__all__ = [
    "ClassGroup",
    "NarrowGroup",
    "QuadraticForm",
    "class_group",
    "class_group_imaginary",
    "class_group_real",
    "class_number_batch",
    "compose",
    "elementary_divisors",
    "family_groups",
    "fundamental_unit_norm",
    "inverse",
    "narrow_class_number",
    "power",
    "prime_form_or_none",
    "principal_form",
    "reduce_form",
    "reduced_forms",
    "torsion_size",
    "two_rank_doubled",
]
