"""Finite fields and point counts of representation spaces."""

from .count import CountReport, exp_sum_count, framed_exp_sum_count
from .field import FiniteField, field_make, gl_order
from .gauss import GaussDatum, pure_gauss_fields, uniform_gauss_sign

__all__ = [
    "CountReport",
    "FiniteField",
    "GaussDatum",
    "exp_sum_count",
    "field_make",
    "framed_exp_sum_count",
    "gl_order",
    "pure_gauss_fields",
    "uniform_gauss_sign",
]
