"""Exact expected characters of word-random permutations, with oracles.

The main entry points are :func:`expected_character` and
:func:`expected_characters`; everything else supports or checks them.
"""
from .algebra import ExactPolynomial, ExactRationalFunction, gate_polynomial, reciprocal_substitute, taylor_coefficients
from .engine import (
    InvariantViolation,
    expected_character,
    expected_characters,
    phi_w,
    polynomial_form,
)
from .partitions import EnumerationBudgetError, PartialMatching, SetPartition
from .symmetric import YoungDiagram, character, dim, dim_stable
from .weingarten import weingarten
from .words import preprocess_word

__all__ = [
    "ExactPolynomial",
    "ExactRationalFunction",
    "gate_polynomial",
    "reciprocal_substitute",
    "taylor_coefficients",
    "InvariantViolation",
    "expected_character",
    "expected_characters",
    "phi_w",
    "polynomial_form",
    "EnumerationBudgetError",
    "PartialMatching",
    "SetPartition",
    "YoungDiagram",
    "character",
    "dim",
    "dim_stable",
    "weingarten",
    "preprocess_word",
]

__version__ = "0.1.0"
