"""Correspondence compiler for Sahlqvist modal reduction principles."""

from __future__ import annotations

from .correspondence import TermInequality, correspondent, krel_of_chain, lift, prel_of_chain
from .errors import MrpcError
from .syntax import Modality, Mrp, alba_output, classify, left_adjoint, parse_inequality, right_adjoint
from .terms import print_term

__all__ = [
    "Modality",
    "Mrp",
    "MrpcError",
    "TermInequality",
    "alba_output",
    "classify",
    "correspondent",
    "krel_of_chain",
    "left_adjoint",
    "lift",
    "parse_inequality",
    "prel_of_chain",
    "print_term",
    "right_adjoint",
]
