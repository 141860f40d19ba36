"""Exact q-deformed wedge products, q-Fock spaces and toroidal actions."""

from .qlaurent import NotDivisible, ScalarQ, parse_scalar, q_binom, q_int

__all__ = ["ScalarQ", "NotDivisible", "parse_scalar", "q_int", "q_binom"]
__version__ = "0.1.0"
