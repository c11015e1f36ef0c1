"""Finite co-trees, their upset algebras, and characteristic formulas of bi-intuitionistic logic."""

from .algebra import BiHeytingAlgebra, dual_poset, upset_algebra
from .formula import is_valid, parse, to_text
from .poset import Poset, build_poset, make_chain, make_cofork, make_comb, make_hodkinson

__version__ = "0.1.0"
