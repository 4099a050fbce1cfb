"""Finite-dimensional models of localized index pairings.

Point spaces and Alexander-Spanier cochains, Toeplitz models of elliptic
operators with their connecting residue, tensor chain complexes with
S-localization, and the pairing of residues with cochains.
"""

from .errors import (BudgetError, ConsistencyError, ContextError, LocIndexError, ValidationError)
from .space import circle_space, simplicial_space, tetrahedron_boundary, triangle_graph

__all__ = ["BudgetError", "ConsistencyError", "ContextError", "LocIndexError", "ValidationError",
           "circle_space", "simplicial_space", "tetrahedron_boundary", "triangle_graph"]
__version__ = "0.1.0"
