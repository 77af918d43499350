"""Exact computations for crossed products by discrete groups.

Modules: groups (word problems, characters), cantor (computable measures and
actions on Cantor space), presentations (L^inf presentations by indicator
points), crossed (normal forms and norms in crossed products), findim
(finite-dimensional models and duality checks), l1group (L^1 presentations),
axioms (axiom schemas and a model checker) and cli.
"""

from .groups import GroupError, UnsupportedGroup, cyclic, symmetric_group
from .intervals import RationalInterval
from .scalars import Cyc, I

__all__ = ["Cyc", "GroupError", "I", "RationalInterval", "UnsupportedGroup", "cyclic",
           "symmetric_group"]
__version__ = "0.1.0"
