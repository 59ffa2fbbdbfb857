"""Node splitting for quiver representation varieties.

Components and prime ideals of representation varieties of radical square
zero algebras, the relative splitting correspondence at a single node, and
exact or probabilistic checks of all of it.
"""

from .quiver import (Algebra, Arrow, MonomialRelations, Quiver, QuiverError, Representation,
                     SplitContext, embed_representation, h_matrix, is_node, parse_algebra,
                     split_all_nodes, split_dimvec, split_node, t_matrix, x_rank)

__version__ = "0.1.0"
