"""Brute-force reference implementations.

Nothing here imports main-path algorithms; only the plain data containers
for tri-trees are shared so results can be compared directly.
"""

from .iso import oracle_iso
from .kconn import oracle_block, oracle_kconn
from .planarity import oracle_is_planar
from .spqr import oracle_spqr, three_connected_pairs
from .tutte_exact import oracle_tutte_exact, tutte_determinant

__all__ = [
    "oracle_block",
    "oracle_iso",
    "oracle_kconn",
    "oracle_is_planar",
    "oracle_spqr",
    "oracle_tutte_exact",
    "three_connected_pairs",
    "tutte_determinant",
]
