"""Graph-complex cohomology at desk scale.

Builds the even and odd commutative graph complexes (full and
triconnected variants), assembles edge-contraction differentials as
exact integer sparse matrices, computes ranks over prime fields, and
evaluates the barrel-graph upper bound on the top-degree cohomology.
"""

from gchom.graphs import (
    CanonicalResult,
    Multigraph,
    Parity,
    automorphism_group_size,
    canonicalize,
    is_connected,
    is_triconnected,
)

__all__ = [
    "CanonicalResult",
    "Multigraph",
    "Parity",
    "automorphism_group_size",
    "canonicalize",
    "is_connected",
    "is_triconnected",
]

__version__ = "0.1.0"
