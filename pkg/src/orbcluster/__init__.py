"""Exact Laurent-expansion engines for curves on triangulated orbifolds.

Four independent computations of the same expansion (snake-graph matchings,
labelled-poset ideals, 2x2 rank-matrix products, triangle walks) plus seed
mutation, cross-checked against each other.
"""

from orbcluster.chebring import ChebValue, MultiChebScalar, cheb_u, minimal_polynomial

__all__ = [
    "ChebValue",
    "MultiChebScalar",
    "cheb_u",
    "minimal_polynomial",
]
