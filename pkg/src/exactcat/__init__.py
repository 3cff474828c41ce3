"""exactcat: exact structures, balanced pairs and cotorsion pairs at desk scale.

A small laboratory for module categories of representation-finite algebras
over prime fields: it computes Hom and Ext groups exactly, enumerates the
exact structures on a catalog of indecomposables, and brute-force checks the
correspondences between balanced pairs, Ext subfunctors and exact structures
together with the approximation-theoretic consequences (Wakamatsu-style
lemmas, complete hereditary cotorsion pairs).
"""

from .ffield import FFMatrix, Subspace, kernel, rref, solve

__all__ = ["FFMatrix", "Subspace", "kernel", "rref", "solve"]

__version__ = "0.1.0"
