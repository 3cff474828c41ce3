"""Stock algebras used by the test suite, the demos and the shipped specs."""

from .algebra import FDAlgebra


def a2(p: int = 2) -> FDAlgebra:
    """Linear quiver 1 -> 2, no relations."""
    return FDAlgebra(p, 2, [(0, 1)], arrow_names=["a"])


def a3(p: int = 2) -> FDAlgebra:
    """Linear quiver 1 -> 2 -> 3, no relations."""
    return FDAlgebra(p, 3, [(0, 1), (1, 2)], arrow_names=["a", "b"])


def semisimple(n: int = 2, p: int = 2) -> FDAlgebra:
    """n isolated vertices: the product of n copies of F_p."""
    return FDAlgebra(p, n, [])


def loop_nilpotent(p: int = 2) -> FDAlgebra:
    """One loop x with x^2 = 0, i.e. F_p[x]/(x^2)."""
    return FDAlgebra(p, 1, [(0, 0)], ["x*x"], arrow_names=["x"])


def kronecker(p: int = 2) -> FDAlgebra:
    """Two parallel arrows 1 -> 2 (representation-infinite)."""
    return FDAlgebra(p, 2, [(0, 1), (0, 1)], arrow_names=["a", "b"])


def a3_zero_relation(p: int = 2) -> FDAlgebra:
    """1 -> 2 -> 3 with the composite set to zero (radical square zero)."""
    return FDAlgebra(p, 3, [(0, 1), (1, 2)], ["a*b"], arrow_names=["a", "b"])


def commuting_square(p: int = 2) -> FDAlgebra:
    """Square quiver with the commutativity relation, dimension 9."""
    return FDAlgebra(
        p,
        4,
        [(0, 1), (1, 3), (0, 2), (2, 3)],
        ["a*b - c*d"],
        arrow_names=["a", "b", "c", "d"],
    )
