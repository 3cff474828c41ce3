import numpy as np
import pytest

from exactcat.ffield import FFMatrix
from exactcat.modules import FDModule, ModuleHom, direct_sum, hom_space
from exactcat.decompose import (
    decompose,
    indec_end_radical,
    is_indecomposable,
    is_isomorphic,
    iso_indec,
    noniso_hom_subspace,
)
from exactcat import testbeds


@pytest.fixture(scope="module")
def a2():
    return testbeds.a2()


@pytest.fixture(scope="module")
def a3():
    return testbeds.a3()


def conjugate(m, rng):
    """Same module in a scrambled basis (conjugate all actions)."""
    p = m.p
    gs = []
    for d in m.dims:
        while True:
            g = FFMatrix(rng.integers(0, p, size=(d, d)), p)
            if g.is_invertible():
                gs.append(g)
                break
    act = []
    for a, (i, j) in enumerate(m.algebra.arrows):
        act.append(gs[j] @ m.act[a] @ gs[i].inverse())
    return FDModule(m.algebra, m.dims, act)


class TestDecompose:
    def test_indecomposable_is_fixed_point(self, a2):
        d = decompose(a2.projective(0))
        assert len(d.summands) == 1
        assert d.summands[0].key == a2.projective(0).key

    def test_square_of_simple(self, a2):
        s = a2.simple(0)
        twos, _, _ = direct_sum([s, s])
        d = decompose(twos)
        assert len(d.summands) == 2
        assert all(x.dims == s.dims for x in d.summands)

    def test_scrambled_projective(self, a2):
        rng = np.random.default_rng(2)
        m = conjugate(a2.projective(0), rng)
        d = decompose(m)
        assert len(d.summands) == 1
        assert iso_indec(d.summands[0], a2.projective(0)) is not None

    def test_certificates_compose_to_identities(self, a3):
        rng = np.random.default_rng(8)
        mods = [a3.projective(0), a3.simple(1), a3.simple(1), a3.projective(2)]
        big, _, _ = direct_sum(mods)
        big = conjugate(big, rng)
        d = decompose(big)
        assert (d.from_sum @ d.to_sum) == ModuleHom.identity(big)
        total, _, _ = direct_sum(d.summands)
        assert (d.to_sum @ d.from_sum) == ModuleHom.identity(total)

    def test_zero_module_empty(self, a2):
        from exactcat.modules import zero_module

        assert decompose(zero_module(a2)).summands == []

    def test_krull_schmidt_uniqueness(self, a3):
        # multiset of summand dim vectors must not depend on the presentation
        rng = np.random.default_rng(13)
        pieces = [a3.projective(1), a3.simple(0), a3.simple(0)]
        m1, _, _ = direct_sum(pieces)
        m2, _, _ = direct_sum(list(reversed(pieces)))
        m1s, m2s = conjugate(m1, rng), conjugate(m2, rng)
        multiset1 = sorted(s.dims for s in decompose(m1s).summands)
        multiset2 = sorted(s.dims for s in decompose(m2s).summands)
        assert multiset1 == multiset2

    def test_big_semisimple_power_splits(self):
        # End is M_8(F_2): too large to enumerate, Fitting splits must fire
        alg = testbeds.semisimple(1)
        s = alg.simple(0)
        big, _, _ = direct_sum([s] * 8)
        assert len(decompose(big).summands) == 8


class TestIsIsomorphic:
    def test_self_iso_is_identity(self, a2):
        m = a2.projective(0)
        assert is_isomorphic(m, m) == ModuleHom.identity(m)

    def test_distinct_dim_vectors(self, a2):
        assert is_isomorphic(a2.simple(0), a2.simple(1)) is None

    def test_conjugated_module_found(self, a3):
        rng = np.random.default_rng(21)
        m, _, _ = direct_sum([a3.projective(0), a3.simple(1)])
        mc = conjugate(m, rng)
        iso = is_isomorphic(m, mc)
        assert iso is not None and iso.is_iso() and iso.is_intertwiner()

    def test_same_dims_not_isomorphic(self, a2):
        # P1 vs S1 ⊕ S2 share the dimension vector (1,1)
        split, _, _ = direct_sum([a2.simple(0), a2.simple(1)])
        assert is_isomorphic(a2.projective(0), split) is None

    def test_indecomposability_flags(self, a2):
        assert is_indecomposable(a2.projective(0))
        two, _, _ = direct_sum([a2.simple(0), a2.simple(0)])
        assert not is_indecomposable(two)


class TestEndRadical:
    def test_simple_has_trivial_radical(self, a2):
        assert indec_end_radical(a2.simple(0)).dim == 0

    def test_loop_projective_radical(self):
        alg = testbeds.loop_nilpotent()
        proj = alg.projective(0)  # End = F_2[x]/(x^2)
        rad = indec_end_radical(proj)
        assert rad.dim == 1

    def test_noniso_subspace_between_isomorphic(self, a2):
        rng = np.random.default_rng(5)
        m = a2.projective(0)
        mc = conjugate(m, rng)
        sub = noniso_hom_subspace(m, mc)
        assert sub.dim == len(hom_space(m, mc)) - 1  # End P1 = k

    def test_noniso_subspace_between_nonisomorphic(self, a2):
        split, _, _ = direct_sum([a2.simple(0), a2.simple(1)])
        sub = noniso_hom_subspace(a2.projective(0), split)
        assert sub.is_full()
