import numpy as np
import pytest

from exactcat.ffield import BudgetError
from exactcat.modules import ModuleHom, direct_sum, hom_space
from exactcat.decompose import iso_indec
from exactcat.catalog import (
    CatalogError,
    enumerate_indecomposables,
    is_projective_module,
    positive_root_count,
    tits_form_positive_definite,
)
from exactcat.ext import hom_section
from exactcat import testbeds


@pytest.fixture(scope="module")
def cat_a2():
    return enumerate_indecomposables(testbeds.a2(), 2)


@pytest.fixture(scope="module")
def cat_a3():
    return enumerate_indecomposables(testbeds.a3(), 3)


class TestEnumeration:
    def test_a2_has_three_classes(self, cat_a2):
        assert len(cat_a2) == 3
        assert sorted(m.dims for m in cat_a2.entries) == [(0, 1), (1, 0), (1, 1)]

    def test_a2_flags(self, cat_a2):
        flags = {
            m.dims: (p, i)
            for m, p, i in zip(cat_a2.entries, cat_a2.proj_flags, cat_a2.inj_flags)
        }
        assert flags[(1, 1)] == (True, True)  # P1 is projective-injective
        assert flags[(0, 1)] == (True, False)  # simple at the sink
        assert flags[(1, 0)] == (False, True)  # simple at the source

    def test_semisimple_catalog(self):
        cat = enumerate_indecomposables(testbeds.semisimple(2), 2)
        assert len(cat) == 2
        assert all(cat.proj_flags) and all(cat.inj_flags)

    def test_a3_has_six_classes(self, cat_a3):
        assert len(cat_a3) == 6
        assert sum(cat_a3.proj_flags) == 3
        assert sum(cat_a3.inj_flags) == 3

    def test_loop_algebra_catalog(self):
        cat = enumerate_indecomposables(testbeds.loop_nilpotent(), 3)
        assert sorted(m.dims for m in cat.entries) == [(1,), (2,)]

    def test_kronecker_bound_two(self):
        cat = enumerate_indecomposables(testbeds.kronecker(), 2)
        # S1, S2 and the three regulars of dimension vector (1,1)
        assert len(cat) == 5

    def test_budget_overflow(self):
        with pytest.raises(BudgetError, match="budget"):
            enumerate_indecomposables(testbeds.kronecker(), 8, budget=1000)

    def test_entries_pairwise_non_isomorphic(self, cat_a3):
        for i, x in enumerate(cat_a3.entries):
            for y in cat_a3.entries[i + 1 :]:
                if x.dims == y.dims:
                    assert iso_indec(x, y) is None


class TestRootCountOracle:
    def test_a2_count(self):
        assert positive_root_count(testbeds.a2()) == 3

    def test_a3_count(self):
        assert positive_root_count(testbeds.a3()) == 6

    def test_semisimple_count(self):
        assert positive_root_count(testbeds.semisimple(2)) == 2

    def test_kronecker_not_dynkin(self):
        assert not tits_form_positive_definite(testbeds.kronecker())
        with pytest.raises(CatalogError):
            positive_root_count(testbeds.kronecker())

    def test_relations_rejected(self):
        with pytest.raises(CatalogError):
            positive_root_count(testbeds.loop_nilpotent())

    def test_catalog_matches_roots(self, cat_a2, cat_a3):
        assert len(cat_a2) == positive_root_count(testbeds.a2())
        assert len(cat_a3) == positive_root_count(testbeds.a3())


class TestProjectiveFlagSemantics:
    def test_flag_iff_every_epi_splits(self, cat_a2):
        # brute force: for flagged projectives every epi from a small sum splits
        cat = cat_a2
        for idx, target in enumerate(cat.entries):
            some_epi_splits_all = True
            for ms in cat.multisets_up_to(3):
                source, _, _ = cat.canonical_sum(ms)
                for f in _all_homs(cat, source, target):
                    if f.is_epi() and hom_section(f) is None:
                        some_epi_splits_all = False
            assert some_epi_splits_all == cat.proj_flags[idx]

    def test_projective_module_on_sums(self, cat_a2):
        projs = [m for m, f in zip(cat_a2.entries, cat_a2.proj_flags) if f]
        total, _, _ = direct_sum(projs)
        assert is_projective_module(total)


def _all_homs(cat, source, target):
    basis = cat.hom(source, target)
    if not basis:
        return
    import itertools

    p = source.p
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        f = ModuleHom.zero(source, target)
        for c, h in zip(coeffs, basis):
            if c:
                f = f + h.scale(c)
        yield f


class TestResolve:
    def test_resolve_entry(self, cat_a3):
        for idx, m in enumerate(cat_a3.entries):
            indices, iso = cat_a3.resolve(m)
            assert indices == (idx,)
            assert iso.is_iso()

    def test_resolve_scrambled_sum(self, cat_a3):
        rng = np.random.default_rng(4)
        mods = [cat_a3.entries[0], cat_a3.entries[3], cat_a3.entries[0]]
        big, _, _ = direct_sum(mods)
        from test_decompose import conjugate

        scrambled = conjugate(big, rng)
        indices, iso = cat_a3.resolve(scrambled)
        assert indices == (0, 0, 3)
        assert iso.is_iso() and iso.is_intertwiner()
        assert iso.target.key == scrambled.key

    def test_resolve_zero(self, cat_a2):
        from exactcat.modules import zero_module

        indices, _ = cat_a2.resolve(zero_module(cat_a2.algebra))
        assert indices == ()

    def test_resolve_outside_catalog(self):
        cat = enumerate_indecomposables(testbeds.a3(), 2)  # misses the big one
        with pytest.raises(CatalogError, match="not in the catalog"):
            cat.resolve(testbeds.a3().projective(0))

    def test_multisets_up_to(self, cat_a2):
        ms = cat_a2.multisets_up_to(2)
        dims = [m.total_dim for m in cat_a2.entries]
        assert all(1 <= sum(dims[i] for i in t) <= 2 for t in ms)
        assert len(set(ms)) == len(ms)
        singles = [t for t in ms if len(t) == 1]
        assert len(singles) == 3
