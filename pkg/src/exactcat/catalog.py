"""Exhaustive catalogs of indecomposable modules.

Enumeration walks all dimension vectors up to a bound and all action-matrix
tuples (budget-guarded), keeps one representative per isomorphism class, and
flags projectives (the projective cover is an isomorphism) and injectives
(dual test over the opposite algebra).  For path algebras of Dynkin quivers
completeness is cross-checked against an independent positive-root count via
the Tits form.
"""

from __future__ import annotations

import hashlib
import itertools

import numpy as np

from .ffield import BudgetError, FFMatrix
from .modules import FDModule, ModuleHom, direct_sum, dual_module, hom_space, zero_module
from .decompose import decompose, iso_indec
from .ext import projective_cover


class CatalogError(ValueError):
    pass


def iter_action_tuples(alg, dims):
    """All action-matrix tuples for a dimension vector, in lexicographic order."""
    p = alg.p
    shapes = [(dims[t], dims[s]) for (s, t) in alg.arrows]
    ranges = [range(p ** (r * c)) for (r, c) in shapes]
    for codes in itertools.product(*ranges):
        acts = []
        for code, (r, c) in zip(codes, shapes):
            cells = np.zeros(r * c, dtype=np.int64)
            for k in range(r * c - 1, -1, -1):
                cells[k] = code % p
                code //= p
            acts.append(FFMatrix(cells.reshape(r, c), p))
        yield tuple(acts)


def _search_size(alg, dims) -> int:
    cells = sum(dims[t] * dims[s] for (s, t) in alg.arrows)
    return alg.p**cells


def _dimension_vectors(num_vertices: int, bound: int):
    for total in range(1, bound + 1):
        for dims in itertools.product(range(total + 1), repeat=num_vertices):
            if sum(dims) == total:
                yield dims


def is_projective_module(m: FDModule) -> bool:
    """Projective iff the projective cover has the same total dimension."""
    if m.total_dim == 0:
        return True
    psum, _ = projective_cover(m)
    return psum.module.total_dim == m.total_dim


def is_injective_module(m: FDModule) -> bool:
    return is_projective_module(dual_module(m))


class IndecomposableCatalog:
    """Complete list of indecomposables up to the dimension bound."""

    def __init__(self, algebra, entries, proj_flags, inj_flags, dim_bound):
        self.algebra = algebra
        self.entries: list[FDModule] = entries
        self.proj_flags: list[bool] = proj_flags
        self.inj_flags: list[bool] = inj_flags
        self.dim_bound = dim_bound
        self.index_by_key = {m.key: k for k, m in enumerate(entries)}
        self._match_cache: dict[bytes, tuple[int, ModuleHom]] = {}
        self._resolve_cache: dict[bytes, tuple[tuple[int, ...], ModuleHom]] = {}
        self._sum_cache: dict[tuple[int, ...], tuple] = {}
        self._hom_cache: dict[tuple[bytes, bytes], list[ModuleHom]] = {}
        self.cache: dict = {}  # scratch space for downstream layers

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def max_entry_dim(self) -> int:
        return max((m.total_dim for m in self.entries), default=0)

    def hash(self) -> str:
        h = hashlib.sha256()
        h.update(self.algebra.spec_hash().encode())
        h.update(bytes([self.dim_bound & 0xFF]))
        for m in self.entries:
            h.update(m.key)
        return h.hexdigest()

    # -- memoized hom spaces -------------------------------------------------

    def hom(self, x: FDModule, y: FDModule) -> list[ModuleHom]:
        key = (x.key, y.key)
        out = self._hom_cache.get(key)
        if out is None:
            out = hom_space(x, y)
            self._hom_cache[key] = out
        return out

    def entry_hom(self, i: int, j: int) -> list[ModuleHom]:
        return self.hom(self.entries[i], self.entries[j])

    # -- canonical sums and resolution into the catalog ------------------------

    def canonical_sum(self, indices: tuple[int, ...]):
        """(module, inclusions, projections) of ⊕ entries[i], memoized."""
        indices = tuple(indices)
        if sorted(indices) != list(indices):
            raise CatalogError("canonical sums take ascending index tuples")
        out = self._sum_cache.get(indices)
        if out is None:
            if indices:
                out = direct_sum([self.entries[i] for i in indices])
            else:
                out = (zero_module(self.algebra), [], [])
            self._sum_cache[indices] = out
        return out

    def _match_entry(self, summand: FDModule) -> tuple[int, ModuleHom]:
        hit = self._match_cache.get(summand.key)
        if hit is not None:
            return hit
        for idx, entry in enumerate(self.entries):
            if entry.dims != summand.dims:
                continue
            iso = iso_indec(entry, summand)
            if iso is not None:
                self._match_cache[summand.key] = (idx, iso)
                return idx, iso
        raise CatalogError(
            f"indecomposable of dims {summand.dims} is not in the catalog; "
            "the dimension bound is too small for this computation"
        )

    def resolve(self, m: FDModule):
        """(ascending index tuple, iso: canonical_sum -> m), memoized."""
        hit = self._resolve_cache.get(m.key)
        if hit is not None:
            return hit
        if m.total_dim == 0:
            canon, _, _ = self.canonical_sum(())
            result = ((), ModuleHom.zero(canon, m))
            self._resolve_cache[m.key] = result
            return result
        dec = decompose(m)
        matched = [self._match_entry(s) for s in dec.summands]
        order = sorted(range(len(matched)), key=lambda k: (matched[k][0], k))
        indices = tuple(matched[k][0] for k in order)
        canon, canon_incls, canon_projs = self.canonical_sum(indices)
        total_dec, dec_incls, _ = direct_sum(dec.summands)
        middle = ModuleHom.zero(canon, total_dec)
        for slot, k in enumerate(order):
            idx, iso = matched[k]
            middle = middle + (dec_incls[k] @ iso @ canon_projs[slot])
        iso_total = dec.from_sum @ middle
        if not iso_total.is_iso():
            raise CatalogError("resolution certificate failed invertibility")
        result = (indices, iso_total)
        self._resolve_cache[m.key] = result
        return result

    def multiset_of(self, m: FDModule) -> tuple[int, ...]:
        return self.resolve(m)[0]

    def multisets_up_to(self, max_total: int, include_empty: bool = False):
        """All ascending index multisets with total dimension <= max_total."""
        dims = [m.total_dim for m in self.entries]
        out: list[tuple[int, ...]] = [()] if include_empty else []

        def extend(prefix, start, remaining):
            for i in range(start, len(self.entries)):
                if dims[i] <= remaining:
                    prefix.append(i)
                    out.append(tuple(prefix))
                    extend(prefix, i, remaining - dims[i])
                    prefix.pop()

        extend([], 0, max_total)
        return sorted(out, key=lambda t: (sum(dims[i] for i in t), t))

    def __repr__(self) -> str:
        return (
            f"IndecomposableCatalog({len(self.entries)} entries, "
            f"bound={self.dim_bound})"
        )


def enumerate_indecomposables(
    alg,
    dim_bound: int,
    budget: int = 1 << 22,
) -> IndecomposableCatalog:
    """Exhaustive catalog of indecomposables with total dim <= dim_bound."""
    total_size = sum(
        _search_size(alg, dims) for dims in _dimension_vectors(alg.num_vertices, dim_bound)
    )
    if total_size > budget:
        raise BudgetError(
            f"action-matrix search space has {total_size} points, budget {budget}"
        )
    entries: list[FDModule] = []
    for dims in _dimension_vectors(alg.num_vertices, dim_bound):
        for acts in iter_action_tuples(alg, dims):
            m = FDModule(alg, dims, acts)
            if not m.satisfies_relations():
                continue
            known = False
            for e in entries:
                if e.dims == m.dims and iso_indec(e, m) is not None:
                    known = True
                    break
            if known:
                continue
            if len(decompose(m).summands) != 1:
                continue
            entries.append(m)
    order = sorted(
        range(len(entries)),
        key=lambda k: (entries[k].total_dim, entries[k].dims, entries[k].key),
    )
    entries = [entries[k] for k in order]
    proj_flags = [is_projective_module(m) for m in entries]
    inj_flags = [is_injective_module(m) for m in entries]
    return IndecomposableCatalog(alg, entries, proj_flags, inj_flags, dim_bound)


# ---------------------------------------------------------------------------
# independent root-count oracle (Gabriel count for Dynkin path algebras)


def _bareiss_minors_positive(mat: np.ndarray) -> bool:
    """All leading principal minors positive, in exact integer arithmetic."""
    n = mat.shape[0]
    a = [[int(x) for x in row] for row in mat]
    prev = 1
    for k in range(n):
        if a[k][k] <= 0:
            # Bareiss pivots are the leading minors (scaled positively)
            return False
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return True


def tits_form_positive_definite(alg) -> bool:
    """Positive definiteness of q(d) = sum d_i^2 - sum_arrows d_s d_t."""
    n = alg.num_vertices
    sym = 2 * np.eye(n, dtype=np.int64)
    for src, tgt in alg.arrows:
        sym[src, tgt] -= 1
        sym[tgt, src] -= 1
    return _bareiss_minors_positive(sym)


def positive_root_count(alg, coord_cap: int = 6) -> int:
    """Number of positive roots of the Tits form (counts indecomposables
    for path algebras of Dynkin quivers; independent of the enumeration)."""
    if alg.relations:
        raise CatalogError("root counting applies to path algebras only")
    if not tits_form_positive_definite(alg):
        raise CatalogError("Tits form is not positive definite (not Dynkin)")
    n = alg.num_vertices
    count = 0
    for d in itertools.product(range(coord_cap + 1), repeat=n):
        if not any(d):
            continue
        q = sum(x * x for x in d) - sum(d[s] * d[t] for (s, t) in alg.arrows)
        if q == 1:
            count += 1
    return count
