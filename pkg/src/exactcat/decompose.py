"""Krull-Schmidt decomposition, isomorphism testing and endomorphism radicals.

Indecomposability is decided through idempotents: a module is indecomposable
iff its endomorphism ring has no idempotent besides 0 and 1.  Splitting uses
Fitting's lemma on candidate endomorphisms (basis elements, products, seeded
random combinations) with an exhaustive idempotent scan as fallback when the
endomorphism ring is small enough to enumerate.
"""

from __future__ import annotations

import itertools

import numpy as np

from .ffield import BudgetError, FFMatrix, Subspace, kernel
from .modules import FDModule, ModuleHom, direct_sum, hom_space, submodule

EXHAUSTIVE_END_LIMIT = 1 << 16
EXHAUSTIVE_ISO_LIMIT = 1 << 12
RANDOM_TRIES = 200


def _power(f: ModuleHom, n: int) -> ModuleHom:
    result = ModuleHom.identity(f.source)
    base = f
    while n:
        if n & 1:
            result = result @ base
        base = base @ base
        n >>= 1
    return result


def fitting_spaces(f: ModuleHom):
    """(kernel, image) vertex subspaces of f^N, N = total dimension.

    Returns None unless both parts are proper (i.e. unless the split is
    trivial).  For any endomorphism these two submodules decompose the module.
    """
    m = f.source
    n = m.total_dim
    fn = _power(f, max(1, n))
    ker_spaces = [kernel(b) for b in fn.blocks]
    ker_dim = sum(s.dim for s in ker_spaces)
    if ker_dim == 0 or ker_dim == n:
        return None
    im_spaces = [Subspace(b.transpose()) for b in fn.blocks]
    return ker_spaces, im_spaces


def _endo_candidates(end: list[ModuleHom], rng):
    """Fitting candidates: basis, pairwise products, then random combos."""
    for f in end:
        yield f
    for f, g in itertools.islice(itertools.combinations(end, 2), 64):
        yield f @ g
        yield f + g
    d = len(end)
    for _ in range(RANDOM_TRIES):
        coeffs = rng.integers(0, end[0].p, size=d)
        if not coeffs.any():
            continue
        f = ModuleHom.zero(end[0].source, end[0].target)
        for c, h in zip(coeffs, end):
            if c:
                f = f + h.scale(int(c))
        yield f


def _idempotent_scan(m: FDModule, end: list[ModuleHom]):
    """Exhaustive scan for a nontrivial idempotent; None if there is none.

    Sound in both directions (the ring is finite), used when p^dim(End) is
    within EXHAUSTIVE_END_LIMIT.
    """
    p = m.p
    n = m.total_dim
    mats = []
    for h in end:
        total = np.zeros((n, n), dtype=np.int64)
        r = 0
        for v, d in enumerate(m.dims):
            c = sum(m.dims[:v])
            total[c : c + d, c : c + d] = h.blocks[v].a
            r += d
        mats.append(total)
    eye = np.eye(n, dtype=np.int64)
    for coeffs in itertools.product(range(p), repeat=len(end)):
        e = sum((c * mat for c, mat in zip(coeffs, mats) if c), start=np.zeros((n, n), dtype=np.int64)) % p
        if not e.any() or np.array_equal(e, eye):
            continue
        if np.array_equal((e @ e) % p, e):
            hom = ModuleHom.zero(m, m)
            for c, h in zip(coeffs, end):
                if c:
                    hom = hom + h.scale(int(c))
            return hom
    return None


def _split_once(m: FDModule, end: list[ModuleHom], rng):
    """One splitting step: (spaces_a, spaces_b) vertex subspaces, or None."""
    for f in _endo_candidates(end, rng):
        split = fitting_spaces(f)
        if split is not None:
            return split
    if m.p ** len(end) <= EXHAUSTIVE_END_LIMIT:
        e = _idempotent_scan(m, end)
        if e is None:
            return None
        ker_spaces = [kernel(b) for b in e.blocks]
        im_spaces = [Subspace(b.transpose()) for b in e.blocks]
        return ker_spaces, im_spaces
    # endomorphism ring too large to enumerate and no candidate split:
    # treat as indecomposable (unreachable for catalog-sized inputs)
    return None


class Decomposition:
    """Direct-sum decomposition with invertible certificate maps.

    summands are indecomposable; to_sum: module -> ⊕ summands and from_sum
    are mutually inverse module isomorphisms.
    """

    def __init__(self, module: FDModule, summands, to_sum, from_sum):
        self.module = module
        self.summands = summands
        self.to_sum = to_sum
        self.from_sum = from_sum

    def __repr__(self) -> str:
        return f"Decomposition({[s.dims for s in self.summands]})"


def decompose(m: FDModule) -> Decomposition:
    """Full Krull-Schmidt decomposition with certificate isomorphisms."""
    rng = np.random.default_rng(int.from_bytes(m.key[:8], "big"))
    inclusions: list[ModuleHom] = []

    def recurse(incl: ModuleHom):
        sub = incl.source
        if sub.total_dim == 0:
            return
        end = hom_space(sub, sub)
        if len(end) == 1:
            inclusions.append(incl)
            return
        split = _split_once(sub, end, rng)
        if split is None:
            inclusions.append(incl)
            return
        spaces_a, spaces_b = split
        part_a, incl_a = submodule(sub, spaces_a)
        part_b, incl_b = submodule(sub, spaces_b)
        recurse(incl @ incl_a)
        recurse(incl @ incl_b)

    recurse(ModuleHom.identity(m))
    if not inclusions:
        # zero module: empty summand list, identity certificates by convention
        ident = ModuleHom.identity(m)
        return Decomposition(m, [], ident, ident)
    summands = [inc.source for inc in inclusions]
    total, sum_incls, sum_projs = direct_sum(summands)
    # from_sum: ⊕ summands -> m via the collected inclusions
    from_sum = ModuleHom.zero(total, m)
    for inc, pr in zip(inclusions, sum_projs):
        from_sum = from_sum + (inc @ pr)
    if not from_sum.is_iso():
        raise RuntimeError("decomposition certificate failed to be invertible")
    to_sum = from_sum.inverse()
    return Decomposition(m, summands, to_sum, from_sum)


def is_indecomposable(m: FDModule) -> bool:
    return m.total_dim > 0 and len(decompose(m).summands) == 1


def iso_indec(u: FDModule, v: FDModule) -> ModuleHom | None:
    """Isomorphism between indecomposables, None if there is none.

    Exhaustive over Hom(u, v) when small; a failure to find an invertible
    element there is a sound negative because u, v are indecomposable.
    """
    if u.dims != v.dims:
        return None
    if u.key == v.key:
        return ModuleHom.identity(u)
    homs = hom_space(u, v)
    if not homs:
        return None
    back = hom_space(v, u)
    if len(back) != len(homs):
        return None
    d = len(homs)
    p = u.p
    if p**d <= EXHAUSTIVE_ISO_LIMIT:
        for coeffs in itertools.product(range(p), repeat=d):
            f = None
            for c, h in zip(coeffs, homs):
                if c:
                    f = h.scale(c) if f is None else f + h.scale(c)
            if f is not None and f.is_iso():
                return f
        return None
    rng = np.random.default_rng(int.from_bytes(u.key[:4] + v.key[:4], "big"))
    for h in homs:
        if h.is_iso():
            return h
    for _ in range(RANDOM_TRIES):
        coeffs = rng.integers(0, p, size=d)
        f = None
        for c, h in zip(coeffs, homs):
            if c:
                f = h.scale(int(c)) if f is None else f + h.scale(int(c))
        if f is not None and f.is_iso():
            return f
    raise BudgetError(
        f"iso search between indecomposables exceeded budget (hom dim {d})"
    )


def is_isomorphic(x: FDModule, y: FDModule) -> ModuleHom | None:
    """Invertible intertwiner x -> y, or None; decided through decompositions."""
    if x.algebra is not y.algebra:
        return None
    if x.dims != y.dims:
        return None
    if x.key == y.key:
        return ModuleHom.identity(x)
    if x.total_dim == 0:
        return ModuleHom.identity(x)
    dx, dy = decompose(x), decompose(y)
    if len(dx.summands) != len(dy.summands):
        return None
    used = [False] * len(dy.summands)
    pair_isos: list[tuple[int, ModuleHom]] = []
    for u in dx.summands:
        found = None
        for k, v in enumerate(dy.summands):
            if used[k]:
                continue
            iso = iso_indec(u, v)
            if iso is not None:
                found = (k, iso)
                break
        if found is None:
            return None
        used[found[0]] = True
        pair_isos.append(found)
    totx, _, projs_x = direct_sum(dx.summands)
    toty, incls_y, _ = direct_sum(dy.summands)
    middle = ModuleHom.zero(totx, toty)
    for k, (target_slot, iso) in enumerate(pair_isos):
        middle = middle + (incls_y[target_slot] @ iso @ projs_x[k])
    result = dy.from_sum @ middle @ dx.to_sum
    if not result.is_iso():
        raise RuntimeError("assembled isomorphism failed invertibility")
    return result


def indec_end_radical(u: FDModule) -> Subspace:
    """Radical of End(u) for u indecomposable, in hom-basis coordinates.

    End(u) is local, so the radical is exactly the set of nilpotent elements;
    it is found by exhaustive scan (budget-guarded).
    """
    end = hom_space(u, u)
    d = len(end)
    p = u.p
    if p**d > EXHAUSTIVE_END_LIMIT:
        raise BudgetError(f"End dimension {d} too large for radical scan")
    n = u.total_dim
    nilrows = []
    for coeffs in itertools.product(range(p), repeat=d):
        f = None
        for c, h in zip(coeffs, end):
            if c:
                f = h.scale(c) if f is None else f + h.scale(c)
        if f is None:
            continue
        fn = _power(f, max(1, n))
        if fn.is_zero():
            nilrows.append(np.array(coeffs, dtype=np.int64))
    if not nilrows:
        return Subspace.zero(d, p)
    return Subspace(FFMatrix(np.stack(nilrows), p))


def noniso_hom_subspace(u: FDModule, v: FDModule) -> Subspace:
    """Non-invertible part of Hom(u, v) for indecomposables u, v.

    A subspace: when u ≇ v it is all of Hom; when u ≅ v it corresponds to
    the radical of End under any isomorphism.
    """
    homs = hom_space(u, v)
    d = len(homs)
    p = u.p
    if u.dims != v.dims:
        return Subspace.full(d, p)
    if p**d > EXHAUSTIVE_END_LIMIT:
        raise BudgetError(f"hom dimension {d} too large for non-iso scan")
    rows = []
    for coeffs in itertools.product(range(p), repeat=d):
        f = None
        for c, h in zip(coeffs, homs):
            if c:
                f = h.scale(c) if f is None else f + h.scale(c)
        if f is None or not f.is_iso():
            rows.append(np.array(coeffs, dtype=np.int64))
    if not rows:
        return Subspace.zero(d, p)
    return Subspace(FFMatrix(np.stack(rows), p))
