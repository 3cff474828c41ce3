"""Finite-dimensional modules over a quiver algebra and their morphisms.

A module assigns a coordinate space F_p^{d_v} to every vertex and a matrix to
every arrow (acting source -> target on column vectors); a morphism is one
block per vertex intertwining the arrow actions.  All constructions used by
the homological layer live here: hom spaces, direct sums, sub/quotient
modules, kernels, images, pullbacks, pushouts and vector-space duality.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .ffield import FFMatrix, Subspace, kernel, solve


class ModuleError(ValueError):
    pass


class FDModule:
    """Quiver representation: dims per vertex, one matrix per arrow."""

    __slots__ = ("algebra", "dims", "act", "_key")

    def __init__(self, algebra, dims, act, check: bool = False):
        dims = tuple(int(d) for d in dims)
        if len(dims) != algebra.num_vertices:
            raise ModuleError("dimension vector length != number of vertices")
        if any(d < 0 for d in dims):
            raise ModuleError("negative dimension")
        act = tuple(act)
        if len(act) != len(algebra.arrows):
            raise ModuleError("need one action matrix per arrow")
        for idx, ((src, tgt), m) in enumerate(zip(algebra.arrows, act)):
            if m.shape != (dims[tgt], dims[src]):
                raise ModuleError(
                    f"arrow {idx} action has shape {m.shape}, "
                    f"expected {(dims[tgt], dims[src])}"
                )
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "act", act)
        object.__setattr__(self, "_key", None)
        if check and not self.satisfies_relations():
            raise ModuleError("action matrices violate the algebra relations")

    def __setattr__(self, *args):
        raise AttributeError("FDModule is immutable")

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    @property
    def key(self) -> bytes:
        if self._key is None:
            h = hashlib.sha1()
            h.update(self.algebra.spec_hash().encode())  # keys must not
            h.update(bytes(self.dims))  # collide across algebras
            for m in self.act:
                h.update(m.tobytes())
            object.__setattr__(self, "_key", h.digest())
        return self._key

    def path_action(self, start: int, arrows: tuple[int, ...]) -> FFMatrix:
        """Composite action of a path, identity on the start vertex if empty."""
        alg = self.algebra
        m = FFMatrix.identity(self.dims[start], self.p)
        for a in arrows:
            m = self.act[a] @ m
        return m

    def satisfies_relations(self) -> bool:
        alg = self.algebra
        for rel in alg.relations:
            src = alg.arrows[rel[0][1][0]][0]
            tgt = alg.arrows[rel[0][1][-1]][1]
            total = FFMatrix.zeros(self.dims[tgt], self.dims[src], self.p)
            for coeff, arrows in rel:
                total = total + self.path_action(src, arrows).scale(coeff)
            if not total.is_zero():
                return False
        return True

    def __repr__(self) -> str:
        return f"FDModule(dims={self.dims})"


class ModuleHom:
    """Morphism of representations: one block per vertex."""

    __slots__ = ("source", "target", "blocks")

    def __init__(self, source: FDModule, target: FDModule, blocks, check: bool = False):
        if source.algebra is not target.algebra:
            raise ModuleError("hom between modules over different algebras")
        blocks = tuple(blocks)
        for v, b in enumerate(blocks):
            if b.shape != (target.dims[v], source.dims[v]):
                raise ModuleError(
                    f"block {v} has shape {b.shape}, "
                    f"expected {(target.dims[v], source.dims[v])}"
                )
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "blocks", blocks)
        if check and not self.is_intertwiner():
            raise ModuleError("blocks do not intertwine the actions")

    def __setattr__(self, *args):
        raise AttributeError("ModuleHom is immutable")

    @property
    def p(self) -> int:
        return self.source.p

    def is_intertwiner(self) -> bool:
        alg = self.source.algebra
        for a, (i, j) in enumerate(alg.arrows):
            lhs = self.target.act[a] @ self.blocks[i]
            rhs = self.blocks[j] @ self.source.act[a]
            if lhs != rhs:
                return False
        return True

    @staticmethod
    def zero(source: FDModule, target: FDModule) -> "ModuleHom":
        p = source.p
        return ModuleHom(
            source,
            target,
            [
                FFMatrix.zeros(target.dims[v], source.dims[v], p)
                for v in range(len(source.dims))
            ],
        )

    @staticmethod
    def identity(module: FDModule) -> "ModuleHom":
        return ModuleHom(
            module,
            module,
            [FFMatrix.identity(d, module.p) for d in module.dims],
        )

    def __matmul__(self, other: "ModuleHom") -> "ModuleHom":
        """Composition self after other."""
        if other.target is not self.source and other.target.key != self.source.key:
            raise ModuleError("non-composable homs")
        return ModuleHom(
            other.source,
            self.target,
            [b1 @ b2 for b1, b2 in zip(self.blocks, other.blocks)],
        )

    def __add__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(
            self.source,
            self.target,
            [b1 + b2 for b1, b2 in zip(self.blocks, other.blocks)],
        )

    def __sub__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(
            self.source,
            self.target,
            [b1 - b2 for b1, b2 in zip(self.blocks, other.blocks)],
        )

    def scale(self, c: int) -> "ModuleHom":
        return ModuleHom(self.source, self.target, [b.scale(c) for b in self.blocks])

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks)

    def is_mono(self) -> bool:
        return all(kernel(b).dim == 0 for b in self.blocks)

    def is_epi(self) -> bool:
        return all(b.rank() == b.rows for b in self.blocks)

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_mono()

    def inverse(self) -> "ModuleHom":
        if not self.is_iso():
            raise ModuleError("hom is not invertible")
        return ModuleHom(self.target, self.source, [b.inverse() for b in self.blocks])

    def rank(self) -> int:
        return sum(b.rank() for b in self.blocks)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ModuleHom)
            and self.source.key == other.source.key
            and self.target.key == other.target.key
            and self.blocks == other.blocks
        )

    def __hash__(self) -> int:
        return hash((self.source.key, self.target.key, self.blocks))

    def key(self) -> bytes:
        h = hashlib.sha1()
        h.update(self.source.key)
        h.update(self.target.key)
        for b in self.blocks:
            h.update(b.tobytes())
        return h.digest()

    def __repr__(self) -> str:
        return f"ModuleHom({self.source.dims} -> {self.target.dims})"


def hom_space(x: FDModule, y: FDModule) -> list[ModuleHom]:
    """Basis of Hom(x, y), deterministic, from the intertwiner linear system.

    Unknowns are the stacked row-major vectorisations of the vertex blocks;
    each arrow a: i -> j contributes Y_a B_i - B_j X_a = 0.
    """
    if x.algebra is not y.algebra:
        raise ModuleError("hom between modules over different algebras")
    alg, p = x.algebra, x.p
    nv = alg.num_vertices
    sizes = [y.dims[v] * x.dims[v] for v in range(nv)]
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    total = int(offsets[-1])
    if total == 0:
        return []
    rows = []
    for a, (i, j) in enumerate(alg.arrows):
        n_eq = y.dims[j] * x.dims[i]
        if n_eq == 0:
            continue
        block = np.zeros((n_eq, total), dtype=np.int64)
        # vec_r(Y_a @ B_i) = (Y_a ⊗ I) vec_r(B_i)
        block[:, offsets[i] : offsets[i + 1]] = np.kron(
            y.act[a].a, np.eye(x.dims[i], dtype=np.int64)
        )
        # vec_r(B_j @ X_a) = (I ⊗ X_a^T) vec_r(B_j)
        block[:, offsets[j] : offsets[j + 1]] -= np.kron(
            np.eye(y.dims[j], dtype=np.int64), x.act[a].a.T
        )
        rows.append(block % p)
    if rows:
        system = FFMatrix(np.vstack(rows), p)
        null = kernel(system)
        flat_basis = null.basis.a
    else:
        flat_basis = np.eye(total, dtype=np.int64)
    out = []
    for flat in flat_basis:
        blocks = [
            FFMatrix(
                flat[offsets[v] : offsets[v + 1]].reshape(y.dims[v], x.dims[v]), p
            )
            for v in range(nv)
        ]
        out.append(ModuleHom(x, y, blocks))
    return out


def hom_flat(f: ModuleHom) -> np.ndarray:
    return np.concatenate([b.a.ravel() for b in f.blocks])


def hom_coordinates(basis: list[ModuleHom], f: ModuleHom) -> np.ndarray:
    """Coordinates of f in a hom_space basis.

    hom_space bases come from a kernel in RREF, so each basis hom has a
    leading position that is zero in all the others; coordinates are read off
    there and verified by reconstruction.
    """
    if not basis:
        if any(not b.is_zero() for b in f.blocks):
            raise ModuleError("hom does not lie in the span of the basis")
        return np.zeros(0, dtype=np.int64)
    p = f.p
    flat = hom_flat(f)
    mat = np.stack([hom_flat(h) for h in basis])
    leads = [int(np.nonzero(row)[0][0]) for row in mat]
    coords = flat[leads]
    if ((coords @ mat - flat) % p).any():
        raise ModuleError("hom does not lie in the span of the basis")
    return coords % p


def hom_from_coordinates(basis: list[ModuleHom], coords) -> ModuleHom:
    src, tgt = basis[0].source, basis[0].target
    out = ModuleHom.zero(src, tgt)
    for c, h in zip(coords, basis):
        if c % src.p:
            out = out + h.scale(int(c))
    return out


def zero_module(algebra) -> FDModule:
    p = algebra.p
    return FDModule(
        algebra,
        [0] * algebra.num_vertices,
        [FFMatrix.zeros(0, 0, p) for _ in algebra.arrows],
    )


def direct_sum(mods: list[FDModule]):
    """Block-diagonal sum; returns (module, inclusions, projections)."""
    if not mods:
        raise ModuleError("empty direct sum has no algebra; use zero_module")
    alg, p = mods[0].algebra, mods[0].p
    nv = alg.num_vertices
    dims = tuple(sum(m.dims[v] for m in mods) for v in range(nv))
    act = []
    for a, (i, j) in enumerate(alg.arrows):
        out = np.zeros((dims[j], dims[i]), dtype=np.int64)
        r = c = 0
        for m in mods:
            out[r : r + m.dims[j], c : c + m.dims[i]] = m.act[a].a
            r += m.dims[j]
            c += m.dims[i]
        act.append(FFMatrix(out, p))
    total = FDModule(alg, dims, act)
    incls, projs = [], []
    offsets = [0] * nv
    for m in mods:
        inc_blocks, proj_blocks = [], []
        for v in range(nv):
            inc = np.zeros((dims[v], m.dims[v]), dtype=np.int64)
            inc[offsets[v] : offsets[v] + m.dims[v], :] = np.eye(
                m.dims[v], dtype=np.int64
            )
            inc_blocks.append(FFMatrix(inc, p))
            proj_blocks.append(FFMatrix(inc.T, p))
        incls.append(ModuleHom(m, total, inc_blocks))
        projs.append(ModuleHom(total, m, proj_blocks))
        for v in range(nv):
            offsets[v] += m.dims[v]
    return total, incls, projs


def hom_from_components_out(total, projs, comps: list[ModuleHom]) -> ModuleHom:
    """Build ⊕M_k -> T from components M_k -> T (sum of comp ∘ proj)."""
    out = ModuleHom.zero(total, comps[0].target)
    for f, pr in zip(comps, projs):
        out = out + (f @ pr)
    return out


def hom_from_components_in(total, incls, comps: list[ModuleHom]) -> ModuleHom:
    """Build S -> ⊕M_k from components S -> M_k (sum of incl ∘ comp)."""
    out = ModuleHom.zero(comps[0].source, total)
    for f, inc in zip(comps, incls):
        out = out + (inc @ f)
    return out


def submodule(m: FDModule, spaces: list[Subspace]):
    """Submodule with the given vertex subspaces; returns (S, inclusion).

    Raises if the subspaces are not stable under the arrow actions.
    """
    alg, p = m.algebra, m.p
    for v, s in enumerate(spaces):
        if s.ambient_dim != m.dims[v]:
            raise ModuleError("subspace ambient mismatch at a vertex")
    act = []
    for a, (i, j) in enumerate(alg.arrows):
        bi = spaces[i].basis.transpose()  # columns = basis of the source space
        bj = spaces[j].basis.transpose()
        target_vectors = m.act[a] @ bi
        coords = solve(bj, target_vectors)
        if coords is None or (bj @ coords) != target_vectors:
            raise ModuleError("vertex subspaces are not action-stable")
        act.append(coords)
    sub = FDModule(alg, [s.dim for s in spaces], act)
    incl = ModuleHom(sub, m, [s.basis.transpose() for s in spaces])
    return sub, incl


def generated_submodule(m: FDModule, vectors: list[list[np.ndarray]]):
    """Smallest action-stable family of subspaces containing the vectors.

    vectors[v] lists generators inside F_p^{dims[v]}.
    """
    p = m.p
    spans = []
    for v in range(len(m.dims)):
        vecs = vectors[v]
        if vecs:
            spans.append(Subspace(FFMatrix(np.stack(vecs), p)))
        else:
            spans.append(Subspace.zero(m.dims[v], p))
    changed = True
    while changed:
        changed = False
        for a, (i, j) in enumerate(m.algebra.arrows):
            if spans[i].dim == 0:
                continue
            image = Subspace((m.act[a] @ spans[i].basis.transpose()).transpose())
            merged = spans[j].sum(image)
            if merged.dim != spans[j].dim:
                spans[j] = merged
                changed = True
    return spans


def quotient_module(m: FDModule, spaces: list[Subspace]):
    """Quotient by action-stable vertex subspaces; returns (Q, proj, sections).

    sections[v] is a linear (not module) right inverse of proj at vertex v.
    """
    alg, p = m.algebra, m.p
    qmaps = [s.quotient_map() for s in spaces]
    secs = [s.section() for s in spaces]
    act = []
    for a, (i, j) in enumerate(alg.arrows):
        act.append(qmaps[j] @ m.act[a] @ secs[i])
    q = FDModule(alg, [qm.rows for qm in qmaps], act)
    proj = ModuleHom(m, q, qmaps)
    # stability check: the induced action must commute with the projection
    for a, (i, j) in enumerate(alg.arrows):
        if (q.act[a] @ qmaps[i]) != (qmaps[j] @ m.act[a]):
            raise ModuleError("vertex subspaces are not action-stable")
    return q, proj, secs


def kernel_hom(f: ModuleHom):
    """(K, inclusion) with K the vertexwise kernel of f."""
    spaces = [kernel(b) for b in f.blocks]
    return submodule(f.source, spaces)


def image_hom(f: ModuleHom):
    """(image, inclusion into target)."""
    spaces = [Subspace(b.transpose()) for b in f.blocks]
    return submodule(f.target, spaces)


def cokernel_hom(f: ModuleHom):
    """(C, projection, sections) for target/f(source)."""
    spaces = [Subspace(b.transpose()) for b in f.blocks]
    return quotient_module(f.target, spaces)


def pullback(f: ModuleHom, g: ModuleHom):
    """Pullback of f: X -> Z, g: Y -> Z; returns (P, to_x, to_y)."""
    if f.target.key != g.target.key:
        raise ModuleError("pullback needs a common target")
    total, incls, projs = direct_sum([f.source, g.source])
    diff = (f @ projs[0]) - (g @ projs[1])
    pb, incl = kernel_hom(diff)
    return pb, projs[0] @ incl, projs[1] @ incl


def pushout(f: ModuleHom, g: ModuleHom):
    """Pushout of f: Z -> X, g: Z -> Y; returns (P, from_x, from_y)."""
    if f.source.key != g.source.key:
        raise ModuleError("pushout needs a common source")
    total, incls, projs = direct_sum([f.target, g.target])
    span = (incls[0] @ f) - (incls[1] @ g)
    po, proj, _ = cokernel_hom(span)
    return po, proj @ incls[0], proj @ incls[1]


def dual_module(m: FDModule) -> FDModule:
    """Vector-space dual as a module over the opposite algebra."""
    op = m.algebra.opposite
    return FDModule(op, m.dims, [b.transpose() for b in m.act])


def dual_hom(f: ModuleHom) -> ModuleHom:
    return ModuleHom(
        dual_module(f.target), dual_module(f.source), [b.transpose() for b in f.blocks]
    )
