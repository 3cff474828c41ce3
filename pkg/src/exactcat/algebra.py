"""Finite-dimensional algebras presented by a quiver with relations.

The algebra is the path algebra of the quiver modulo the two-sided ideal
generated by the relations.  Relations must be linear combinations of
parallel paths of a common length >= 2 (so the ideal is admissible and
length-graded); the path basis of the quotient is computed grade by grade and
the computation stops exactly when one whole grade dies, which forces all
higher grades to die as well.

Paths compose left to right: in ``a*b`` arrow ``a`` is traversed first, so
``target(a) == source(b)`` and the path acts as ``act[b] @ act[a]`` on
representations.
"""

from __future__ import annotations

import hashlib
import json
import re

import numpy as np

from .ffield import BudgetError, FFMatrix, Subspace, check_prime
from .modules import FDModule, dual_module


class AlgebraError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|([*+-]))")


def parse_relation(text: str, name_to_arrow: dict[str, int], p: int):
    """Parse 'a*b - 2*c*d' into [(coeff, (arrow, ...)), ...]."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise AlgebraError(f"cannot tokenize relation {text!r} at offset {pos}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            tokens.append(("name", name))
        else:
            tokens.append(("op", op))
        pos = m.end()
    terms = []
    sign = 1
    coeff = None
    arrows: list[int] = []

    def flush():
        nonlocal coeff, arrows, sign
        if coeff is None and not arrows:
            raise AlgebraError(f"empty term in relation {text!r}")
        if not arrows:
            raise AlgebraError(
                f"constant term in relation {text!r}; relations must be "
                "combinations of paths of length >= 2"
            )
        c = (sign * (1 if coeff is None else coeff)) % p
        terms.append((c, tuple(arrows)))
        coeff, arrows, sign = None, [], 1

    expect_factor = True
    for kind, value in tokens:
        if kind == "op" and value in "+-":
            if expect_factor and (coeff is not None or arrows):
                raise AlgebraError(f"dangling '*' in relation {text!r}")
            if coeff is not None or arrows:
                flush()
            sign = 1 if value == "+" else -1
            expect_factor = True
        elif kind == "op" and value == "*":
            expect_factor = True
        elif kind == "num":
            if coeff is not None:
                coeff = coeff * value
            else:
                coeff = value
            expect_factor = False
        else:
            if value not in name_to_arrow:
                raise AlgebraError(f"unknown arrow {value!r} in relation {text!r}")
            arrows.append(name_to_arrow[value])
            expect_factor = False
    flush()
    combined: dict[tuple, int] = {}
    for c, a in terms:
        combined[a] = (combined.get(a, 0) + c) % p
    return [(c, a) for a, c in sorted(combined.items()) if c]


class FDAlgebra:
    """Path algebra of a quiver modulo an admissible graded ideal."""

    def __init__(
        self,
        p: int,
        num_vertices: int,
        arrows,
        relations=(),
        arrow_names=None,
        max_path_len: int = 24,
        path_budget: int = 100_000,
    ):
        check_prime(p)
        if num_vertices < 1:
            raise AlgebraError("need at least one vertex")
        arrows = [tuple(a) for a in arrows]
        for src, tgt in arrows:
            if not (0 <= src < num_vertices and 0 <= tgt < num_vertices):
                raise AlgebraError(f"arrow endpoints ({src},{tgt}) out of range")
        if arrow_names is None:
            arrow_names = [f"a{k}" for k in range(len(arrows))]
        if len(set(arrow_names)) != len(arrow_names):
            raise AlgebraError("duplicate arrow names")
        self.p = p
        self.num_vertices = num_vertices
        self.arrows = arrows
        self.arrow_names = list(arrow_names)
        self.max_path_len = max_path_len
        self.path_budget = path_budget
        name_to_arrow = {n: k for k, n in enumerate(arrow_names)}
        parsed = []
        for rel in relations:
            if isinstance(rel, str):
                parsed.append(parse_relation(rel, name_to_arrow, p))
            else:
                combined: dict[tuple, int] = {}
                for c, a in rel:
                    a = tuple(a)
                    combined[a] = (combined.get(a, 0) + int(c)) % p
                parsed.append([(c, a) for a, c in sorted(combined.items()) if c])
        self.relations = [r for r in parsed if r]
        self._validate_relations()
        self._opposite: FDAlgebra | None = None
        self._projectives: dict[int, FDModule] = {}
        self._simples: dict[int, FDModule] = {}
        self._injectives: dict[int, FDModule] = {}
        self._build()
        self._check_associativity()

    # -- presentation checks -------------------------------------------------

    def _path_endpoints(self, arrows: tuple[int, ...]) -> tuple[int, int]:
        src = self.arrows[arrows[0]][0]
        cur = src
        for a in arrows:
            if self.arrows[a][0] != cur:
                raise AlgebraError(f"non-composable path {arrows}")
            cur = self.arrows[a][1]
        return src, cur

    def _validate_relations(self):
        for rel in self.relations:
            shapes = set()
            for coeff, arrows in rel:
                if len(arrows) < 2:
                    raise AlgebraError(
                        "relation contains a path of length < 2; "
                        "the ideal would not be admissible"
                    )
                src, tgt = self._path_endpoints(arrows)
                shapes.add((src, tgt, len(arrows)))
            if len(shapes) != 1:
                raise AlgebraError(
                    "relation mixes paths of different endpoints or lengths; "
                    "only parallel length-homogeneous relations are supported"
                )

    # -- path basis of the quotient ------------------------------------------

    def _build(self):
        nv, p = self.num_vertices, self.p
        rel_by_grade: dict[tuple[int, int, int], list] = {}
        for rel in self.relations:
            src, tgt = self._path_endpoints(rel[0][1])
            rel_by_grade.setdefault((len(rel[0][1]), src, tgt), []).append(rel)

        # level_paths[l][(i, j)] -> ordered list of arrow tuples
        level_paths = [
            {(v, v): [()] for v in range(nv)},
            {},
        ]
        for k, (src, tgt) in sorted(enumerate(self.arrows), key=lambda t: t[0]):
            level_paths[1].setdefault((src, tgt), []).append((k,))
        # ideal/alive bookkeeping; grades 0 and 1 are untouched (admissible)
        self._ideal: list[dict] = [{}, {}]
        alive = [dict(level_paths[0]), dict(level_paths[1])]
        grade = 1
        self._stable_grade = None
        while True:
            grade += 1
            if grade > self.max_path_len:
                raise AlgebraError(
                    f"no finite path basis within length {self.max_path_len}; "
                    "the quotient looks infinite-dimensional"
                )
            prev = level_paths[grade - 1]
            cur: dict[tuple[int, int], list] = {}
            for (i, v), paths in sorted(prev.items()):
                for q in paths:
                    for k, (src, tgt) in enumerate(self.arrows):
                        if src == v:
                            cur.setdefault((i, tgt), []).append(q + (k,))
            for key in cur:
                cur[key].sort()
            total = sum(len(v) for v in cur.values())
            if total > self.path_budget:
                raise BudgetError(
                    f"{total} paths at length {grade} exceed budget {self.path_budget}"
                )
            level_paths.append(cur)
            ideal_grade, alive_grade = self._ideal_at_grade(
                grade, level_paths, rel_by_grade
            )
            self._ideal.append(ideal_grade)
            alive.append(alive_grade)
            n_alive = sum(len(v) for v in alive_grade.values())
            if total == 0 or n_alive == 0:
                # a fully dead grade stays dead: any longer path is an arrow
                # multiple of a dead one, and the ideal is two-sided
                self._stable_grade = grade
                break

        self._level_paths = level_paths
        self._level_pos = [
            {pair: {q: k for k, q in enumerate(paths)} for pair, paths in lvl.items()}
            for lvl in level_paths
        ]
        basis = []
        for ell, lvl in enumerate(alive):
            for pair in sorted(lvl):
                for q in lvl[pair]:
                    basis.append((pair[0], q))
        self.basis = basis
        self.basis_index = {b: k for k, b in enumerate(basis)}
        self.dim = len(basis)
        self.pair_basis: dict[tuple[int, int], list[int]] = {}
        for idx, (start, q) in enumerate(basis):
            tgt = start if not q else self.arrows[q[-1]][1]
            self.pair_basis.setdefault((start, tgt), []).append(idx)
        self._nf_cache: dict[tuple[int, tuple], np.ndarray] = {}
        self._build_mult()

    def _ideal_at_grade(self, grade, level_paths, rel_by_grade):
        p = self.p
        cur = level_paths[grade]
        gens: dict[tuple[int, int], list[np.ndarray]] = {}
        pos_cur = {
            pair: {q: k for k, q in enumerate(paths)} for pair, paths in cur.items()
        }

        def add_row(pair, row):
            gens.setdefault(pair, []).append(row)

        for (ell, src, tgt), rels in rel_by_grade.items():
            if ell != grade or (src, tgt) not in cur:
                continue
            for rel in rels:
                row = np.zeros(len(cur[(src, tgt)]), dtype=np.int64)
                for coeff, arrows in rel:
                    row[pos_cur[(src, tgt)][arrows]] += coeff
                add_row((src, tgt), row % p)
        prev_ideal = self._ideal[grade - 1] if grade - 1 < len(self._ideal) else {}
        for (i, j), space in prev_ideal.items():
            if space.dim == 0:
                continue
            for rowvec in space.basis.a:
                support = [
                    (q, int(c))
                    for q, c in zip(level_paths[grade - 1][(i, j)], rowvec)
                    if c
                ]
                for k, (src, tgt) in enumerate(self.arrows):
                    if tgt == i and (src, j) in cur:  # left multiply by arrow k
                        row = np.zeros(len(cur[(src, j)]), dtype=np.int64)
                        for q, c in support:
                            row[pos_cur[(src, j)][(k,) + q]] = c
                        add_row((src, j), row)
                    if src == j and (i, tgt) in cur:  # right multiply by arrow k
                        row = np.zeros(len(cur[(i, tgt)]), dtype=np.int64)
                        for q, c in support:
                            row[pos_cur[(i, tgt)][q + (k,)]] = c
                        add_row((i, tgt), row)
        ideal_grade: dict[tuple[int, int], Subspace] = {}
        alive_grade: dict[tuple[int, int], list] = {}
        for pair, paths in sorted(cur.items()):
            rows = gens.get(pair)
            if rows:
                space = Subspace(FFMatrix(np.stack(rows), p))
            else:
                space = Subspace.zero(len(paths), p)
            ideal_grade[pair] = space
            alive_grade[pair] = [
                q for k, q in enumerate(paths) if k not in space.pivots
            ]
        return ideal_grade, alive_grade

    def nf(self, start: int, arrows: tuple[int, ...]) -> np.ndarray:
        """Normal form of a raw path as a coefficient vector over the basis."""
        key = (start, arrows)
        cached = self._nf_cache.get(key)
        if cached is not None:
            return cached
        out = np.zeros(self.dim, dtype=np.int64)
        ell = len(arrows)
        if ell < len(self._level_paths):
            tgt = start if not arrows else self.arrows[arrows[-1]][1]
            pair = (start, tgt)
            paths = self._level_paths[ell].get(pair, [])
            if arrows in self._level_pos[ell].get(pair, {}):
                vec = np.zeros(len(paths), dtype=np.int64)
                vec[self._level_pos[ell][pair][arrows]] = 1
                space = self._ideal[ell].get(pair) if ell < len(self._ideal) else None
                if space is not None and space.dim:
                    vec = space.reduce(vec)
                for q, c in zip(paths, vec):
                    if c:
                        out[self.basis_index[(start, q)]] = c
        self._nf_cache[key] = out
        return out

    def _build_mult(self):
        dim, p = self.dim, self.p
        t = np.zeros((dim, dim, dim), dtype=np.int64)
        for u, (su, qu) in enumerate(self.basis):
            tu = su if not qu else self.arrows[qu[-1]][1]
            for v, (sv, qv) in enumerate(self.basis):
                if sv != tu:
                    continue
                t[u, v] = self.nf(su, qu + qv)
        self.mult = t

    def _check_associativity(self):
        t, p = self.mult, self.p
        dim = self.dim
        for w in range(dim):
            mw = t[:, w, :]  # (v, out): right multiplication by w
            lhs = (t.reshape(dim * dim, dim) @ mw) % p
            rhs = np.einsum("vz,uzy->uvy", t[:, w, :], t) % p
            if not np.array_equal(lhs.reshape(dim, dim, dim), rhs):
                raise AlgebraError("structure constants are not associative")

    # -- distinguished modules ------------------------------------------------

    def multiply(self, u: int, v: int) -> np.ndarray:
        return self.mult[u, v]

    def simple(self, i: int) -> FDModule:
        if i not in self._simples:
            dims = [1 if v == i else 0 for v in range(self.num_vertices)]
            act = [
                FFMatrix.zeros(dims[tgt], dims[src], self.p)
                for (src, tgt) in self.arrows
            ]
            self._simples[i] = FDModule(self, dims, act)
        return self._simples[i]

    def projective(self, i: int) -> FDModule:
        """Indecomposable projective at vertex i (paths leaving i)."""
        if i not in self._projectives:
            slots: dict[int, list[int]] = {v: [] for v in range(self.num_vertices)}
            for idx in range(self.dim):
                start, q = self.basis[idx]
                if start != i:
                    continue
                tgt = i if not q else self.arrows[q[-1]][1]
                slots[tgt].append(idx)
            dims = [len(slots[v]) for v in range(self.num_vertices)]
            act = []
            for a, (src, tgt) in enumerate(self.arrows):
                m = np.zeros((dims[tgt], dims[src]), dtype=np.int64)
                for col, idx in enumerate(slots[src]):
                    start, q = self.basis[idx]
                    vec = self.nf(start, q + (a,))
                    for row, idx2 in enumerate(slots[tgt]):
                        m[row, col] = vec[idx2]
                act.append(FFMatrix(m, self.p))
            self._projectives[i] = FDModule(self, dims, act)
        return self._projectives[i]

    def injective(self, i: int) -> FDModule:
        """Indecomposable injective at vertex i (dual of opposite projective)."""
        if i not in self._injectives:
            self._injectives[i] = dual_module(self.opposite.projective(i))
        return self._injectives[i]

    @property
    def opposite(self) -> "FDAlgebra":
        if self._opposite is None:
            rels = [
                [(c, tuple(reversed(a))) for c, a in rel] for rel in self.relations
            ]
            op = FDAlgebra(
                self.p,
                self.num_vertices,
                [(tgt, src) for src, tgt in self.arrows],
                rels,
                arrow_names=self.arrow_names,
                max_path_len=self.max_path_len,
                path_budget=self.path_budget,
            )
            op._opposite = self
            self._opposite = op
        return self._opposite

    # -- serialization ---------------------------------------------------------

    def spec_data(self) -> dict:
        return {
            "field": {"p": self.p},
            "quiver": {
                "vertices": self.num_vertices,
                "arrows": [
                    [self.arrow_names[k], src + 1, tgt + 1]
                    for k, (src, tgt) in enumerate(self.arrows)
                ],
            },
            "relations": [
                [[c, list(a)] for c, a in rel] for rel in self.relations
            ],
        }

    def spec_hash(self) -> str:
        if not hasattr(self, "_spec_hash"):
            blob = json.dumps(self.spec_data(), sort_keys=True, separators=(",", ":"))
            self._spec_hash = hashlib.sha256(blob.encode()).hexdigest()
        return self._spec_hash

    def __repr__(self) -> str:
        return (
            f"FDAlgebra(p={self.p}, vertices={self.num_vertices}, "
            f"arrows={self.arrows}, dim={self.dim})"
        )


def algebra_from_dict(data: dict, **kwargs) -> FDAlgebra:
    """Build an algebra from a parsed spec file (see README for the grammar)."""
    try:
        p = int(data["field"]["p"])
        quiver = data["quiver"]
        nv = int(quiver["vertices"])
        raw_arrows = quiver.get("arrows", [])
    except (KeyError, TypeError) as exc:
        raise AlgebraError(f"malformed algebra spec: missing {exc}") from exc
    arrows, names = [], []
    for k, ent in enumerate(raw_arrows):
        ent = list(ent)
        if len(ent) == 3:
            name, src, tgt = ent
        elif len(ent) == 2:
            name, (src, tgt) = f"a{k}", ent
        else:
            raise AlgebraError(f"arrow entry {ent!r} is not [src,tgt] or [name,src,tgt]")
        src, tgt = int(src), int(tgt)
        if not (1 <= src <= nv and 1 <= tgt <= nv):
            raise AlgebraError(f"arrow {ent!r} uses vertices outside 1..{nv}")
        arrows.append((src - 1, tgt - 1))
        names.append(str(name))
    relations = data.get("relations", [])
    return FDAlgebra(p, nv, arrows, relations, arrow_names=names, **kwargs)


def load_algebra(path, **kwargs) -> FDAlgebra:
    """Load an AlgebraSpec file (.toml or .json).

    The file-level ``bounds`` table, if present, is attached as
    ``algebra.file_bounds`` for the CLI to pick up.
    """
    from pathlib import Path

    path = Path(path)
    try:
        text = path.read_bytes()
    except OSError as exc:
        raise AlgebraError(f"cannot read {path}: {exc}") from exc
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise AlgebraError(f"{path}: invalid JSON: {exc}") from exc
    else:
        try:
            import tomllib  # py311+
        except ModuleNotFoundError:
            import tomli as tomllib
        try:
            data = tomllib.loads(text.decode())
        except tomllib.TOMLDecodeError as exc:
            raise AlgebraError(f"{path}: invalid TOML: {exc}") from exc
    alg = algebra_from_dict(data, **kwargs)
    alg.file_bounds = dict(data.get("bounds", {}))
    return alg
