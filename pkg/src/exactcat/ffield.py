"""Exact dense linear algebra over a prime field F_p.

Everything downstream (hom spaces, Ext groups, subfunctor tables) reduces to
row reduction of small dense matrices with entries in [0, p).  Matrices are
immutable numpy int64 arrays wrapped with their modulus; subspaces are stored
through their unique reduced row-echelon basis so that set equality is
structural equality.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

MAX_PRIME = 251


class FieldError(ValueError):
    pass


class BudgetError(RuntimeError):
    """A configured enumeration budget would be exceeded."""


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    if not isinstance(p, int) or p < 2 or p > MAX_PRIME:
        raise FieldError(f"modulus must be a prime in [2, {MAX_PRIME}], got {p!r}")
    if any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise FieldError(f"modulus {p} is not prime")
    return p


@lru_cache(maxsize=None)
def inverse_table(p: int) -> tuple[int, ...]:
    """Multiplicative inverses mod p; index 0 unused."""
    check_prime(p)
    return tuple(pow(a, p - 2, p) if a else 0 for a in range(p))


class FFMatrix:
    """Dense matrix over F_p, immutable after construction."""

    __slots__ = ("a", "p")

    def __init__(self, entries, p: int):
        check_prime(p)
        a = np.asarray(entries, dtype=np.int64)
        if a.ndim != 2:
            raise FieldError(f"expected 2-d entries, got shape {a.shape}")
        a = np.mod(a, p)
        a.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "p", p)

    def __setattr__(self, *args):
        raise AttributeError("FFMatrix is immutable")

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    @staticmethod
    def zeros(rows: int, cols: int, p: int) -> "FFMatrix":
        return FFMatrix(np.zeros((rows, cols), dtype=np.int64), p)

    @staticmethod
    def identity(n: int, p: int) -> "FFMatrix":
        return FFMatrix(np.eye(n, dtype=np.int64), p)

    def __matmul__(self, other: "FFMatrix") -> "FFMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise FieldError(f"matmul shape mismatch {self.shape} @ {other.shape}")
        return FFMatrix(self.a @ other.a, self.p)

    def __add__(self, other: "FFMatrix") -> "FFMatrix":
        self._check(other)
        return FFMatrix(self.a + other.a, self.p)

    def __sub__(self, other: "FFMatrix") -> "FFMatrix":
        self._check(other)
        return FFMatrix(self.a - other.a, self.p)

    def __neg__(self) -> "FFMatrix":
        return FFMatrix(-self.a, self.p)

    def scale(self, c: int) -> "FFMatrix":
        return FFMatrix(self.a * (c % self.p), self.p)

    def transpose(self) -> "FFMatrix":
        return FFMatrix(self.a.T, self.p)

    def is_zero(self) -> bool:
        return not self.a.any()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FFMatrix)
            and self.p == other.p
            and self.shape == other.shape
            and np.array_equal(self.a, other.a)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self.a.tobytes()))

    def tobytes(self) -> bytes:
        return self.a.tobytes()

    def tolist(self):
        return self.a.tolist()

    def __repr__(self) -> str:
        return f"FFMatrix({self.a.tolist()}, p={self.p})"

    def _check(self, other: "FFMatrix"):
        if not isinstance(other, FFMatrix) or other.p != self.p:
            raise FieldError("mixed moduli in matrix arithmetic")

    def rank(self) -> int:
        return rref(self)[1]

    def inverse(self) -> "FFMatrix":
        if self.rows != self.cols:
            raise FieldError("inverse of a non-square matrix")
        x = solve(self, FFMatrix.identity(self.rows, self.p))
        if x is None or (self @ x).a.trace() != self.rows:
            raise FieldError("matrix is singular")
        return x

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows


def hstack(mats: list[FFMatrix]) -> FFMatrix:
    p = mats[0].p
    return FFMatrix(np.hstack([m.a for m in mats]), p)


def vstack(mats: list[FFMatrix]) -> FFMatrix:
    p = mats[0].p
    return FFMatrix(np.vstack([m.a for m in mats]), p)


def block_diag(mats: list[FFMatrix], p: int) -> FFMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        out[r : r + m.rows, c : c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return FFMatrix(out, p)


def _rref_array(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """In-place-style Gauss-Jordan on a copy; returns (R, pivot_cols)."""
    r = a.astype(np.int64, copy=True) % p
    nrows, ncols = r.shape
    inv = inverse_table(p)
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        pr = row + int(nz[0])
        if pr != row:
            r[[row, pr]] = r[[pr, row]]
        r[row] = (r[row] * inv[int(r[row, col])]) % p
        column = r[:, col].copy()
        column[row] = 0
        mask = column != 0
        if mask.any():
            r[mask] = (r[mask] - np.outer(column[mask], r[row])) % p
        pivots.append(col)
        row += 1
    return r, pivots


def rref(m: FFMatrix) -> tuple[FFMatrix, int, list[int]]:
    """Unique reduced row-echelon form, rank and pivot columns."""
    r, pivots = _rref_array(m.a, m.p)
    return FFMatrix(r, m.p), len(pivots), pivots


def solve(a: FFMatrix, b: FFMatrix) -> FFMatrix | None:
    """Solve a @ x = b; None when inconsistent.

    With multiple solutions the canonical one (zero free coordinates) is
    returned.  b may carry several right-hand sides as columns.
    """
    a._check(b)
    if a.rows != b.rows:
        raise FieldError(f"solve needs matching row counts, {a.rows} vs {b.rows}")
    p = a.p
    aug, pivots = _rref_array(np.hstack([a.a, b.a]), p)
    if any(c >= a.cols for c in pivots):
        return None
    x = np.zeros((a.cols, b.cols), dtype=np.int64)
    for row, col in enumerate(pivots):
        x[col] = aug[row, a.cols :]
    return FFMatrix(x, p)


def kernel(m: FFMatrix) -> "Subspace":
    """Right null space {x : m @ x = 0} as a subspace of F_p^cols."""
    red, pivots = _rref_array(m.a, m.p)
    p = m.p
    free = [c for c in range(m.cols) if c not in pivots]
    if not free:
        return Subspace.zero(m.cols, p)
    rows = np.zeros((len(free), m.cols), dtype=np.int64)
    for i, f in enumerate(free):
        rows[i, f] = 1
        for row, col in enumerate(pivots):
            rows[i, col] = (-red[row, f]) % p
    return Subspace(FFMatrix(rows, p))


class Subspace:
    """Subspace of F_p^n held by its canonical RREF basis (rows)."""

    __slots__ = ("basis", "pivots", "ambient_dim", "p")

    def __init__(self, generators: FFMatrix):
        red, rank, pivots = rref(generators)
        basis = FFMatrix(red.a[:rank], red.p)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "pivots", tuple(pivots))
        object.__setattr__(self, "ambient_dim", generators.cols)
        object.__setattr__(self, "p", generators.p)

    def __setattr__(self, *args):
        raise AttributeError("Subspace is immutable")

    @staticmethod
    def zero(ambient_dim: int, p: int) -> "Subspace":
        return Subspace(FFMatrix.zeros(0, ambient_dim, p))

    @staticmethod
    def full(ambient_dim: int, p: int) -> "Subspace":
        return Subspace(FFMatrix.identity(ambient_dim, p))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        """Normal form of vec modulo this subspace (zero iff contained)."""
        v = np.mod(np.asarray(vec, dtype=np.int64).ravel(), self.p)
        if v.shape[0] != self.ambient_dim:
            raise FieldError("vector/ambient mismatch")
        if self.dim:
            coeffs = v[list(self.pivots)]
            v = (v - coeffs @ self.basis.a) % self.p
        return v

    def contains(self, vec) -> bool:
        return not self.reduce(vec).any()

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains(row) for row in other.basis.a)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, p={self.p})"

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim or self.p != other.p:
            raise FieldError("ambient mismatch in subspace operation")

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(vstack([self.basis, other.basis]))

    def intersect(self, other: "Subspace") -> "Subspace":
        """Row-space intersection via x = u A = v B."""
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.ambient_dim, self.p)
        stacked = vstack([self.basis, other.basis]).transpose()
        null = kernel(stacked)
        if null.is_zero():
            return Subspace.zero(self.ambient_dim, self.p)
        u_part = FFMatrix(null.basis.a[:, : self.dim], self.p)
        return Subspace(u_part @ self.basis)

    def quotient_map(self) -> FFMatrix:
        """Matrix Q with kernel exactly this subspace; Q has full row rank.

        Coordinates are the non-pivot positions of the normal form, so
        Q @ section() = identity (see section()).
        """
        n, p = self.ambient_dim, self.p
        nonpivots = [c for c in range(n) if c not in self.pivots]
        nf = np.eye(n, dtype=np.int64)
        if self.dim:
            sel = np.zeros((self.dim, n), dtype=np.int64)
            for r, c in enumerate(self.pivots):
                sel[r, c] = 1
            nf = (nf - self.basis.a.T @ sel) % p
        return FFMatrix(nf[nonpivots, :], p)

    def section(self) -> FFMatrix:
        """Right inverse of quotient_map(), embedding quotient coordinates."""
        n, p = self.ambient_dim, self.p
        nonpivots = [c for c in range(n) if c not in self.pivots]
        sec = np.zeros((n, len(nonpivots)), dtype=np.int64)
        for j, c in enumerate(nonpivots):
            sec[c, j] = 1
        return FFMatrix(sec, p)

    def elements(self, budget: int | None = None):
        """Iterate all p^dim member vectors (deterministic order)."""
        count = self.p**self.dim
        if budget is not None and count > budget:
            raise BudgetError(f"subspace has {count} elements, budget {budget}")
        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            if self.dim:
                yield (np.array(coeffs, dtype=np.int64) @ self.basis.a) % self.p
            else:
                yield np.zeros(self.ambient_dim, dtype=np.int64)


def subspaces_of(ambient_dim: int, p: int) -> list[Subspace]:
    """All subspaces of F_p^n, via unique RREF bases, deterministic order."""
    check_prime(p)
    out = [Subspace.zero(ambient_dim, p)]
    for k in range(1, ambient_dim + 1):
        for pivots in itertools.combinations(range(ambient_dim), k):
            free_pos = [
                (r, c)
                for r in range(k)
                for c in range(ambient_dim)
                if c > pivots[r] and c not in pivots
            ]
            for values in itertools.product(range(p), repeat=len(free_pos)):
                mat = np.zeros((k, ambient_dim), dtype=np.int64)
                for r, c in enumerate(pivots):
                    mat[r, c] = 1
                for (r, c), v in zip(free_pos, values):
                    mat[r, c] = v
                out.append(Subspace(FFMatrix(mat, p)))
    return out


def num_subspaces(ambient_dim: int, p: int) -> int:
    """Total count of subspaces (sum of Gaussian binomials)."""
    total = 0
    for k in range(ambient_dim + 1):
        num = den = 1
        for i in range(k):
            num *= p ** (ambient_dim - i) - 1
            den *= p ** (k - i) - 1
        total += num // den
    return total
