"""Dense exact linear algebra over the fields of :mod:`covhom.algebra.fields`.

All helpers take "backend" matrices: ``nmod_mat``/``fmpq_mat`` for prime fields
and rationals, :class:`GenericMatrix` otherwise. Vectors are columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


class GenericMatrix:
    """Row-major dense matrix over any :class:`Field` (used for cyclotomic fields)."""

    def __init__(self, field, nrows: int, ncols: int, entries=None):
        self.field = field
        self._r = nrows
        self._c = ncols
        if entries is None:
            z = field.zero
            self.data = [[z] * ncols for _ in range(nrows)]
        else:
            entries = list(entries)
            self.data = [entries[i * ncols:(i + 1) * ncols] for i in range(nrows)]

    def nrows(self):
        return self._r

    def ncols(self):
        return self._c

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __setitem__(self, ij, value):
        i, j = ij
        self.data[i][j] = self.field(value)

    def tolist(self):
        return [list(row) for row in self.data]

    def entries(self):
        return [x for row in self.data for x in row]

    def transpose(self):
        out = GenericMatrix(self.field, self._c, self._r)
        out.data = [[self.data[i][j] for i in range(self._r)] for j in range(self._c)]
        return out

    def __add__(self, other):
        out = GenericMatrix(self.field, self._r, self._c)
        out.data = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)]
        return out

    def __sub__(self, other):
        out = GenericMatrix(self.field, self._r, self._c)
        out.data = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)]
        return out

    def __neg__(self):
        out = GenericMatrix(self.field, self._r, self._c)
        out.data = [[-a for a in row] for row in self.data]
        return out

    def __mul__(self, other):
        if not isinstance(other, GenericMatrix):
            out = GenericMatrix(self.field, self._r, self._c)
            s = self.field(other)
            out.data = [[a * s for a in row] for row in self.data]
            return out
        if self._c != other._r:
            raise ValueError("dimension mismatch")
        z = self.field.zero
        out = GenericMatrix(self.field, self._r, other._c)
        cols = other.transpose().data
        out.data = [
            [sum((a * b for a, b in zip(row, col) if a and b), z) for col in cols] for row in self.data
        ]
        return out

    def rref(self):
        R = [list(row) for row in self.data]
        rank = 0
        for col in range(self._c):
            pivot = next((i for i in range(rank, self._r) if R[i][col]), None)
            if pivot is None:
                continue
            R[rank], R[pivot] = R[pivot], R[rank]
            inv = self.field.one / R[rank][col]
            R[rank] = [x * inv for x in R[rank]]
            for i in range(self._r):
                if i != rank and R[i][col]:
                    f = R[i][col]
                    R[i] = [a - f * b for a, b in zip(R[i], R[rank])]
            rank += 1
        out = GenericMatrix(self.field, self._r, self._c)
        out.data = R
        return out, rank

    def rank(self):
        return self.rref()[1]

    def inv(self):
        n = self._r
        if n != self._c:
            raise ValueError("matrix is not square")
        one, zero = self.field.one, self.field.zero
        aug = GenericMatrix(self.field, n, 2 * n)
        aug.data = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(self.data)]
        R, rank = aug.rref()
        if n and (rank < n or any(R.data[i][i] != one for i in range(n))):
            raise ZeroDivisionError("matrix is singular")
        out = GenericMatrix(self.field, n, n)
        out.data = [row[n:] for row in R.data]
        return out

    def __eq__(self, other):
        return isinstance(other, GenericMatrix) and self.data == other.data

    def __repr__(self):
        return f"GenericMatrix({self.field.name}, {self.tolist()})"


def shape(M) -> tuple[int, int]:
    return M.nrows(), M.ncols()


def zeros(field, nrows: int, ncols: int):
    return field.matrix(nrows, ncols)


def identity(field, n: int):
    M = field.matrix(n, n)
    for i in range(n):
        M[i, i] = 1
    return M


def from_rows(field, rows: Sequence[Sequence], ncols: int | None = None):
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return field.matrix(len(rows), ncols, [x for r in rows for x in r])


def from_columns(field, cols: Sequence[Sequence], nrows: int):
    cols = [list(c) for c in cols]
    return field.matrix(nrows, len(cols), [cols[j][i] for i in range(nrows) for j in range(len(cols))])


def column(M, j: int) -> list:
    return [M[i, j] for i in range(M.nrows())]


def columns(M) -> list[list]:
    rows = M.tolist()
    return [[rows[i][j] for i in range(M.nrows())] for j in range(M.ncols())]


def submatrix(field, M, rows: Sequence[int], cols: Sequence[int]):
    data = M.tolist()
    return field.matrix(len(rows), len(cols), [data[i][j] for i in rows for j in cols])


def hstack(field, *mats):
    mats = [m for m in mats if m is not None]
    nrows = mats[0].nrows()
    data = [[] for _ in range(nrows)]
    for m in mats:
        if m.nrows() != nrows:
            raise ValueError("hstack row mismatch")
        for i, row in enumerate(m.tolist()):
            data[i].extend(row)
    ncols = sum(m.ncols() for m in mats)
    return field.matrix(nrows, ncols, [x for r in data for x in r])


def vstack(field, *mats):
    ncols = mats[0].ncols()
    data = []
    for m in mats:
        if m.ncols() != ncols:
            raise ValueError("vstack column mismatch")
        data.extend(m.tolist())
    return field.matrix(len(data), ncols, [x for r in data for x in r])


def is_zero(M) -> bool:
    return all(x == 0 for row in M.tolist() for x in row)


def rref(M):
    """Reduced row echelon form and the list of pivot columns."""
    R, rank = M.rref()
    rows = R.tolist()
    pivots = []
    for i in range(rank):
        row = rows[i]
        pivots.append(next(j for j, x in enumerate(row) if x != 0))
    return R, pivots


def rank(M) -> int:
    if M.nrows() == 0 or M.ncols() == 0:
        return 0
    return M.rank()


def nullspace(field, M):
    """Matrix whose columns are a basis of ker M (one basis vector per free column)."""
    n = M.ncols()
    if M.nrows() == 0:
        return identity(field, n)
    R, pivots = rref(M)
    rows = R.tolist()
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    out = field.matrix(n, len(free))
    for k, f in enumerate(free):
        out[f, k] = 1
        for i, pc in enumerate(pivots):
            x = rows[i][f]
            if x != 0:
                out[pc, k] = -x
    return out


def column_space(field, M):
    """The pivot columns of M: a basis of its image chosen deterministically."""
    if M.nrows() == 0 or M.ncols() == 0:
        return field.matrix(M.nrows(), 0)
    _, pivots = rref(M)
    return submatrix(field, M, range(M.nrows()), pivots)


def extending_columns(field, A, B) -> list[int]:
    """Indices of columns of B that extend a basis of span(A) to span(A, B)."""
    if B.ncols() == 0:
        return []
    if A is None or A.ncols() == 0:
        _, pivots = rref(B)
        return pivots
    _, pivots = rref(hstack(field, A, B))
    k = A.ncols()
    return [j - k for j in pivots if j >= k]


def solve(field, A, B):
    """A particular solution X of A X = B (free variables set to zero), or None."""
    n = A.ncols()
    if B.ncols() == 0:
        return field.matrix(n, 0)
    if A.ncols() == 0:
        return field.matrix(0, B.ncols()) if is_zero(B) else None
    R, pivots = rref(hstack(field, A, B))
    if pivots and pivots[-1] >= n:
        return None
    rows = R.tolist()
    X = field.matrix(n, B.ncols())
    for i, pc in enumerate(pivots):
        for j in range(B.ncols()):
            x = rows[i][n + j]
            if x != 0:
                X[pc, j] = x
    return X


def in_span(field, A, v) -> bool:
    return rank(hstack(field, A, v)) == rank(A) if A.ncols() else is_zero(v)


@dataclass(frozen=True)
class RankKernelImage:
    rank: int
    kernel: object
    image: object


def rank_kernel_image(field, M) -> RankKernelImage:
    """Rank with exact kernel and image bases (as columns)."""
    K = nullspace(field, M)
    I = column_space(field, M)
    return RankKernelImage(I.ncols(), K, I)


def dense_rank_oracle(field, rows) -> int:
    """Plain Gaussian elimination on python lists; independent of any backend."""
    R = [[field(x) for x in row] for row in rows]
    r = 0
    ncols = len(R[0]) if R else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        for i in range(r + 1, len(R)):
            if R[i][c] != 0:
                f = R[i][c] / R[r][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        r += 1
    return r
