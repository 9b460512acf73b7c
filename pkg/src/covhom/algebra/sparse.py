"""Sparse exact matrices over a field or a truncated power-series ring."""

from __future__ import annotations

from typing import Iterable


class ExactMatrix:
    """Immutable sparse matrix; only nonzero entries are stored.

    ``ring`` is a :class:`~covhom.algebra.fields.Field` or a
    :class:`~covhom.algebra.series.TruncatedRing`. Entries are coerced with
    ``ring(x)``, which raises ``TypeError`` for elements of another ring.
    """

    __slots__ = ("ring", "nrows", "ncols", "_entries")

    def __init__(self, ring, nrows: int, ncols: int, entries=None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative matrix dimension")
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        table = {}
        for (i, j), x in (entries or {}).items():
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i}, {j}) outside {nrows}x{ncols}")
            x = ring(x)
            if x != 0:
                table[(i, j)] = x
        self._entries = table

    @classmethod
    def from_rows(cls, ring, rows: Iterable[Iterable], ncols: int | None = None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        entries = {(i, j): x for i, r in enumerate(rows) for j, x in enumerate(r) if x != 0}
        return cls(ring, len(rows), ncols, entries)

    @classmethod
    def from_backend(cls, field, M):
        return cls.from_rows(field, M.tolist(), M.ncols())

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def items(self):
        return self._entries.items()

    def __getitem__(self, ij):
        return self._entries.get(ij, self.ring.zero)

    def nnz(self) -> int:
        return len(self._entries)

    def is_zero(self) -> bool:
        return not self._entries

    def to_rows(self) -> list[list]:
        z = self.ring.zero
        rows = [[z] * self.ncols for _ in range(self.nrows)]
        for (i, j), x in self._entries.items():
            rows[i][j] = x
        return rows

    def dense(self):
        """Backend dense matrix (fields only)."""
        M = self.ring.matrix(self.nrows, self.ncols)
        for (i, j), x in self._entries.items():
            M[i, j] = x
        return M

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.ring, self.ncols, self.nrows, {(j, i): x for (i, j), x in self._entries.items()})

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        out = dict(self._entries)
        for k, x in other._entries.items():
            out[k] = out[k] + x if k in out else x
        return ExactMatrix(self.ring, self.nrows, self.ncols, out)

    def __neg__(self):
        return ExactMatrix(self.ring, self.nrows, self.ncols, {k: -x for k, x in self._entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ExactMatrix":
        c = self.ring(c)
        return ExactMatrix(self.ring, self.nrows, self.ncols, {k: c * x for k, x in self._entries.items()})

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ring != other.ring:
            raise TypeError("matrices over different rings")
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        by_row: dict[int, list] = {}
        for (k, j), y in other._entries.items():
            by_row.setdefault(k, []).append((j, y))
        out: dict = {}
        for (i, k), x in self._entries.items():
            for j, y in by_row.get(k, ()):
                key = (i, j)
                out[key] = out[key] + x * y if key in out else x * y
        return ExactMatrix(self.ring, self.nrows, other.ncols, out)

    def apply(self, vec: list) -> list:
        z = self.ring.zero
        out = [z] * self.nrows
        for (i, j), x in self._entries.items():
            if vec[j] != 0:
                out[i] = out[i] + x * vec[j]
        return out

    def _check_same(self, other):
        if self.ring != other.ring:
            raise TypeError("matrices over different rings")
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.ring == other.ring
            and self.shape == other.shape
            and self._entries == other._entries
        )

    def __repr__(self):
        return f"ExactMatrix({self.ring!r}, {self.nrows}x{self.ncols}, nnz={len(self._entries)})"
