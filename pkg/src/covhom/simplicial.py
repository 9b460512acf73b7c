"""Ordered simplicial complexes, (co)chains, cup and cap products, cohomology rings.

Conventions (chain always on the left of a cap product)::

    (a u b)(<v0..v_{p+q}>) = a(<v0..vp>) * b(<vp..v_{p+q}>)
    <v0..vk> n a          = a(<v0..vp>) * <vp..vk>

so that ``(w n a) n b = w n (a u b)`` and
``d(w n a) = (-1)^|a| (dw n a) - (-1)^|a| (w n da)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Hashable, Iterable, Sequence

from covhom.algebra import linalg as la
from covhom.algebra.sparse import ExactMatrix
from covhom.homotopy import Retraction

Simplex = tuple[int, ...]


class ComplexError(ValueError):
    """Invalid simplicial complex; ``simplex`` names the offending simplex."""

    def __init__(self, message: str, simplex=None):
        super().__init__(message)
        self.simplex = simplex


class OrderedSimplicialComplex:
    """Finite simplicial complex with a total vertex order.

    Vertices are referred to internally by their position in ``vertices``;
    every simplex is a strictly increasing tuple of positions, and simplices of
    each dimension are kept in lexicographic order.
    """

    def __init__(self, vertices: Sequence[Hashable], simplices: Sequence[Iterable[Simplex]], check: bool = True):
        self.vertices = tuple(vertices)
        self._raw = [list(map(tuple, level)) for level in simplices]
        self.simplices: tuple[tuple[Simplex, ...], ...] = tuple(tuple(sorted(set(level))) for level in self._raw)
        self._index = [{s: i for i, s in enumerate(level)} for level in self.simplices]
        self.position = {v: i for i, v in enumerate(self.vertices)}
        if check:
            validate_complex(self)

    @classmethod
    def from_cells(cls, vertices: Sequence[Hashable], cells: Iterable[Iterable[Hashable]]) -> "OrderedSimplicialComplex":
        """Complex generated by ``cells`` (vertex-label tuples); faces are added."""
        vertices = tuple(vertices)
        pos = {v: i for i, v in enumerate(vertices)}
        if len(pos) != len(vertices):
            raise ComplexError("duplicate vertex label")
        faces: dict[int, set] = {}
        for cell in cells:
            try:
                idx = tuple(sorted(pos[v] for v in cell))
            except KeyError as exc:
                raise ComplexError(f"unknown vertex {exc.args[0]!r} in cell {tuple(cell)!r}", tuple(cell)) from None
            if len(set(idx)) != len(idx):
                raise ComplexError(f"repeated vertex in cell {tuple(cell)!r}", tuple(cell))
            for k in range(1, len(idx) + 1):
                faces.setdefault(k - 1, set()).update(combinations(idx, k))
        for i in range(len(vertices)):
            faces.setdefault(0, set()).add((i,))
        top = max(faces) if faces else -1
        return cls(vertices, [faces.get(k, set()) for k in range(top + 1)])

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def count(self, k: int) -> int:
        return len(self.simplices[k]) if 0 <= k <= self.dim else 0

    def counts(self) -> list[int]:
        return [len(level) for level in self.simplices]

    def index(self, simplex: Simplex) -> int:
        return self._index[len(simplex) - 1][simplex]

    def contains(self, simplex: Simplex) -> bool:
        k = len(simplex) - 1
        return 0 <= k <= self.dim and simplex in self._index[k]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.counts()))

    def labels(self, simplex: Simplex) -> tuple:
        return tuple(self.vertices[i] for i in simplex)

    def top_cells(self) -> list[tuple]:
        """Maximal simplices as label tuples."""
        out = []
        for k, level in enumerate(self.simplices):
            covered = set()
            for t in self.simplices[k + 1] if k < self.dim else ():
                covered.update(t[:i] + t[i + 1:] for i in range(len(t)))
            out.extend(self.labels(s) for s in level if s not in covered)
        return out

    def reordered(self, order: Sequence[Hashable]) -> "OrderedSimplicialComplex":
        """The same complex with a new total vertex order."""
        if sorted(map(repr, order)) != sorted(map(repr, self.vertices)) or len(order) != len(self.vertices):
            raise ValueError("order must be a permutation of the vertices")
        return OrderedSimplicialComplex.from_cells(order, self.top_cells())

    def __repr__(self):
        return f"OrderedSimplicialComplex(f-vector={self.counts()})"


def validate_complex(X: OrderedSimplicialComplex) -> None:
    """Raise :class:`ComplexError` unless X is a well-formed ordered complex."""
    raw = X._raw
    n = len(X.vertices)
    if len(set(X.vertices)) != n:
        raise ComplexError("duplicate vertex label")
    for k, level in enumerate(raw):
        seen = set()
        for s in level:
            if len(s) != k + 1:
                raise ComplexError(f"simplex {s} listed in dimension {k}", s)
            if any(not (0 <= v < n) for v in s):
                raise ComplexError(f"simplex {s} uses an unknown vertex", s)
            if any(s[i] >= s[i + 1] for i in range(k)):
                raise ComplexError(f"simplex {s} is not a strictly increasing tuple", s)
            if s in seen:
                raise ComplexError(f"duplicate simplex {s}", s)
            seen.add(s)
        if not level and k < len(raw) - 1:
            raise ComplexError(f"no simplices in dimension {k} below the top dimension")
    if raw and set(raw[0]) != {(i,) for i in range(n)}:
        missing = sorted({(i,) for i in range(n)} - set(raw[0]))
        raise ComplexError(f"vertex simplex {missing[0] if missing else '?'} missing or extra", missing[0] if missing else None)
    for k in range(1, len(raw)):
        lower = X._index[k - 1]
        for s in raw[k]:
            for face in combinations(s, k):
                if face not in lower:
                    raise ComplexError(f"face {face} of simplex {s} is missing", face)


@dataclass
class Cochain:
    """Cochain of a given degree: sparse table simplex -> scalar."""

    complex: OrderedSimplicialComplex
    field: object
    degree: int
    values: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        vals = {}
        for s, x in self.values.items():
            s = tuple(s)
            if len(s) != self.degree + 1:
                raise ValueError(f"simplex {s} does not have degree {self.degree}")
            x = self.field(x)
            if x != 0:
                vals[s] = x
        self.values = vals

    def __call__(self, simplex: Simplex):
        return self.values.get(tuple(simplex), self.field.zero)

    def __add__(self, other: "Cochain") -> "Cochain":
        _same(self, other)
        out = dict(self.values)
        for s, x in other.values.items():
            out[s] = out[s] + x if s in out else x
        return type(self)(self.complex, self.field, self.degree, out)

    def __neg__(self):
        return type(self)(self.complex, self.field, self.degree, {s: -x for s, x in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.field(c)
        return type(self)(self.complex, self.field, self.degree, {s: c * x for s, x in self.values.items()})

    def is_zero(self) -> bool:
        return not self.values

    def to_vector(self) -> list:
        z = self.field.zero
        return [self.values.get(s, z) for s in self.complex.simplices[self.degree]] if self.degree <= self.complex.dim else []

    @classmethod
    def from_vector(cls, X, field, degree: int, vec: Sequence):
        level = X.simplices[degree] if 0 <= degree <= X.dim else ()
        return cls(X, field, degree, {s: x for s, x in zip(level, vec) if x != 0})

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self.degree == other.degree
            and self.complex is other.complex
            and self.values == other.values
        )


class Chain(Cochain):
    """Chain of a given degree: sparse table simplex -> scalar."""


def _same(a, b):
    if a.complex is not b.complex:
        raise ValueError("chains live on different complexes")
    if a.field != b.field:
        raise TypeError("chains over different fields")
    if a.degree != b.degree:
        raise ValueError("degree mismatch")


def constant_cochain(X, field, value=1) -> Cochain:
    return Cochain(X, field, 0, {s: value for s in X.simplices[0]})


def coboundary(a: Cochain) -> Cochain:
    X, k = a.complex, a.degree
    out: dict = {}
    if k + 1 > X.dim:
        return Cochain(X, a.field, k + 1, {})
    for s in X.simplices[k + 1]:
        total = a.field.zero
        for i in range(k + 2):
            x = a.values.get(s[:i] + s[i + 1:])
            if x is not None:
                total = total + x if i % 2 == 0 else total - x
        if total != 0:
            out[s] = total
    return Cochain(X, a.field, k + 1, out)


def boundary(w: Chain) -> Chain:
    k = w.degree
    out: dict = {}
    if k == 0:
        return Chain(w.complex, w.field, -1, {})
    for s, x in w.values.items():
        for i in range(k + 1):
            f = s[:i] + s[i + 1:]
            y = x if i % 2 == 0 else -x
            out[f] = out[f] + y if f in out else y
    return Chain(w.complex, w.field, k - 1, out)


def cup(a: Cochain, b: Cochain) -> Cochain:
    """Front-face/back-face cup product."""
    if a.complex is not b.complex:
        raise ValueError("cochains live on different complexes")
    if a.field != b.field:
        raise TypeError("cochains over different fields")
    X, p, q = a.complex, a.degree, b.degree
    n = p + q
    out: dict = {}
    if n <= X.dim and a.values and b.values:
        for s in X.simplices[n]:
            x = a.values.get(s[: p + 1])
            if x is None:
                continue
            y = b.values.get(s[p:])
            if y is not None:
                out[s] = x * y
    return Cochain(X, a.field, n, out)


def cap(w: Chain, a: Cochain) -> Chain:
    """``<v0..vk> n a = a(<v0..vp>) <vp..vk>``; the chain is on the left."""
    if w.complex is not a.complex:
        raise ValueError("chain and cochain live on different complexes")
    if w.field != a.field:
        raise TypeError("chain and cochain over different fields")
    k, p = w.degree, a.degree
    if p > k:
        raise ValueError(f"cannot cap a degree-{k} chain with a degree-{p} cochain")
    out: dict = {}
    for s, x in w.values.items():
        y = a.values.get(s[: p + 1])
        if y is not None:
            f = s[p:]
            out[f] = out[f] + x * y if f in out else x * y
    return Chain(w.complex, w.field, k - p, out)


def evaluate(a: Cochain, w: Chain):
    """Kronecker pairing <a, w>."""
    if a.degree != w.degree:
        raise ValueError("degree mismatch")
    total = a.field.zero
    for s, x in w.values.items():
        y = a.values.get(s)
        if y is not None:
            total = total + x * y
    return total


def boundary_matrices(X: OrderedSimplicialComplex, field) -> list[ExactMatrix]:
    """``[d_0, ..., d_{dim+1}]`` with ``d_k: C_k -> C_{k-1}``."""
    mats = [ExactMatrix(field, 0, X.count(0))]
    for k in range(1, X.dim + 1):
        lower = X._index[k - 1]
        entries = {}
        for j, s in enumerate(X.simplices[k]):
            for i in range(k + 1):
                entries[(lower[s[:i] + s[i + 1:]], j)] = 1 if i % 2 == 0 else -1
        mats.append(ExactMatrix(field, X.count(k - 1), X.count(k), entries))
    mats.append(ExactMatrix(field, X.count(X.dim), 0))
    return mats


def coboundary_matrices(X: OrderedSimplicialComplex, field) -> list[ExactMatrix]:
    """``[delta_0, ..., delta_dim]`` with ``delta_k: C^k -> C^{k+1}``."""
    bd = boundary_matrices(X, field)
    return [bd[k + 1].transpose() for k in range(X.dim + 1)]


def left_cup_matrix(a: Cochain, k: int) -> ExactMatrix:
    """Matrix of ``b -> a u b`` from C^k to C^{k+|a|}."""
    X, p = a.complex, a.degree
    n = k + p
    entries = {}
    if n <= X.dim:
        idx = X._index[k]
        for i, s in enumerate(X.simplices[n]):
            x = a.values.get(s[: p + 1])
            if x is not None:
                entries[(i, idx[s[p:]])] = x
    return ExactMatrix(a.field, X.count(n), X.count(k), entries)


def cap_matrix(a: Cochain, k: int) -> ExactMatrix:
    """Matrix of ``w -> w n a`` from C_k to C_{k-|a|}."""
    X, p = a.complex, a.degree
    entries = {}
    if k - p >= 0:
        idx = X._index[k - p]
        for j, s in enumerate(X.simplices[k]):
            x = a.values.get(s[: p + 1])
            if x is not None:
                entries[(idx[s[p:]], j)] = x
    return ExactMatrix(a.field, X.count(k - p) if k >= p else 0, X.count(k), entries)


def betti_numbers(X: OrderedSimplicialComplex, field) -> list[int]:
    bd = boundary_matrices(X, field)
    ranks = [la.rank(b.dense()) if b.nnz() else 0 for b in bd]
    return [X.count(k) - ranks[k] - ranks[k + 1] for k in range(X.dim + 1)]


@dataclass
class CohomologyRing:
    """Cohomology with chosen cocycle representatives and cup structure constants.

    ``products[(p, q)][a][b]`` is the coordinate vector in H^{p+q} of the
    product of basis classes ``a`` of H^p and ``b`` of H^q.
    """

    complex: OrderedSimplicialComplex
    field: object
    retraction: Retraction
    basis: list  # per degree, list of Cochain representatives
    products: dict

    @property
    def betti(self) -> list[int]:
        return [len(b) for b in self.basis]

    @property
    def top_degree(self) -> int:
        return len(self.basis) - 1

    def class_of(self, a: Cochain) -> list:
        if not coboundary(a).is_zero():
            raise ValueError("not a cocycle")
        if a.degree > self.top_degree:
            return []
        return self.retraction.project(a.degree, a.to_vector())

    def representative(self, degree: int, coords: Sequence) -> Cochain:
        vec = self.retraction.representative(degree, [self.field(c) for c in coords])
        return Cochain.from_vector(self.complex, self.field, degree, vec)

    def multiply(self, p: int, x: Sequence, q: int, y: Sequence) -> list:
        n = p + q
        if n > self.top_degree:
            return []
        table = self.products[(p, q)]
        out = [self.field.zero] * self.betti[n]
        for a, xa in enumerate(x):
            if xa == 0:
                continue
            for b, yb in enumerate(y):
                if yb == 0:
                    continue
                for c, z in enumerate(table[a][b]):
                    if z != 0:
                        out[c] = out[c] + xa * yb * z
        return out

    def left_multiplication_matrix(self, p: int, x: Sequence, q: int):
        """Backend matrix of ``y -> x * y`` from H^q to H^{p+q}."""
        n = p + q
        rows = self.betti[n] if n <= self.top_degree else 0
        cols = []
        for b in range(self.betti[q]):
            e = [self.field.zero] * self.betti[q]
            e[b] = self.field.one
            cols.append(self.multiply(p, x, q, e) if rows else [])
        return la.from_columns(self.field, cols, rows)


def retraction_of(X: OrderedSimplicialComplex, field) -> Retraction:
    deltas = coboundary_matrices(X, field)
    return Retraction(field, X.counts(), [d.dense() for d in deltas])


def cohomology_ring(X: OrderedSimplicialComplex, field) -> CohomologyRing:
    ret = retraction_of(X, field)
    basis = []
    for k, g in enumerate(ret.degrees):
        cols = la.columns(g.iota)
        basis.append([Cochain.from_vector(X, field, k, c) for c in cols])
    products = {}
    top = X.dim
    for p in range(top + 1):
        for q in range(top + 1 - p):
            products[(p, q)] = [
                [ret.project(p + q, cup(a, b).to_vector()) for b in basis[q]] for a in basis[p]
            ]
    return CohomologyRing(X, field, ret, basis, products)
