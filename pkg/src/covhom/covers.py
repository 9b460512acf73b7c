"""Finite cyclic covers X_n of a complex with a circle map, built explicitly."""

from __future__ import annotations

from dataclasses import dataclass

from covhom.algebra import PrimeField
from covhom.algebra import linalg as la
from covhom.circle import CircleMap, class_of_eta, validate_circle_map
from covhom.homotopy import Retraction
from covhom.simplicial import (
    OrderedSimplicialComplex,
    betti_numbers,
    boundary_matrices,
    cohomology_ring,
)


class DegenerateInputError(ValueError):
    """The input is outside the range where the requested statement applies."""


class CoverError(ArithmeticError):
    pass


@dataclass
class CoverComplex:
    base: OrderedSimplicialComplex
    cm: CircleMap
    n: int
    complex: OrderedSimplicialComplex  # vertices are (base label, level)
    projection: dict  # cover simplex (positions) -> base simplex (positions)
    sigma: dict  # cover vertex label -> cover vertex label

    def deck(self, label):
        return self.sigma[label]


def _lift_levels(X, cm: CircleMap, s) -> list[int]:
    """Level offsets (0 or 1) of the lift of simplex ``s`` starting at level 0."""
    hs = [cm.heights[X.vertices[v]] for v in s]
    crossing = (cm.N - 1) in hs and 0 in hs
    return [1 if crossing and h == 0 else 0 for h in hs]


def build_finite_cover(X: OrderedSimplicialComplex, cm: CircleMap, n: int, check: bool = True) -> CoverComplex:
    """The n-fold cyclic cover induced by the reduction of nu mod n.

    The lift of a simplex at level c keeps level c on every vertex, except
    that in a simplex with heights {N-1, 0} the height-0 vertices move to
    level c + 1. Cover vertices are ordered by (level, base position).
    """
    if n < 1:
        raise ValueError("fold count must be positive")
    validate_circle_map(X, cm)
    vertices = [(v, c) for c in range(n) for v in X.vertices]
    cells = []
    for k in range(X.dim + 1):
        for s in X.simplices[k]:
            offsets = _lift_levels(X, cm, s)
            for c in range(n):
                cells.append(tuple((X.vertices[v], (c + o) % n) for v, o in zip(s, offsets)))
    Y = OrderedSimplicialComplex.from_cells(vertices, cells)
    projection = {}
    for k in range(Y.dim + 1):
        for t in Y.simplices[k]:
            projection[t] = tuple(sorted(X.position[Y.vertices[v][0]] for v in t))
    sigma = {(v, c): (v, (c + 1) % n) for v, c in vertices}
    C = CoverComplex(X, cm, n, Y, projection, sigma)
    if check:
        verify_cover(C)
    return C


def verify_cover(C: CoverComplex) -> None:
    X, Y, n = C.base, C.complex, C.n
    if Y.counts() != [n * c for c in X.counts()]:
        raise CoverError(f"cover f-vector {Y.counts()} is not {n} times {X.counts()}")
    fibres: dict = {}
    for t, s in C.projection.items():
        if not X.contains(s) or len(s) != len(t):
            raise CoverError(f"projection of {Y.labels(t)} is not a simplex of the base")
        fibres[s] = fibres.get(s, 0) + 1
    if any(c != n for c in fibres.values()):
        raise CoverError("projection is not n-to-1 on simplices")
    for k in range(Y.dim + 1):
        for t in Y.simplices[k]:
            image = tuple(sorted(Y.position[C.sigma[Y.vertices[v]]] for v in t))
            if not Y.contains(image):
                raise CoverError(f"deck transformation does not preserve {Y.labels(t)}")
            if n > 1 and image == t:
                raise CoverError(f"deck transformation fixes {Y.labels(t)}")
    if Y.euler_characteristic() != n * X.euler_characteristic():
        raise CoverError("Euler characteristic is not multiplicative")


@dataclass
class CoverHomology:
    betti: list[int]
    generators: list  # per degree, list of chains as {label tuple: coefficient}


def homology_generators(X: OrderedSimplicialComplex, field) -> list[list[dict]]:
    """Cycle representatives of a homology basis in each degree."""
    top = X.dim
    bd = boundary_matrices(X, field)
    # reindex the chain complex as a cochain complex V_j = C_{top - j}
    dims = [X.count(top - j) for j in range(top + 1)]
    d = [bd[top - j].dense() if X.count(top - j - 1) else field.matrix(0, dims[j]) for j in range(top + 1)]
    ret = Retraction(field, dims, d)
    out = []
    for k in range(top + 1):
        g = ret.degrees[top - k]
        gens = []
        for col in la.columns(g.iota):
            gens.append({X.labels(s): x for s, x in zip(X.simplices[k], col) if x != 0})
        out.append(gens)
    return out


def cover_homology(C: CoverComplex, field, generators: bool = False) -> CoverHomology:
    betti = betti_numbers(C.complex, field)
    gens = homology_generators(C.complex, field) if generators else []
    return CoverHomology(betti, gens)


@dataclass
class TransferReport:
    cover_betti: list[int]
    base_betti: list[int]
    aomoto_betti: list[int]
    passed: bool

    def rows(self):
        return [
            (i, y, b, a, y == b + a)
            for i, (y, b, a) in enumerate(zip(self.cover_betti, self.base_betti, self.aomoto_betti))
        ]


def verify_transfer_equality(X: OrderedSimplicialComplex, cm: CircleMap, field=None) -> TransferReport:
    """b_i(Y, F_2) = b_i(X, F_2) + beta_i(X, eta_2) for the double cover Y."""
    from covhom.arrangements import aomoto_betti

    field = field or PrimeField(2)
    if not (isinstance(field, PrimeField) and field.p == 2):
        raise ValueError("the transfer equality is a statement over F_2")
    ring = cohomology_ring(X, field)
    a = class_of_eta(X, cm, field, ring)
    if all(x == 0 for x in a):
        raise DegenerateInputError("eta vanishes mod 2, so the double cover is disconnected")
    beta = aomoto_betti(ring, a, field)
    cover = betti_numbers(build_finite_cover(X, cm, 2).complex, field)
    base = ring.betti
    return TransferReport(cover, base, beta, all(y == b + a for y, b, a in zip(cover, base, beta)))
