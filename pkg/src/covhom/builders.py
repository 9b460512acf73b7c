"""Canonical ordered complexes with circle maps.

Each builder returns ``(X, cm)`` where the vertex order of ``X`` is already
compatible with the circle map ``cm``.
"""

from __future__ import annotations

from covhom.circle import CircleMap, compatible_order_search, validate_circle_map
from covhom.simplicial import OrderedSimplicialComplex, validate_complex


def _finish(vertices, cells, heights, N):
    X = OrderedSimplicialComplex.from_cells(vertices, cells)
    order = compatible_order_search(X, heights, N)
    if order != list(X.vertices):
        X = X.reordered(order)
    cm = CircleMap(N, heights)
    validate_complex(X)
    validate_circle_map(X, cm)
    return X, cm


def circle(N: int = 6, degree: int = 1):
    """S^1 with N vertices; ``degree`` 1 is the identity map, 0 the constant map."""
    if N < 3:
        raise ValueError("a simplicial circle needs at least 3 vertices")
    vertices = list(range(N))
    cells = [(i, (i + 1) % N) for i in range(N)]
    heights = {i: (i if degree else 0) for i in vertices}
    if degree not in (0, 1):
        raise ValueError("only degrees 0 and 1 are realized on S^1_N")
    return _finish(vertices, cells, heights, N)


def torus(k: int = 3, constant: bool = False):
    """k x k grid torus, heights = column index (projection onto the first circle)."""
    if k < 3:
        raise ValueError("grid torus needs k >= 3")
    vertices = [(i, j) for i in range(k) for j in range(k)]
    cells = []
    for i in range(k):
        for j in range(k):
            a, b = (i, j), ((i + 1) % k, j)
            c, d = (i, (j + 1) % k), ((i + 1) % k, (j + 1) % k)
            cells += [(a, b, d), (a, c, d)]
    heights = {v: (0 if constant else v[0]) for v in vertices}
    return _finish(vertices, cells, heights, k)


def klein_bottle(a: int = 3, b: int = 3):
    """Twisted a x b grid: column a-1 is glued to column 0 by j -> -j.

    The circle map is the projection onto the base of the mapping torus of a
    reflection of the fiber circle, so the monodromy on H_1 of the fiber is -1.
    """
    if a < 3 or b < 3:
        raise ValueError("twisted grid needs a, b >= 3")
    vertices = [(i, j) for i in range(a) for j in range(b)]
    cells = []
    for i in range(a):
        for j in range(b):
            p, q = (i, j), (i, (j + 1) % b)
            if i < a - 1:
                r, s = (i + 1, j), (i + 1, (j + 1) % b)
            else:
                r, s = (0, (-j) % b), (0, (-j - 1) % b)
            cells += [(p, r, s), (p, q, s)]
    heights = {v: v[0] for v in vertices}
    return _finish(vertices, cells, heights, a)


def wedge_of_circles(count: int = 2, twisted: tuple[int, ...] = (0,)):
    """Triangle boundaries sharing the vertex ``"o"``; loops in ``twisted`` wind once."""
    vertices = ["o"]
    cells = []
    heights = {"o": 0}
    for c in range(count):
        u, v = f"a{c}", f"b{c}"
        vertices += [u, v]
        cells += [("o", u), (u, v), ("o", v)]
        if c in twisted:
            heights[u], heights[v] = 1, 2
        else:
            heights[u], heights[v] = 0, 0
    return _finish(vertices, cells, heights, 3)


def prism(X: OrderedSimplicialComplex, cm: CircleMap):
    """X x [0, 1] with the staircase triangulation; heights pulled back from X."""
    vertices = [(v, e) for v in X.vertices for e in (0, 1)]
    cells = []
    for labels in X.top_cells():
        for i in range(len(labels)):
            cells.append(tuple((v, 0) for v in labels[: i + 1]) + tuple((v, 1) for v in labels[i:]))
    heights = {(v, e): cm.heights[v] for v in X.vertices for e in (0, 1)}
    return _finish(vertices, cells, heights, cm.N)


CORPUS_BUILDERS = {
    "circle": circle,
    "torus": torus,
    "klein": klein_bottle,
    "wedge": wedge_of_circles,
}
