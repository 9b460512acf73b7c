"""Simplicial circle maps X -> S^1_N and the pulled-back 1-cocycle eta.

A circle map assigns every vertex a height in Z_N. Each simplex must map
onto a vertex or an edge of the N-gon; an edge whose heights are
``(N-1, 0)`` is a crossing edge and carries eta = 1.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Hashable, Mapping

from covhom.simplicial import (
    Chain,
    Cochain,
    CohomologyRing,
    OrderedSimplicialComplex,
    cohomology_ring,
    coboundary,
    cup,
    evaluate,
)


class CircleMapError(ValueError):
    def __init__(self, message: str, simplex=None):
        super().__init__(message)
        self.simplex = simplex


class OrderCycleError(ValueError):
    def __init__(self, cycle: list):
        super().__init__(f"precedence constraints are cyclic: {' < '.join(map(str, cycle))}")
        self.cycle = cycle


@dataclass(frozen=True)
class CircleMap:
    N: int
    heights: Mapping[Hashable, int]

    def __post_init__(self):
        if self.N < 3:
            raise CircleMapError("the target circle needs at least 3 vertices")
        object.__setattr__(self, "heights", {v: int(h) % self.N for v, h in dict(self.heights).items()})

    def height(self, v) -> int:
        return self.heights[v]

    def is_crossing(self, heights: set) -> bool:
        return heights == {self.N - 1, 0}


def _simplex_heights(X, cm: CircleMap, s) -> list[int]:
    return [cm.heights[X.vertices[v]] for v in s]


def _adjacent(a: int, b: int, N: int) -> bool:
    return (a - b) % N in (1, N - 1)


def validate_circle_map(X: OrderedSimplicialComplex, cm: CircleMap) -> None:
    """Check that heights define a simplicial map compatible with the vertex order.

    In a crossing simplex every height-(N-1) vertex must precede every
    height-0 vertex; this is what makes the lift of the simplex to the cover
    start at level c and end at level c + 1.
    """
    missing = [v for v in X.vertices if v not in cm.heights]
    if missing:
        raise CircleMapError(f"no height for vertex {missing[0]!r}")
    for k in range(1, X.dim + 1):
        for s in X.simplices[k]:
            hs = _simplex_heights(X, cm, s)
            values = set(hs)
            if len(values) > 2 or (len(values) == 2 and not _adjacent(*values, cm.N)):
                raise CircleMapError(f"simplex {X.labels(s)} has non-adjacent heights {sorted(values)}", X.labels(s))
            if cm.is_crossing(values):
                last_top = max(i for i, h in enumerate(hs) if h == cm.N - 1)
                first_zero = min(i for i, h in enumerate(hs) if h == 0)
                if last_top > first_zero:
                    raise CircleMapError(
                        f"simplex {X.labels(s)} is not order-compatible: height {cm.N - 1} vertices must come first",
                        X.labels(s),
                    )


def precedence_constraints(X: OrderedSimplicialComplex, heights: Mapping, N: int, rule: str = "crossing") -> set[tuple]:
    """Pairs (u, v) of labels such that u must precede v.

    ``rule="crossing"`` only orders crossing edges (height N-1 before 0);
    ``rule="full"`` orders every edge with heights {i, i+1} by height, which is
    cyclic as soon as some loop winds around the circle.
    """
    if rule not in ("crossing", "full"):
        raise ValueError(f"unknown precedence rule {rule!r}")
    out = set()
    for s in X.simplices[1] if X.dim >= 1 else ():
        u, v = X.labels(s)
        a, b = heights[u] % N, heights[v] % N
        if a == b:
            continue
        if rule == "crossing" and {a, b} != {N - 1, 0}:
            continue
        out.add((u, v) if (a + 1) % N == b else (v, u))
    return out


def topological_order(vertices: list, constraints) -> list:
    """Stable topological sort (ties broken by input position); raises on cycles."""
    pos = {v: i for i, v in enumerate(vertices)}
    succ: dict = {v: set() for v in vertices}
    indeg = {v: 0 for v in vertices}
    for u, v in constraints:
        if v not in succ[u]:
            succ[u].add(v)
            indeg[v] += 1
    heap = [pos[v] for v in vertices if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        u = vertices[heapq.heappop(heap)]
        order.append(u)
        for v in sorted(succ[u], key=pos.get):
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(heap, pos[v])
    if len(order) < len(vertices):
        raise OrderCycleError(_find_cycle([v for v in vertices if indeg[v] > 0], succ))
    return order


def _find_cycle(nodes, succ) -> list:
    rest = set(nodes)
    start = nodes[0]
    path, seen = [start], {start: 0}
    while True:
        nxt = next(v for v in sorted(succ[path[-1]], key=str) if v in rest)
        if nxt in seen:
            return path[seen[nxt]:] + [nxt]
        seen[nxt] = len(path)
        path.append(nxt)


def compatible_order_search(X: OrderedSimplicialComplex, heights: Mapping, N: int, rule: str = "crossing") -> list:
    """A total vertex order making the circle map order-compatible.

    Topological sort of the precedence digraph, keeping the input order
    wherever it is free; raises :class:`OrderCycleError` with an explicit
    cycle when no order exists.
    """
    cm = CircleMap(N, heights)
    for k in range(1, X.dim + 1):
        for s in X.simplices[k]:
            values = set(_simplex_heights(X, cm, s))
            if len(values) > 2 or (len(values) == 2 and not _adjacent(*values, N)):
                raise CircleMapError(f"simplex {X.labels(s)} has non-adjacent heights {sorted(values)}", X.labels(s))
    return topological_order(list(X.vertices), precedence_constraints(X, cm.heights, N, rule))


def with_compatible_order(X: OrderedSimplicialComplex, cm: CircleMap) -> OrderedSimplicialComplex:
    order = compatible_order_search(X, cm.heights, cm.N)
    if order == list(X.vertices):
        return X
    return X.reordered(order)


def eta_from_circle_map(X: OrderedSimplicialComplex, cm: CircleMap, field) -> Cochain:
    """The 1-cocycle pulled back from the circle: 1 on crossing edges, else 0."""
    validate_circle_map(X, cm)
    values = {}
    for s in X.simplices[1] if X.dim >= 1 else ():
        u, v = X.labels(s)
        if cm.heights[u] == cm.N - 1 and cm.heights[v] == 0:
            values[s] = 1
    eta = Cochain(X, field, 1, values)
    if not coboundary(eta).is_zero():
        raise ArithmeticError("eta is not a cocycle")
    if not cup(eta, eta).is_zero():
        raise ArithmeticError("eta u eta is not zero at cochain level")
    return eta


def class_of_eta(X: OrderedSimplicialComplex, cm: CircleMap, field, ring: CohomologyRing | None = None) -> list:
    """Coordinates of [eta] in the cohomology ring basis of H^1."""
    if ring is None:
        ring = cohomology_ring(X, field)
    eta = eta_from_circle_map(X, cm, field)
    if X.dim < 1:
        return []
    return ring.class_of(eta)


def winding_number(X: OrderedSimplicialComplex, cm: CircleMap, loop: list) -> int:
    """Integer value of nu on the closed edge path ``loop`` (list of vertex labels)."""
    total = 0
    for u, v in zip(loop, loop[1:] + loop[:1]):
        d = (cm.heights[v] - cm.heights[u]) % cm.N
        if d == 1:
            total += 1
        elif d == cm.N - 1:
            total -= 1
        elif d != 0:
            raise CircleMapError(f"edge ({u}, {v}) has non-adjacent heights")
    if total % cm.N:
        raise CircleMapError("path is not closed in the circle")
    return total // cm.N


def loop_chain(X: OrderedSimplicialComplex, field, loop: list) -> Chain:
    """The 1-cycle traversing ``loop`` (labels, closed)."""
    values: dict = {}
    for u, v in zip(loop, loop[1:] + loop[:1]):
        a, b = X.position[u], X.position[v]
        key, sign = ((a, b), 1) if a < b else ((b, a), -1)
        values[key] = values.get(key, 0) + sign
    return Chain(X, field, 1, values)


def eta_pairing(eta: Cochain, z: Chain):
    return evaluate(eta, z)
