"""Random ordered complexes with simplicial circle maps, for property tests."""

from __future__ import annotations

import random
from itertools import combinations

from covhom.circle import CircleMap, compatible_order_search, validate_circle_map
from covhom.simplicial import Cochain, OrderedSimplicialComplex, validate_complex


def _admissible(hs: list[int], N: int) -> bool:
    """Heights of a simplex must lie in one closed edge {h, h+1} of the circle."""
    vals = set(hs)
    if len(vals) == 1:
        return True
    if len(vals) > 2:
        return False
    a, b = sorted(vals)
    return b - a == 1 or (a == 0 and b == N - 1)


def random_complex_with_map(rng: random.Random, max_vertices: int = 8, max_dim: int = 3):
    """A random complex whose cells respect a random height function mod N."""
    while True:
        N = rng.choice((3, 4, 5))
        n = rng.randint(3, max_vertices)
        heights = {v: rng.randrange(N) for v in range(n)}
        cells = []
        for k in range(2, max_dim + 2):
            cand = [c for c in combinations(range(n), k) if _admissible([heights[v] for v in c], N)]
            rng.shuffle(cand)
            cells += cand[: rng.randint(0, max(1, 2 * n // k))]
        if not cells:
            continue
        used = sorted({v for c in cells for v in c})
        X = OrderedSimplicialComplex.from_cells(used, cells)
        hs = {v: heights[v] for v in used}
        order = compatible_order_search(X, hs, N)
        X = X.reordered(order)
        cm = CircleMap(N, hs)
        validate_complex(X)
        validate_circle_map(X, cm)
        return X, cm


def random_cochain(X: OrderedSimplicialComplex, field, degree: int, rng: random.Random, density: float = 0.5) -> Cochain:
    level = X.simplices[degree] if 0 <= degree <= X.dim else ()
    return Cochain(X, field, degree, {s: rng.randrange(-3, 4) for s in level if rng.random() < density})


def random_subcomplex(rng: random.Random, X: OrderedSimplicialComplex, cm: CircleMap, keep: float = 0.8):
    """Drop random maximal cells of X; the restricted circle map stays valid."""
    cells = [c for c in X.top_cells() if rng.random() < keep] or X.top_cells()[:1]
    used = [v for v in X.vertices if any(v in c for c in cells)]
    Y = OrderedSimplicialComplex.from_cells(used, cells)
    sub = CircleMap(cm.N, {v: cm.heights[v] for v in used})
    validate_circle_map(Y, sub)
    return Y, sub


def _corpus_parents():
    from covhom import builders

    return [builders.torus(3), builders.torus(4), builders.klein_bottle(), builders.klein_bottle(4, 3), builders.prism(*builders.circle(4))]


def random_instances(seed: int, count: int, nonzero_eta: bool = False, **kwargs):
    """``count`` random (X, cm) pairs; with ``nonzero_eta`` only classes [eta] != 0 over QQ.

    Even draws are complexes built from random admissible cells, odd draws are
    random subcomplexes of small grids and prisms.
    """
    from covhom.algebra import QQ
    from covhom.circle import class_of_eta

    rng = random.Random(seed)
    parents = _corpus_parents()
    out = []
    draw = 0
    while len(out) < count:
        draw += 1
        if draw % 2:
            X, cm = random_subcomplex(rng, *rng.choice(parents), keep=rng.uniform(0.6, 0.95))
        else:
            X, cm = random_complex_with_map(rng, **kwargs)
        if nonzero_eta and not any(x != 0 for x in class_of_eta(X, cm, QQ)):
            continue
        out.append((X, cm))
    return out


def random_unipotent_presentation(rng: random.Random, n: int = 3, bound: int = 2):
    """Z^n semidirect Z by a random upper unitriangular matrix A, with nu(t) = 1.

    The relators are [e_i, e_j] and t e_i t^-1 = A e_i, so the Alexander module
    is Z^n with t acting by A and Jordan blocks follow those of A - 1.
    """
    from covhom.fox import GroupPresentation

    A = [[int(i == j) if i >= j else rng.randint(-bound, bound) for j in range(n)] for i in range(n)]
    gens = ["t"] + [f"e{i}" for i in range(n)]
    rels = [((i, 1), (j, 1), (i, -1), (j, -1)) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for i in range(n):
        image = []
        for j in range(n):
            c = A[j][i]
            image += [(j + 1, 1 if c > 0 else -1)] * abs(c)
        inv = [(g, -e) for g, e in reversed(image)]
        rels.append(((0, 1), (i + 1, 1), (0, -1), *inv))
    return GroupPresentation(gens, rels, (1,) + (0,) * n)
