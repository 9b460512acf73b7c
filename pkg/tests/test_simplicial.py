import random

import pytest

from covhom import builders
from covhom.algebra import QQ, CyclotomicField, PrimeField
from covhom.invariants import cup_cap_identities, square_zero
from covhom.simplicial import (
    Chain,
    Cochain,
    ComplexError,
    OrderedSimplicialComplex,
    betti_numbers,
    boundary,
    cap,
    coboundary,
    cohomology_ring,
    constant_cochain,
    cup,
    evaluate,
)

F2, F3 = PrimeField(2), PrimeField(3)


def sphere2():
    return OrderedSimplicialComplex.from_cells(range(4), [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


def rp2():
    cells = [(1, 2, 4), (2, 3, 4), (3, 4, 5), (1, 3, 5), (1, 2, 5), (2, 5, 6), (2, 3, 6), (1, 3, 6), (1, 4, 6), (4, 5, 6)]
    return OrderedSimplicialComplex.from_cells(range(1, 7), cells)


@pytest.mark.parametrize(
    "make, field, expected",
    [
        (sphere2, QQ, [1, 0, 1]),
        (rp2, QQ, [1, 0, 0]),
        (rp2, F2, [1, 1, 1]),
        (lambda: builders.torus()[0], QQ, [1, 2, 1]),
        (lambda: builders.klein_bottle()[0], QQ, [1, 1, 0]),
        (lambda: builders.klein_bottle()[0], F2, [1, 2, 1]),
        (lambda: builders.klein_bottle()[0], CyclotomicField(3), [1, 1, 0]),
        (lambda: builders.wedge_of_circles(3)[0], F3, [1, 3]),
    ],
)
def test_betti_numbers(make, field, expected):
    assert betti_numbers(make(), field) == expected


def test_euler_characteristic_matches_betti():
    for X in (sphere2(), rp2(), builders.torus()[0], builders.klein_bottle()[0]):
        assert X.euler_characteristic() == sum((-1) ** k * b for k, b in enumerate(betti_numbers(X, QQ)))


def test_from_cells_rejects_bad_input():
    with pytest.raises(ComplexError):
        OrderedSimplicialComplex.from_cells([0, 1], [(0, 2)])
    with pytest.raises(ComplexError):
        OrderedSimplicialComplex.from_cells([0, 1], [(0, 0)])
    with pytest.raises(ComplexError):
        OrderedSimplicialComplex.from_cells([0, 0], [])


def test_top_cells_and_reorder_round_trip():
    X = rp2()
    Y = X.reordered(list(reversed(X.vertices)))
    assert sorted(map(sorted, X.top_cells())) == sorted(map(sorted, Y.top_cells()))
    assert betti_numbers(Y, F2) == betti_numbers(X, F2)


@pytest.mark.parametrize("field", [QQ, F2, F3])
def test_square_zero_on_corpus(field):
    for X in (rp2(), builders.torus()[0], builders.klein_bottle()[0]):
        assert square_zero(X, field).passed


@pytest.mark.parametrize("field", [QQ, F3])
def test_cup_cap_identities_on_torus(field):
    X, _ = builders.torus()
    assert cup_cap_identities(X, field, random.Random(1), 2).passed


def test_unit_and_evaluation():
    X, _ = builders.torus()
    one = constant_cochain(X, QQ)
    a = Cochain(X, QQ, 1, {X.simplices[1][0]: 2, X.simplices[1][3]: -1})
    assert cup(one, a) == a == cup(a, one)
    w = Chain(X, QQ, 1, {X.simplices[1][0]: 1})
    assert evaluate(a, w) == 2
    # <delta a, w> = <a, boundary w>
    w2 = Chain(X, QQ, 2, {X.simplices[2][0]: 1, X.simplices[2][5]: 3})
    assert evaluate(coboundary(a), w2) == evaluate(a, boundary(w2))
    # cap with the unit is the identity
    assert cap(w2, one) == w2


def test_torus_cup_product_is_nondegenerate():
    X, _ = builders.torus()
    ring = cohomology_ring(X, QQ)
    assert ring.betti == [1, 2, 1]
    x, y = [1, 0], [0, 1]
    xy = ring.multiply(1, x, 1, y)
    yx = ring.multiply(1, y, 1, x)
    assert xy != [0] and [a + b for a, b in zip(xy, yx)] == [0]
    assert ring.multiply(1, x, 1, x) == [0]


def test_klein_bottle_cup_square_mod_2():
    """w1 squared is nonzero on the Klein bottle over F_2 while a b-type class squares to 0."""
    X, _ = builders.klein_bottle()
    ring = cohomology_ring(X, F2)
    squares = [ring.multiply(1, e, 1, e) for e in ([1, 0], [0, 1], [1, 1])]
    assert sum(1 for s in squares if any(x != 0 for x in s)) >= 1


def test_class_of_rejects_non_cocycle():
    X, _ = builders.torus()
    ring = cohomology_ring(X, QQ)
    with pytest.raises(ValueError):
        ring.class_of(Cochain(X, QQ, 1, {X.simplices[1][0]: 1}))
