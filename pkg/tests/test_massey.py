import random

import pytest

from covhom.algebra import QQ, PrimeField
from covhom.circle import class_of_eta, eta_from_circle_map
from covhom.fox import class_of_homomorphism, heisenberg
from covhom.massey import (
    MasseyValue,
    Obstruction,
    cochain_affine_set,
    compare_with_dk,
    find_defining_system,
    in_span,
    massey_length_profile,
    massey_product,
    random_defining_system,
    same_span,
    value_of,
)
from covhom.simplicial import cohomology_ring

from conftest import COMPLEXES, corpus_space

F2, F3 = PrimeField(2), PrimeField(3)


def eta_of(name, field):
    X, cm = corpus_space(name)
    return X, eta_from_circle_map(X, cm, field)


def heisenberg_y_class(field):
    X, _ = corpus_space("heisenberg")
    return class_of_homomorphism(heisenberg(), X, cohomology_ring(X, field), (0, 1, 0))


def test_length_two_product_is_cup_product():
    X, cm = corpus_space("torus")
    eta = eta_from_circle_map(X, cm, QQ)
    ring = cohomology_ring(X, QQ)
    a = class_of_eta(X, cm, QQ, ring)
    for omega in ([1, 0], [0, 1]):
        mv = massey_product(X, eta, omega, 1, 1)
        assert isinstance(mv, MasseyValue)
        assert mv.value == ring.multiply(1, a, 1, omega)
        assert mv.indeterminacy == []


def test_obstruction_when_cup_product_is_nonzero():
    X, eta = eta_of("torus", QQ)
    ring = cohomology_ring(X, QQ)
    a = class_of_eta(X, corpus_space("torus")[1], QQ, ring)
    # pick omega with a u omega != 0
    omega = next(w for w in ([1, 0], [0, 1]) if any(ring.multiply(1, a, 1, w)))
    res = massey_product(X, eta, omega, 2, 1)
    assert isinstance(res, Obstruction) and res.stage == 1


@pytest.mark.parametrize("field", [QQ, F3])
def test_heisenberg_triple_product(field):
    X, eta = eta_of("heisenberg", field)
    omega = heisenberg_y_class(field)
    mv = massey_product(X, eta, omega, 2, 1)
    assert isinstance(mv, MasseyValue) and mv.nonzero
    oracle = cochain_affine_set(X, eta, omega, 2, 1)
    assert oracle is not None
    value, ind = oracle
    n = len(mv.value)
    assert same_span(field, ind, mv.indeterminacy, n)
    diff = [a - b for a, b in zip(value, mv.value)]
    assert in_span(field, mv.indeterminacy, diff)


@pytest.mark.parametrize("name", ["torus", "klein", "wedge"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_random_defining_systems_land_in_the_affine_set(name, k):
    field = F3
    X, eta = eta_of(name, field)
    rng = random.Random(k)
    ring = cohomology_ring(X, field)
    for degree in range(X.dim):
        for _ in range(3):
            omega = [field(rng.randrange(3)) for _ in range(ring.betti[degree])]
            mv = massey_product(X, eta, omega, k, degree)
            if isinstance(mv, Obstruction):
                assert find_defining_system(X, eta, omega, k, degree).stage == mv.stage
                assert cochain_affine_set(X, eta, omega, k, degree) is None
                continue
            system = random_defining_system(X, eta, omega, k, degree, rng)
            assert system.check(X, eta)
            diff = [a - b for a, b in zip(value_of(X, eta, system), mv.value)]
            assert in_span(field, mv.indeterminacy, diff)


@pytest.mark.parametrize(
    "name, field, profile",
    [
        ("circle", QQ, [2, 0]),
        ("torus", QQ, [2, 2, 0]),
        ("klein", QQ, [2, 0, 0]),
        ("klein", F3, [2, 0, 0]),
        ("klein", F2, [2, 2, 0]),
        ("wedge", QQ, [2, 0]),
        ("heisenberg", QQ, [2, 3, 0]),
        ("heisenberg", F3, [2, 3, 0]),
        ("trefoil", QQ, [2, 0, 0]),
    ],
)
def test_massey_length_profiles(name, field, profile):
    X, eta = eta_of(name, field)
    assert massey_length_profile(X, eta, 3) == profile


@pytest.mark.parametrize("name", COMPLEXES)
@pytest.mark.parametrize("field", [QQ, F2, F3])
def test_massey_products_equal_spectral_differentials(name, field):
    X, eta = eta_of(name, field)
    rep = compare_with_dk(X, eta, 4)
    assert rep.passed, [r for r in rep.rows if not (r.matches and r.indeterminacy_matches)]


def test_heisenberg_has_a_nonzero_d2():
    X, eta = eta_of("heisenberg", QQ)
    rep = compare_with_dk(X, eta, 4)
    assert any(r.k == 2 and r.degree == 1 and r.nonzero for r in rep.rows)


def test_defining_system_degree_validation():
    X, eta = eta_of("circle", QQ)
    with pytest.raises(ValueError):
        massey_length_profile(X, eta, 0)
