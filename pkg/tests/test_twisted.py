import pytest

from covhom import builders
from covhom.algebra import QQ, PrimeField
from covhom.circle import eta_from_circle_map
from covhom.fox import h1_truncated, heisenberg, trefoil
from covhom.twisted import (
    alexander_profile,
    build_twisted_chain,
    build_twisted_cochain,
    minimal_model,
    sum_rule_holds,
    twisted_dimensions,
    twisted_homology_of,
    verify_prop_key,
)

from conftest import COMPLEXES, corpus_space

F2, F3, F5 = PrimeField(2), PrimeField(3), PrimeField(5)


def eta_of(name, field):
    X, cm = corpus_space(name)
    return X, eta_from_circle_map(X, cm, field)


@pytest.mark.parametrize("name", ["circle", "torus", "klein", "wedge"])
@pytest.mark.parametrize("field", [QQ, F2, F3])
@pytest.mark.parametrize("m", [1, 2, 4])
def test_reduced_model_agrees_with_full_complex(name, field, m):
    X, eta = eta_of(name, field)
    for side in ("chain", "cochain"):
        full = twisted_homology_of(X, eta, m, side, "full")
        reduced = twisted_homology_of(X, eta, m, side, "reduced")
        assert full == reduced


def test_twisted_differentials_square_to_zero():
    X, eta = eta_of("klein", F3)
    build_twisted_chain(X, eta, 5)
    build_twisted_cochain(X, eta, 5)


def test_m1_gives_ordinary_betti_numbers():
    X, eta = eta_of("torus", QQ)
    assert twisted_dimensions(X, eta, 1) == [1, 2, 1]


@pytest.mark.parametrize(
    "name, field, torsion, free",
    [
        ("circle", QQ, [(1,), ()], [0, 0]),
        ("torus", QQ, [(1,), (1,), ()], [0, 0, 0]),
        ("klein", F2, [(1,), (1,), ()], [0, 0, 0]),
        ("klein", F3, [(1,), (), ()], [0, 0, 0]),
        ("wedge", QQ, [(1,), ()], [0, 1]),
        ("trefoil", QQ, [(1,), (), ()], [0, 0, 0]),
    ],
)
def test_alexander_profiles(name, field, torsion, free):
    X, eta = eta_of(name, field)
    prof = alexander_profile(X, eta)
    assert prof.torsion == torsion
    assert prof.free_ranks == free


@pytest.mark.parametrize("field", [QQ, F2, F3, F5])
def test_heisenberg_profile_against_fox_oracle(field):
    X, eta = eta_of("heisenberg", field)
    prof = alexander_profile(X, eta)
    assert prof.torsion[1] == (2,)
    # the Fox complex sees H_1 (x) R_m plus Tor(H_0, R_m)
    fox = h1_truncated(heisenberg(), field, 6)
    assert sorted(fox.torsion_exponents) == sorted(prof.torsion[1] + prof.torsion[0])
    assert fox.free_rank == prof.free_ranks[1]


def test_trefoil_has_no_unipotent_torsion_in_degree_one():
    # only the Tor(H_0, R_m) = R_m/(s) summand survives
    for field in (QQ, F2, F3):
        assert h1_truncated(trefoil(), field, 5).torsion_exponents == (1,)


@pytest.mark.parametrize("name", COMPLEXES)
def test_sum_rule(name):
    X, eta = eta_of(name, F3)
    prof = alexander_profile(X, eta)
    for m in (1, 2, 3, 7):
        assert sum_rule_holds(prof, twisted_dimensions(X, eta, m), m)


@pytest.mark.parametrize("name", ["circle", "torus", "klein", "wedge"])
@pytest.mark.parametrize("p, r", [(2, 1), (3, 1), (2, 2)])
def test_twisted_dimensions_equal_cover_betti(name, p, r):
    rep = verify_prop_key(*corpus_space(name), p, r)
    assert rep.passed, (rep.twisted, rep.cover)


def test_minimal_model_first_coefficient_is_cup_with_eta():
    X, eta = eta_of("torus", QQ)
    model = minimal_model(X, eta, 3)
    from covhom.simplicial import cohomology_ring
    from covhom.circle import class_of_eta

    ring = cohomology_ring(X, QQ)
    a = class_of_eta(X, corpus_space("torus")[1], QQ, ring)
    expected = ring.left_multiplication_matrix(1, a, 0)
    assert model.coefficient(0, 1) == expected
