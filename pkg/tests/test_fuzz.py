"""Property checks on random complexes with random circle maps."""

import random

import pytest

from covhom.algebra import QQ, PrimeField
from covhom.circle import eta_from_circle_map
from covhom.fox import triangulate_presentation
from covhom.fuzz import random_instances, random_unipotent_presentation
from covhom.invariants import cup_cap_identities, global_law, massey_dk, prop_key, square_zero, twisted_square_zero

FIELDS = [QQ, PrimeField(2), PrimeField(3)]


@pytest.mark.parametrize("chunk", range(4))
def test_sign_conventions_on_random_complexes(chunk):
    rng = random.Random(chunk)
    for i, (X, cm) in enumerate(random_instances(100 + chunk, 50)):
        F = FIELDS[i % 3]
        eta = eta_from_circle_map(X, cm, F)
        for check in (square_zero(X, F), twisted_square_zero(X, eta, 3), cup_cap_identities(X, F, rng, 1)):
            assert check.passed, (check.name, check.detail, X.top_cells(), cm)


def unipotent_instances(seed, count):
    rng = random.Random(seed)
    return [triangulate_presentation(random_unipotent_presentation(rng, rng.choice((2, 3)))) for _ in range(count)]


def test_massey_products_equal_differentials_on_random_complexes():
    instances = random_instances(7, 40, nonzero_eta=True, max_vertices=9) + unipotent_instances(7, 10)
    assert len(instances) == 50
    for i, (X, cm) in enumerate(instances):
        eta = eta_from_circle_map(X, cm, FIELDS[i % 3])
        check = massey_dk(X, eta, 5)
        assert check.passed, (check.detail, X.top_cells(), cm)


def test_global_law_on_unipotent_mapping_tori():
    seen = set()
    for X, cm in unipotent_instances(5, 5):
        check = global_law(X, eta_from_circle_map(X, cm, PrimeField(3)))
        assert check.passed, check.detail
        seen.add(check.detail)
    assert any("jordan=3" in d for d in seen)


def test_global_law_and_cover_equivalence_on_random_complexes():
    for X, cm in random_instances(11, 20, nonzero_eta=True):
        eta = eta_from_circle_map(X, cm, QQ)
        assert global_law(X, eta).passed
        assert prop_key(X, cm).passed
