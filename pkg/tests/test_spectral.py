import pytest

from covhom.algebra import QQ, PrimeField
from covhom.circle import eta_from_circle_map
from covhom.covers import DegenerateInputError
from covhom.spectral import (
    build_double_complex,
    bruteforce_pages,
    check_e1,
    compute_pages,
    degeneration,
    e2_equality_test,
    filtered_sequence,
    flattening_identity_holds,
    truncated_ss,
    windowed_table,
)
from covhom.twisted import alexander_profile, twisted_dimensions, working_modulus
from covhom import builders

from conftest import COMPLEXES, corpus_space

F2, F3 = PrimeField(2), PrimeField(3)


def eta_of(name, field):
    X, cm = corpus_space(name)
    return X, eta_from_circle_map(X, cm, field)


@pytest.mark.parametrize("name", ["circle", "torus", "klein", "wedge"])
@pytest.mark.parametrize("field", [QQ, F2, F3])
def test_double_complex_flattens_to_twisted_cochains(name, field):
    X, eta = eta_of(name, field)
    D = build_double_complex(X, eta, 3)
    assert flattening_identity_holds(D)
    assert check_e1(D)


@pytest.mark.parametrize("name", ["circle", "torus", "klein", "wedge"])
@pytest.mark.parametrize("field", [QQ, F2, F3])
@pytest.mark.parametrize("m", [2, 3, 4])
def test_windowed_pages_match_bruteforce(name, field, m):
    X, eta = eta_of(name, field)
    D = build_double_complex(X, eta, m)
    seq = filtered_sequence(X, eta, m)
    pages = bruteforce_pages(D, m + 1)
    for r, table in pages.items():
        assert table == windowed_table(seq, r), r


@pytest.mark.parametrize("name", ["heisenberg", "trefoil"])
def test_windowed_pages_match_bruteforce_on_presentations(name):
    X, eta = eta_of(name, QQ)
    D = build_double_complex(X, eta, 2)
    seq = filtered_sequence(X, eta, 2)
    for r, table in bruteforce_pages(D, 3).items():
        assert table == windowed_table(seq, r), r


def test_heisenberg_pages_at_three_columns():
    X, eta = eta_of("heisenberg", F3)
    D = build_double_complex(X, eta, 3)
    seq = filtered_sequence(X, eta, 3)
    bf = bruteforce_pages(D, 4)
    assert all(bf[r] == windowed_table(seq, r) for r in bf)
    assert degeneration(seq).einf == [1, 3, 5]


@pytest.mark.parametrize("name", COMPLEXES)
def test_infinity_page_abuts_to_twisted_cohomology(name):
    X, eta = eta_of(name, F3)
    m = 5
    seq = filtered_sequence(X, eta, m)
    einf = degeneration(seq).einf
    assert einf[: X.dim + 1] == twisted_dimensions(X, eta, m, "cochain")


@pytest.mark.parametrize("name", COMPLEXES)
def test_degeneration_page_tracks_jordan_size(name):
    X, eta = eta_of(name, QQ)
    seq = filtered_sequence(X, eta, working_modulus(X))
    rep = degeneration(seq)
    assert rep.max_nonzero == alexander_profile(X, eta).max_jordan
    assert rep.page == rep.max_nonzero + 1 if rep.max_nonzero else rep.page == 1


def test_compute_pages_first_page_is_cohomology():
    X, eta = eta_of("torus", QQ)
    D = build_double_complex(X, eta, 4)
    pages = compute_pages(D, 2)
    E1 = pages[0]
    assert [E1.table[(0, n)] for n in range(3)] == [1, 2, 1]
    assert E1.page == 1 and not E1.is_zero
    assert {n for n, _, _ in E1.nonzero_differentials()} == {0, 1}


@pytest.mark.parametrize("name", ["circle", "torus", "klein", "wedge", "heisenberg"])
@pytest.mark.parametrize("p, r", [(2, 1), (3, 1), (2, 2)])
def test_truncated_sequence_abuts_to_cover(name, p, r):
    rep = truncated_ss(*corpus_space(name), p, r)
    assert rep.abutment_holds


def test_e2_biconditional_torus_and_heisenberg():
    v = e2_equality_test(*corpus_space("torus"), 3, 1)
    assert v.equality and v.degenerates_at_e2
    v = e2_equality_test(*corpus_space("heisenberg"), 3, 1)
    assert not v.equality and not v.degenerates_at_e2
    assert v.cover_betti[1] == 3 and v.bound[1] == 4


def test_e2_test_rejects_degenerate_inputs():
    with pytest.raises(DegenerateInputError):
        e2_equality_test(*corpus_space("torus"), 2, 1)
    with pytest.raises(DegenerateInputError):
        e2_equality_test(*builders.torus(constant=True), 3, 1)
