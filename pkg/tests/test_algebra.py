import pytest
from hypothesis import given
from hypothesis import strategies as st

from covhom.algebra import (
    QQ,
    CyclotomicField,
    ExactMatrix,
    ModuleDecomposition,
    PreconditionError,
    PrimeField,
    TruncatedRing,
    cokernel,
    diagonalize_truncated,
    field_selector,
    module_homology,
    parse_field,
)
from covhom.algebra import linalg as la
from covhom.algebra.fields import is_prime

FIELDS = [QQ, PrimeField(2), PrimeField(3), PrimeField(7), CyclotomicField(3)]

small_ints = st.integers(-4, 4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_parse_field_round_trip():
    for spec in ("q0", "p2", "p11", "zeta5"):
        assert field_selector(parse_field(spec)) == spec
    for bad in ("p4", "p1", "zeta6", "r3", ""):
        with pytest.raises(ValueError):
            parse_field(bad)


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_prime_field_arithmetic():
    F = PrimeField(5)
    assert F(7) == F(2)
    assert F(3) * F(2) == F(1)
    assert F(1) / F(2) == F(3)


def test_cyclotomic_field():
    F = CyclotomicField(3)
    z = F.zeta
    assert z * z * z == F.one
    assert z * z + z + F.one == F.zero
    assert z * z.inverse() == F.one


@pytest.mark.parametrize("field", FIELDS, ids=lambda F: field_selector(F))
@given(rows=matrices())
def test_rank_matches_oracle(field, rows):
    M = la.from_rows(field, rows)
    assert la.rank(M) == la.dense_rank_oracle(field, rows)


@pytest.mark.parametrize("field", FIELDS, ids=lambda F: field_selector(F))
@given(rows=matrices())
def test_rank_nullity(field, rows):
    M = la.from_rows(field, rows)
    K = la.nullspace(field, M)
    assert la.rank(M) + K.ncols() == M.ncols()
    if K.ncols():
        assert la.is_zero(M * K)


@given(rows=matrices(4, 4), rhs=st.lists(small_ints, min_size=4, max_size=4))
def test_solve_is_consistent(rows, rhs):
    M = la.from_rows(QQ, rows)
    b = la.from_rows(QQ, [[x] for x in rhs[: M.nrows()]])
    X = la.solve(QQ, M, b)
    if X is None:
        assert not la.in_span(QQ, M, b)
    else:
        assert M * X == b


def test_generic_inverse():
    F = CyclotomicField(5)
    z = F.zeta
    M = la.GenericMatrix(F, 2, 2, [z, F.one, F.zero, z * z])
    assert M * M.inv() == la.identity(F, 2)
    with pytest.raises(ZeroDivisionError):
        la.GenericMatrix(F, 2, 2, [F.one, F.one, F.one, F.one]).inv()


def test_sparse_matrix_basics():
    M = ExactMatrix.from_rows(QQ, [[1, 0], [0, 2], [3, 0]])
    assert M.shape == (3, 2)
    assert M.nnz() == 3
    assert M.transpose().to_rows() == [[1, 0, 3], [0, 2, 0]]
    assert M.apply([1, 1]) == [1, 2, 3]


def test_truncated_series_arithmetic():
    R = TruncatedRing(PrimeField(3), 4)
    t = R.series([1, 1])
    assert (t * t.inverse()) == R.one
    assert R.s_power(2).valuation() == 2
    assert R.s_power(4) == R.zero
    with pytest.raises(TypeError):
        TruncatedRing(CyclotomicField(3), 2)


@pytest.mark.parametrize("m", [1, 3, 6])
@given(data=st.data())
def test_cokernel_of_diagonal_matrix(m, data):
    R = TruncatedRing(QQ, m)
    exps = data.draw(st.lists(st.integers(0, m), min_size=1, max_size=4))
    M = ExactMatrix(R, len(exps), len(exps), {(i, i): R.s_power(k) for i, k in enumerate(exps)})
    assert cokernel(M) == ModuleDecomposition.from_exponents(m, exps)


@given(rows=st.lists(st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_diagonalization_preserves_dimension(rows):
    """dim_K of the cokernel equals the corank of the flattened matrix."""
    from covhom.algebra.series import flatten

    m = 3
    R = TruncatedRing(PrimeField(3), m)
    M = ExactMatrix(R, 3, 3, {(i, j): R.series(rows[i][j]) for i in range(3) for j in range(3)})
    d = diagonalize_truncated(M)
    assert all(0 <= k <= m for k in d.exponents)
    flat = flatten(M)
    assert cokernel(M).dimension == 3 * m - la.rank(flat)


def test_module_homology_requires_complex():
    R = TruncatedRing(QQ, 3)
    A = ExactMatrix(R, 1, 1, {(0, 0): R.one})
    with pytest.raises(PreconditionError):
        module_homology(A, A)


def test_module_homology_of_s_multiplication():
    # R --s^2--> R --s^2--> R over K[s]/(s^3): ker = (s), im = (s^2), quotient R/(s)
    R = TruncatedRing(QQ, 3)
    d_in = ExactMatrix(R, 1, 1, {(0, 0): R.s_power(2)})
    d_out = ExactMatrix(R, 1, 1, {(0, 0): R.s_power(2)})
    H = module_homology(d_in, d_out)
    assert H.free_rank == 0 and H.torsion_exponents == (1,)


def test_module_decomposition_validation():
    with pytest.raises(ValueError):
        ModuleDecomposition(3, 0, (3,))
    assert ModuleDecomposition.from_exponents(4, [0, 2, 4, 1]).as_dict() == {"modulus": 4, "free_rank": 1, "torsion": [1, 2]}
