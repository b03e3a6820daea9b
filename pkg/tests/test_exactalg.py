from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from extremal.errors import CharTwo, DimensionMismatch, MixedFields
from extremal.exactalg import (
    EchelonSpan,
    FieldSpec,
    Fp,
    Matrix,
    kernel_basis,
    rank,
    rref,
    solve_in_span,
)

Q = FieldSpec(None)
F5 = FieldSpec(5)


def test_char_two_rejected():
    with pytest.raises(CharTwo):
        FieldSpec(2)
    with pytest.raises(CharTwo):
        FieldSpec.parse("F2")


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        FieldSpec(9)


@pytest.mark.parametrize("text,p", [("Q", None), ("F5", 5), ("GF(7)", 7), ("gf11", 11), ("Fp=13", 13)])
def test_parse(text, p):
    assert FieldSpec.parse(text).p == p


def test_fp_arithmetic():
    a, b = Fp(3, 5), Fp(4, 5)
    assert a + b == Fp(2, 5)
    assert a * b == Fp(2, 5)
    assert a / b == Fp(2, 5)  # 4^{-1} = 4
    assert -a == Fp(2, 5)
    assert a - 3 == 0
    assert not Fp(10, 5)


def test_mixed_fields():
    with pytest.raises(MixedFields):
        Fp(1, 5) + Fp(1, 7)


def test_scalar_parsing():
    assert Q("3/2") == Fraction(3, 2)
    assert F5("3/2") == Fp(4, 5)
    assert F5.format(F5(-1)) == "4"
    assert Q.format(Fraction(-3, 4)) == "-3/4"


def test_rref_examples():
    r, piv, t = rref(Matrix.identity(2, Q))
    assert r.to_rows() == [[1, 0], [0, 1]] and piv == [0, 1]
    r, piv, t = rref(Matrix.zeros(3, 3, Q))
    assert piv == [] and all(x == 0 for x in r.entries)
    r, piv, t = rref(Matrix.from_rows([[1, 2], [2, 4]], Q))
    assert r.to_rows() == [[1, 2], [0, 0]] and piv == [0]


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(2, Q)) == []
    assert len(kernel_basis(Matrix.zeros(1, 3, Q))) == 3
    tri = Matrix.from_rows([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]], Q)
    (v,) = kernel_basis(tri)
    assert v[0] != 0 and all(x == v[0] for x in v)


def test_solve_in_span_examples():
    assert solve_in_span([[1, 0]], [5, 0], Q) == [5]
    assert solve_in_span([[1, 0]], [0, 1], Q) is None
    assert solve_in_span([[1, 1], [1, -1]], [0, 2], F5) == [Fp(1, 5), Fp(4, 5)]
    with pytest.raises(DimensionMismatch):
        solve_in_span([[1, 0], [1]], [1, 0], Q)


small = st.integers(-6, 6)


@st.composite
def matrices(draw, field=Q):
    r = draw(st.integers(0, 5))
    c = draw(st.integers(1, 5))
    rows = [[field(draw(small)) for _ in range(c)] for _ in range(r)]
    return Matrix.from_rows(rows, field, cols=c)


@given(matrices())
def test_transform_times_matrix_is_reduced(m):
    r, piv, t = rref(m)
    if m.rows:
        assert (t @ m).to_rows() == r.to_rows()
    assert piv == sorted(set(piv))


@given(matrices())
def test_rank_nullity(m):
    assert rank(m) == len(rref(m)[1]) == m.cols - len(kernel_basis(m))


@given(matrices(F5))
def test_kernel_vectors_annihilate(m):
    for v in kernel_basis(m):
        assert all(x == 0 for x in m.apply(v))


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4), st.lists(small, min_size=4, max_size=4))
def test_solve_in_span_reconstructs(vectors, coeffs):
    target = [sum(c * v[i] for c, v in zip(coeffs, vectors)) for i in range(3)]
    sol = solve_in_span(vectors, target, Q)
    assert sol is not None
    assert [sum(c * v[i] for c, v in zip(sol, vectors)) for i in range(3)] == target


@given(st.lists(st.lists(small, min_size=4, max_size=4), max_size=6))
def test_echelon_span_matches_rank(rows):
    span = EchelonSpan(4, Q)
    for r in rows:
        span.add([Q(x) for x in r])
    m = Matrix.from_rows(rows, Q, cols=4) if rows else Matrix.zeros(0, 4, Q)
    assert len(span) == rank(m)
