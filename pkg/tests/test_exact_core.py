from fractions import Fraction

import gmpy2
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from nambu_lab.exact_core import (
    Echelon,
    KernelSolver,
    LinearForm,
    SparseMatrix,
    as_rational,
    axpy,
    canonical_basis,
    dot,
    in_span,
    matvec,
    nullspace,
    rank,
    solve_linear,
)

small = st.integers(-4, 4)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[draw(small) for _ in range(c)] for _ in range(r)], c


def sparse_rows(dense):
    return [{j: Fraction(x) for j, x in enumerate(row) if x} for row in dense]


def as_dense(vec, n):
    return [vec.get(j, 0) for j in range(n)]


@given(matrices())
def test_rank_matches_sympy(mc):
    dense, c = mc
    expect = sympy.Matrix(dense).rank() if dense else 0
    assert rank(sparse_rows(dense)) == expect


@given(matrices())
def test_nullspace_is_the_sympy_free_variable_basis(mc):
    dense, c = mc
    ours = nullspace(SparseMatrix.from_dense(dense) if dense else SparseMatrix([], range(c)))
    ref = (sympy.Matrix(dense) if dense else sympy.zeros(0, c)).nullspace()
    assert [as_dense(v, c) for v in ours] == [[Fraction(int(x.p), int(x.q)) for x in v] for v in ref]


@given(matrices())
def test_kernel_solver_agrees_with_nullspace(mc):
    dense, c = mc
    ks = KernelSolver(list(range(c)))
    for row in sparse_rows(dense):
        ks.add(row)
    assert ks.kernel() == nullspace(SparseMatrix(sparse_rows(dense), range(c)))
    assert ks.rank == rank(sparse_rows(dense))


@given(matrices(), st.lists(small, min_size=6, max_size=6))
def test_solve_linear_solves_or_certifies_inconsistency(mc, rhs):
    dense, c = mc
    rows = sparse_rows(dense)
    eqs = list(zip(rows, rhs))
    sol = solve_linear(eqs, list(range(c)))
    m = sympy.Matrix(dense) if dense else sympy.zeros(0, c)
    b = sympy.Matrix(rhs[: len(dense)])
    consistent = m.rank() == m.row_join(b).rank() if dense else True
    if sol is None:
        assert not consistent
    else:
        assert consistent
        assert all(dot(r, sol) == y for r, y in eqs)


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=4), st.lists(small, min_size=4, max_size=4))
def test_in_span_coordinates_reconstruct(basis_dense, coeffs):
    basis = canonical_basis(sparse_rows(basis_dense), list(range(4)))
    v: dict = {}
    for b, c in zip(basis, coeffs):
        axpy(v, c, b)
    co = in_span(v, basis)
    assert co is not None
    back: dict = {}
    for b, c in zip(basis, co):
        axpy(back, c, b)
    assert back == {k: x for k, x in v.items() if x}


def test_in_span_rejects_outside_vector():
    assert in_span({0: 1}, [{1: 1}, {2: 1}]) is None
    assert in_span({}, []) == []


def test_canonical_basis_is_independent_of_input_order():
    vs = [{0: 1, 1: 2}, {1: 1, 2: 1}, {0: 1, 1: 3, 2: 1}]
    assert canonical_basis(vs, [0, 1, 2]) == canonical_basis(vs[::-1], [0, 1, 2])
    assert len(canonical_basis(vs, [0, 1, 2])) == 2


def test_echelon_reduce_reports_span_membership():
    e = Echelon()
    e.add({0: 2, 1: 1})
    e.add({1: 1, 2: 1})
    assert not e.reduce({0: 2, 1: 2, 2: 1})
    assert e.reduce({2: 1})


def test_as_rational_coercions():
    assert as_rational("-3/4") == Fraction(-3, 4)
    assert as_rational(gmpy2.mpq(5, 6)) == Fraction(5, 6)
    assert as_rational(gmpy2.mpz(7)) == 7
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_linear_form_arithmetic():
    a, b = LinearForm({"x": 1}), LinearForm({"x": -1, "y": 2})
    assert a + b == {"y": 2}
    assert (a - a) == {}
    assert 0 + a == a
    assert 3 * b == {"x": -3, "y": 6}
    assert b / 2 == {"x": Fraction(-1, 2), "y": 1}
    with pytest.raises(TypeError):
        a * b


def test_sparse_matrix_rejects_undeclared_columns():
    with pytest.raises(ValueError):
        SparseMatrix([{5: 1}], [0, 1])
    m = SparseMatrix.from_dense([[1, 2], [0, 3]])
    assert matvec(m, {0: 1, 1: 1}) == [3, 3]


@settings(max_examples=30)
@given(matrices(8, 5))
def test_kernel_vectors_are_annihilated(mc):
    dense, c = mc
    rows = sparse_rows(dense)
    for v in nullspace(SparseMatrix(rows, range(c))):
        assert all(dot(r, v) == 0 for r in rows)
