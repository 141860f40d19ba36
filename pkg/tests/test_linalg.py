import pytest
from hypothesis import given, settings, strategies as st

from qfock.linalg import (
    Frac,
    LinearSolveError,
    bareiss_echelon,
    in_span,
    kernel_basis,
    poly_gcd,
    rank,
    reduce_against,
    solve_unique,
    strip_content,
)
from qfock.qlaurent import NotDivisible, ScalarQ


N = 2


def q(k):
    return ScalarQ.q_power(N, k)


def one():
    return ScalarQ.one(N)


def zero():
    return ScalarQ.zero(N)


def test_poly_gcd_frozen():
    a = q(2) - one()          # (q-1)(q+1)
    b = q(1) + one()
    assert poly_gcd(a, b) == q(1) + one()
    # canonical form scales the lowest coefficient to 1
    assert poly_gcd(a, q(1) - one()) == one() - q(1)
    assert poly_gcd(q(3), q(5)).is_one()
    # gcd ignores units: q^2 - q and q - 1 share (q - 1)
    assert poly_gcd(q(2) - q(1), q(1) - one()) == one() - q(1)


def test_frac_reduction():
    f = Frac(q(2) - one(), q(1) - one())
    assert f.as_scalar() == q(1) + one()
    g = Frac(one(), q(1) - one())
    with pytest.raises(NotDivisible):
        (g * Frac(q(1) + one())).as_scalar()
    # (1/(q-1)) * (q-1) clears
    assert (g * Frac(q(1) - one())).as_scalar() == one()


def test_rank_and_membership():
    rows = [
        [one(), q(1), zero()],
        [q(1), q(2), zero()],          # q * row0
        [zero(), one(), one()],
    ]
    assert rank(rows) == 2
    ech, piv = bareiss_echelon(rows)
    assert in_span(ech, piv, [one(), q(1), zero()])
    assert in_span(ech, piv, [one(), q(1) + one(), one()])
    # a vector outside the span reduces to something nonzero
    assert not in_span(ech, piv, [one(), zero(), zero()])


def test_kernel_frozen():
    # single relation x0 + q x1 = 0 in 2 unknowns
    rows = [[one(), q(1)]]
    (vec,) = kernel_basis(rows, 2)
    assert vec[0] + q(1) * vec[1] == zero()
    ech, piv = bareiss_echelon(rows)
    assert any(reduce_against(ech, piv, [one(), one()]))


def test_kernel_dimension():
    rows = [
        [one(), one(), one(), one()],
        [one(), q(2), one(), q(2)],
    ]
    basis = kernel_basis(rows, 4)
    assert len(basis) == 2
    for vec in basis:
        for row in rows:
            s = zero()
            for a, x in zip(row, vec):
                s = s + a * x
            assert s.is_zero()


def test_solve_unique():
    rows = [[q(1), one()], [zero(), q(1) - one()]]
    rhs = [q(2) + q(1), q(2) - q(1)]
    x = solve_unique(rows, rhs, 2)
    assert x == [q(1), q(1)]
    with pytest.raises(LinearSolveError):
        solve_unique([[one(), one()]], [one()], 2)
    with pytest.raises(LinearSolveError):
        solve_unique([[one(), one()], [one(), one()]], [one(), q(1)], 2)


def test_strip_content():
    vec = [2 * q(3) - 2 * q(1), 4 * q(2)]
    out = strip_content(vec)
    assert out[0] == q(2) - one()
    assert out[1] == 2 * q(1)


small = st.integers(-3, 3)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=4))
def test_kernel_orthogonality_property(rows_int):
    rows = [[ScalarQ(N, {1: a, 0: b}), ScalarQ(N, {0: c}), ScalarQ.q_power(N, a)]
            for a, b, c in rows_int]
    basis = kernel_basis(rows, 3)
    ech, piv = bareiss_echelon(rows, 3)
    assert len(basis) == 3 - len(piv)
    for vec in basis:
        for row in rows:
            s = zero()
            for a, x in zip(row, vec):
                s = s + a * x
            assert s.is_zero()
