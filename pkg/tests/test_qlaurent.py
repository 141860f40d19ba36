import pytest
from hypothesis import given, strategies as st

from qfock.qlaurent import (
    NotDivisible,
    ScalarMismatch,
    ScalarQ,
    parse_scalar,
    q_binom,
    q_factorial,
    q_int,
)


def q(k, n=2):
    return ScalarQ.q_power(n, k)


def test_basic_arithmetic_frozen():
    n = 2
    one = ScalarQ.one(n)
    assert (q(1) + one) * (q(1) - one) == q(2) - one
    assert (q(1) - q(-1)) * (q(1) + q(-1)) == q(2) - q(-2)
    assert q(3) * q(-3) == one
    assert (q(1) + one) ** 2 == q(2) + 2 * q(1) + one
    assert q(1) ** -2 == q(-2)
    assert (2 * q(1)) ** -1 == q(-1).divide_exact(2)


def test_fractional_powers():
    n = 3
    t = ScalarQ.t_power(n, 1)
    assert t ** (2 * n) == ScalarQ.q_power(n, 1)
    half = ScalarQ.t_power(n, n)  # q^(1/2)
    assert half * half == ScalarQ.q_power(n, 1)


def test_mismatch_guard():
    with pytest.raises(ScalarMismatch):
        ScalarQ.one(2) + ScalarQ.one(3)


def test_divide_exact_frozen():
    n = 2
    one = ScalarQ.one(n)
    assert q(2).divide_exact(q(3)) == q(-1)
    num = q(2) - one
    assert num.divide_exact(q(1) - one) == q(1) + one
    assert (q(4) - one).divide_exact(q(2) - one) == q(2) + one
    # q^4 - 1 divisible by q^2 + 1 as well
    assert (q(4) - one).divide_exact(q(2) + one) == q(2) - one
    with pytest.raises(NotDivisible):
        (q(1) + one).divide_exact(q(1) - one)
    with pytest.raises(ZeroDivisionError):
        one.divide_exact(ScalarQ.zero(n))


def test_eval_at_one():
    n = 2
    s = q(3) - 2 * q(1) + ScalarQ.rational(n, 5, 2)
    assert s.eval_at_one() * 2 == 3


def test_text_format():
    n = 2
    s = 3 * q(-1) + ScalarQ.one(n) - q(2)
    # at N=2 the exponent -1 of q prints as -1, not a fraction
    assert s.text() == "3*q^{-1} + 1 - q^{2}"
    half = ScalarQ.t_power(n, -n, 3) + ScalarQ.one(n) - q(2)
    assert half.text() == "3*q^{-1/2} + 1 - q^{2}"
    assert ScalarQ.zero(n).text() == "0"
    assert q(1).text() == "q"


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_text_roundtrip_monomials(a, b):
    n = 2
    s = ScalarQ.t_power(n, a, 3) + ScalarQ.t_power(n, b, -2)
    assert parse_scalar(n, s.text()) == s


def test_json_roundtrip():
    n = 3
    s = ScalarQ(n, {-3: 2, 0: 1, 7: -5})
    data = s.to_json()
    assert data[0] == {"num": 2, "den": 1, "exp2N": -3}
    assert ScalarQ.from_json(n, data) == s


scalars = st.builds(
    lambda d: ScalarQ(2, d),
    st.dictionaries(st.integers(-8, 8), st.integers(-5, 5), max_size=4),
)


@given(scalars, scalars, scalars)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    assert a + b == b + a
    assert a * b == b * a
    assert a - a == ScalarQ.zero(2)


@given(scalars, scalars)
def test_divide_exact_inverts_product(a, b):
    if b.is_zero():
        return
    assert (a * b).divide_exact(b) == a


def test_q_int_and_binom():
    n = 2
    assert q_int(n, 3) == q(2) + ScalarQ.one(n) + q(-2)
    assert q_int(n, -2) == -(q(1) + q(-1))
    assert q_int(n, 0).is_zero()
    assert q_factorial(n, 3) == q_int(n, 1) * q_int(n, 2) * q_int(n, 3)
    assert q_binom(n, 4, 2) == q(4) + q(2) + 2 * ScalarQ.one(n) + q(-2) + q(-4)
    assert q_binom(n, 3, 1) == q_int(n, 3)
    assert q_binom(n, 3, 5).is_zero()
    for m in range(6):
        for k in range(m + 1):
            assert q_binom(n, m, k).eval_at_one() == _choose(m, k)


def _choose(m, k):
    out = 1
    for i in range(k):
        out = out * (m - i) // (i + 1)
    return out
