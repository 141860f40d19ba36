import random

import pytest

from qfock.basis import vadd_into, vscale
from qfock.hecke import (
    HeckeParams,
    apply_diag1,
    apply_s,
    apply_tc,
    apply_tc_inv,
    apply_tc_literal,
    apply_ts,
    apply_ttilde,
    apply_x,
    apply_y,
    bL_invariance_check,
    bL_params,
    divide_z_difference,
    mono,
    verify_toroidal_hecke,
)
from qfock.qlaurent import NotDivisible, ScalarQ


def one(N=2):
    return ScalarQ.one(N)


def q(k, N=2):
    return ScalarQ.q_power(N, k)


def veq(u, v):
    d = dict(u)
    vadd_into(d, {k: -c for k, c in v.items()})
    return not d


def test_ts_three_cases():
    N = 2
    base = mono([0, 0], [1, 1], [1, 1])
    assert apply_ts({base: one()}, 1, N) == {base: q(2)}
    up = mono([0, 0], [1, 1], [1, 2])
    dn = mono([0, 0], [1, 1], [2, 1])
    assert apply_ts({up: one()}, 1, N) == {dn: q(1)}
    got = apply_ts({dn: one()}, 1, N)
    assert got == {up: q(1), dn: q(2) - 1}


def test_tc_symmetric_monomial_is_minus_one_eigenvector():
    N = 2
    for m in (-1, 0, 2):
        key = mono([m, m], [1, 1])
        assert apply_tc({key: one()}, 1, N) == {key: -one()}
        assert apply_tc_inv({key: one()}, 1, N) == {key: -one()}


def test_tc_total_degree_and_hull_preserved():
    N, L = 3, 2
    rng = random.Random(5)
    for _ in range(40):
        m = (rng.randint(-2, 2), rng.randint(-2, 2))
        a = (rng.randint(1, L), rng.randint(1, L))
        key = mono(m, a)
        for out_key in apply_tc({key: one(N)}, 1, N):
            assert sum(out_key[0]) == sum(m)
            assert min(out_key[0]) >= min(m)
            assert max(out_key[0]) <= max(m)


def test_tc_matches_literal_oracle():
    rng = random.Random(11)
    for N, L in ((1, 1), (2, 1), (1, 2), (2, 2), (3, 2)):
        for _ in range(25):
            key = mono(
                (rng.randint(-2, 2), rng.randint(-2, 2)),
                (rng.randint(1, L), rng.randint(1, L)),
            )
            v = {key: one(N)}
            assert veq(apply_tc(v, 1, N), apply_tc_literal(v, 1, N))


def test_divide_z_difference_alarm():
    N = 2
    # z1 is not divisible by z1 - z2
    v = {mono([1, 0], [1, 1]): one()}
    with pytest.raises(NotDivisible):
        divide_z_difference(v, 1, N)
    # z1 - z2 is
    v = {mono([1, 0], [1, 1]): one(), mono([0, 1], [1, 1]): -one()}
    assert divide_z_difference(v, 1, N) == {mono([0, 0], [1, 1]): one()}


def test_ttilde_roundtrip():
    N = 2
    rng = random.Random(3)
    for _ in range(20):
        key = mono(
            (rng.randint(-2, 2), rng.randint(-2, 2)),
            (rng.randint(1, 2), rng.randint(1, 2)),
        )
        v = {key: one()}
        assert veq(apply_ttilde(apply_ttilde(v, 1, N), 1, N, inverse=True), v)


def test_y_single_site_frozen():
    # n=1: Y_1 = p^m q^{nu(L+1-a)}
    params = HeckeParams(N=2, L=2, p_exp=-4, nu=(-2, 0))
    key = mono([3], [1])
    got = apply_y({key: one()}, 1, params)
    assert got == {key: q(-4 * 3 + 0)}  # a=1 -> nu(2) = 0
    key = mono([-1], [2])
    got = apply_y({key: one()}, 1, params)
    assert got == {key: q(4 - 2)}  # a=2 -> nu(1) = -2


def test_y_ttilde_exchange_n2():
    # Ttilde Y_1 Ttilde = Y_2 at n=2, any parameters
    params = HeckeParams(N=2, L=2, p_exp=-4, nu=(-2, 0))
    rng = random.Random(7)
    for _ in range(10):
        key = mono(
            (rng.randint(-1, 1), rng.randint(-1, 1)),
            (rng.randint(1, 2), rng.randint(1, 2)),
        )
        v = {key: one()}
        lhs = apply_ttilde(
            apply_y(apply_ttilde(v, 1, 2), 1, params), 1, 2
        )
        assert veq(lhs, apply_y(v, 2, params))


def test_toroidal_hecke_suite_n2():
    params = HeckeParams(N=2, L=2, p_exp=-4, nu=(-2, 0))
    rep = verify_toroidal_hecke(params, 2, seed=1, samples=12)
    assert rep.ok, rep.failing()


def test_toroidal_hecke_suite_any_parameters():
    # the defining relations hold for every (p, nu); parameter
    # corruptions are caught by the invariance check, not here
    params = HeckeParams(N=2, L=2, p_exp=0, nu=(5, -3), wrong_nu=True)
    rep = verify_toroidal_hecke(params, 2, seed=2, samples=6)
    assert rep.ok, rep.failing()


def test_x_and_s_and_diag():
    params = HeckeParams(N=2, L=2, p_exp=-4, nu=(-2, 0))
    key = mono([1, 2], [1, 2])
    assert apply_x({key: one()}, 1) == {mono([2, 2], [1, 2]): one()}
    assert apply_s({key: one()}, 1) == {mono([2, 1], [2, 1]): one()}
    assert apply_diag1({key: one()}, params) == {key: q(-4 + 0)}


def test_bL_params_values():
    # nu(a) = -chi(a) - 2(L - a)
    assert bL_params(2, 2, (0, 0)).nu == (-2, 0)
    assert bL_params(2, 2, (0, 0)).p_exp == -4
    assert bL_params(3, 2, (1, -1)).nu == (-3, 1)
    assert bL_params(2, 3, (0, 0, 0)).nu == (-4, -2, 0)


def test_borel_invariance_holds_at_tuned_parameters():
    for chi in [(0, 0), (1, 0)]:
        rep = bL_invariance_check(bL_params(2, 2, chi), chi, 2,
                                  window=3, seed=0, samples=2)
        assert rep.ok, (chi, rep.failing())
        assert rep.info["canonical"]


def test_borel_invariance_negative_controls():
    # only the Cherednik operators see (p, nu); X and Tc commute with
    # the lattice action outright
    chi = (0, 0)
    rep = bL_invariance_check(bL_params(2, 2, chi, p_exp=0), chi, 2,
                              window=3, seed=0, samples=2)
    assert not rep.ok
    assert rep.failing() == ["y_stays_in_subspace"]

    rep = bL_invariance_check(bL_params(2, 2, chi, wrong_nu=True), chi, 2,
                              window=3, seed=0, samples=2)
    assert not rep.ok
    assert rep.failing() == ["y_stays_in_subspace"]
