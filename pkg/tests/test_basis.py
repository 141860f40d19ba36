from hypothesis import given, strategies as st

from qfock.basis import (
    AffineWeight,
    decode,
    encode,
    sort_key,
    weight_of_momentum,
)


@given(st.integers(-200, 200), st.integers(1, 5), st.integers(1, 5))
def test_codec_roundtrip(k, N, L):
    eps, a, m = decode(k, N, L)
    assert 1 <= eps <= N and 1 <= a <= L
    assert encode(eps, a, m, N, L) == k


def test_codec_frozen():
    # N=3, L=2: k=0 -> top vector slot of the (a=1, m=0) site
    assert decode(0, 3, 2) == (3, 1, 0)
    assert decode(1, 3, 2) == (1, 2, -1)
    assert decode(4, 3, 2) == (1, 1, -1)
    assert decode(-3, 3, 2) == (3, 2, 0)
    assert decode(-6, 3, 2) == (3, 1, 1)
    assert encode(1, 1, 1, 3, 2) == -8


def test_order_blocks():
    # the sort key is monotone: ascending key means descending momentum
    N, L = 3, 2
    ks = sorted(range(-12, 13), key=lambda k: sort_key(k, N, L))
    assert ks == sorted(range(-12, 13), reverse=True)


@given(st.integers(-60, 60), st.integers(-60, 60))
def test_order_matches_integers(k, l):
    # the lex order on (m, a, -eps) is the reverse integer order
    N, L = 2, 3
    assert (k <= l) == (sort_key(k, N, L) >= sort_key(l, N, L))


def test_weight_frozen():
    N, L = 3, 2
    # u_1 = e_1 x v_1 at loop degree 0
    w = weight_of_momentum(1, N, L)
    assert w.lamN == (-1, 1, 0)
    assert w.lamL == (-1, 1)
    assert w.delta == -1
    # wrapping: eps = N bumps the affine node on the rank-N side
    w0 = weight_of_momentum(0, N, L)
    assert w0.lamN == (1, 0, -1)
    assert w0.lamL == (1, -1)
    # loop degree tracks m, which grows as the momentum drops
    assert weight_of_momentum(-6, N, L).delta == 1


def test_weight_sum_telescopes():
    # over a full block of N*L consecutive momenta the finite parts cancel
    N, L = 3, 2
    total = AffineWeight.zero(N, L)
    for k in range(-5, 1):
        total = total + weight_of_momentum(k, N, L)
    assert total.lamN == (0, 0, 0)
    assert total.lamL == (0, 0)
