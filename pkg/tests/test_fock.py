"""Canonical heads, grading, slices, and the charge shift map."""

import pytest

from qfock.basis import encode, vadd_into
from qfock.fock import (
    FockVector,
    basis_heads,
    canonical,
    degree_split,
    fadd_into,
    from_head,
    head_degree,
    pad_to,
    psi_finite,
    psi_inf,
    psi_inf_inv,
    shift_momentum,
    to_slice,
    unshift_momentum,
    vacuum,
    weight_above_vacuum,
)
from qfock.qlaurent import ScalarQ
from qfock.wedge import straighten

RANKS = [(2, 1), (1, 2), (2, 2), (3, 2)]


def one(N):
    return ScalarQ.one(N)


def test_vacuum_and_canonical_trim():
    for N, L in RANKS:
        v = vacuum(0, N)
        assert v.terms == {(): one(N)}
        # u_M wedge |M-1> is |M> again
        assert from_head(0, {(0,): one(N)}) == v
        assert from_head(3, {(3, 2, 1): one(N)}) == vacuum(3, N)
        # a head at or below its tail start dies
        assert not from_head(0, {(-1,): one(N)})
        assert not from_head(0, {(5, -2): one(N)})
        assert canonical(0, (5, -2)) is None
        assert canonical(0, (5, -1, -2)) == (5,)


def slice_dimension(N, L, M, d):
    # independent count: ordered words of length s + d*NL whose letters
    # never exceed the vacuum's loop-degree budget, ending at budget 0.
    # Unlike the head enumerator this window admits letters below the
    # vacuum continuation inside the final block.
    from qfock.basis import decode, encode

    n = M % (N * L) + d * N * L
    if n == 0:
        return 1 if d == 0 else 0
    mo = [decode(M - i, N, L)[2] for i in range(n)]

    def rec(i, prev, dleft):
        if i == n:
            return 1 if dleft == 0 else 0
        top = encode(N, 1, mo[i] - dleft, N, L)
        bottom = encode(1, L, mo[i], N, L)
        total = 0
        for k in range(min(prev - 1, top), bottom - 1, -1):
            c = mo[i] - decode(k, N, L)[2]
            if 0 <= c <= dleft:
                total += rec(i + 1, k, dleft - c)
        return total

    return rec(0, 10**9, d)


def test_degree_components_match_slice_dimensions():
    for N, L in RANKS:
        for M in (0, 1, -3):
            for d in range(0, 3):
                heads = basis_heads(M, d, N, L)
                assert len(heads) == slice_dimension(N, L, M, d), (N, L, M, d)
                assert len(set(heads)) == len(heads)
                for h in heads:
                    assert head_degree(M, h, N, L) == d
                    assert canonical(M, h) == h
    # spot checks one degree deeper at the smallest ranks
    for N, L in [(2, 1), (1, 2)]:
        for M in (0, 1):
            assert len(basis_heads(M, 3, N, L)) == slice_dimension(N, L, M, 3)


def test_degree_split_and_weight_homogeneity():
    N, L = 2, 2
    v = FockVector(0, {(4,): one(N), (2, 1): one(N)})
    parts = degree_split(v, N, L)
    assert set(parts) == {1, 2}
    assert parts[1].terms == {(4,): one(N)}
    from qfock.basis import AffineWeight
    assert weight_above_vacuum(vacuum(0, N), N, L) == AffineWeight.zero(N, L)
    with pytest.raises(ValueError):
        weight_above_vacuum(FockVector(0, {(4,): one(N), (1,): one(N)}), N, L)


def test_slice_round_trip():
    for N, L in RANKS:
        for M in (0, 2):
            for d in (0, 1, 2):
                for h in basis_heads(M, d, N, L):
                    fv = FockVector(M, {h: one(N)})
                    n, sl = to_slice(fv, d, N, L)
                    assert n == M % (N * L) + d * N * L
                    assert all(len(w) == n for w in sl)
                    assert from_head(M, sl) == fv
    with pytest.raises(ValueError):
        to_slice(FockVector(0, {(8,): one(2)}), 0, 2, 2)


def test_padding_is_vacuum_segment_concatenation():
    N, L = 3, 2
    w = (7, 2)
    assert pad_to(0, w, 8) == pad_to(0, pad_to(0, w, 5), 8)
    assert pad_to(0, w, 4) == (7, 2, -2, -3)
    with pytest.raises(ValueError):
        pad_to(0, w, 1)


def test_momentum_rotation_is_a_bijection():
    for N, L in RANKS:
        window = range(-4 * N * L, 4 * N * L)
        img = [shift_momentum(k, N, L) for k in window]
        assert len(set(img)) == len(img)
        for k in window:
            assert unshift_momentum(shift_momentum(k, N, L), N, L) == k


def test_rotation_descends_to_the_wedge():
    # mapping letters then straightening must agree with straightening
    # first: the rotation is well defined on the quotient
    for N, L in RANKS:
        words = [
            (0, 3),
            (-1, -1),
            (2, 0, -5),
            (-2, 4, 1),
            (1, 2, 3),
        ]
        for w in words:
            lhs = psi_finite(straighten(w, N, L), N, L)
            rhs = psi_finite({w: one(N)}, N, L)
            assert lhs == rhs, (N, L, w)


def psi_inf_windowed(fv, N, L, extra):
    # same construction as psi_inf but over a deeper vacuum
    NL = N * L
    out = FockVector(fv.M + L)
    for word, c in fv.terms.items():
        r = len(word)
        n = r + ((fv.M - r) % NL) + extra * NL
        m = (n - fv.M) // NL
        padded = pad_to(fv.M, word, n)
        block = tuple(encode(1, b, m - 1, N, L) for b in range(1, L + 1))
        moved = tuple(shift_momentum(k, N, L) for k in padded)
        fadd_into(out, from_head(fv.M + L, straighten(moved + block, N, L)), c)
    return out


def test_shift_map_presentation_independence():
    for N, L in RANKS:
        for M in (0, 1, -2):
            for d in (0, 1, 2):
                for h in basis_heads(M, d, N, L):
                    fv = FockVector(M, {h: one(N)})
                    assert psi_inf(fv, N, L) == psi_inf_windowed(fv, N, L, 1)


def test_shift_map_round_trip():
    for N, L in RANKS:
        for M in (0, 2):
            for d in (0, 1, 2):
                for h in basis_heads(M, d, N, L):
                    fv = FockVector(M, {h: one(N)})
                    im = psi_inf(fv, N, L)
                    assert im.M == M + L
                    assert psi_inf_inv(im, N, L) == fv, (N, L, M, h)


def test_shift_map_frozen_vacuum_images():
    # charge-0 vacuum: the spliced lattice lines sit at loop degree -1
    N, L = 3, 2
    im = psi_inf(vacuum(0, N), N, L)
    assert im.M == 2
    assert im.terms == {(4,): one(N)}
    # the full spliced head before trimming is (4, 1) = encode(1, b, -1)
    assert tuple(encode(1, b, -1, N, L) for b in (1, 2)) == (4, 1)
    N, L = 2, 1
    im = psi_inf(vacuum(0, N), N, L)
    assert im.M == 1
    assert im.terms == {(): one(N)}


def test_json_round_trippable_shape():
    N, L = 2, 2
    v = from_head(0, {(4, 1): one(N)})
    js = v.to_json()
    assert js["M"] == 0
    assert js["terms"] == [{"head": [4, 1], "coeff": ScalarQ.one(N).to_json()}]
