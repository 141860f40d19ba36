"""Momentum codec, ordering and weights for the spin-lattice basis.

A basis line u_k of the level-(1,1) evaluation space is indexed by an
integer momentum k.  The codec unpacks k into (eps, a, m) with
1 <= eps <= N (vector slot), 1 <= a <= L (lattice slot), m in Z
(loop degree), glued by k = eps - N*(a + L*m).  Larger k means earlier
factor in a normally ordered word; the order must compare (m, a, -eps)
lexicographically, which the codec makes automatic.

Weights live in the direct sum of two affine weight lattices (one of
rank N, one of rank L) plus a shared loop grading; AffineWeight stores
the fundamental-weight coordinates on both sides and the loop degree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .qlaurent import ScalarQ


def decode(k, N, L):
    """Momentum -> (eps, a, m) with 1 <= eps <= N and 1 <= a <= L."""
    eps = (k - 1) % N + 1
    rem = (eps - k) // N
    a = (rem - 1) % L + 1
    m = (rem - a) // L
    return eps, a, m


def encode(eps, a, m, N, L):
    if not 1 <= eps <= N:
        raise ValueError(f"eps={eps} out of range 1..{N}")
    if not 1 <= a <= L:
        raise ValueError(f"a={a} out of range 1..{L}")
    return eps - N * (a + L * m)


def sort_key(k, N, L):
    """Key realizing the basis order: k <= l iff key(k) >= key(l) lex."""
    eps, a, m = decode(k, N, L)
    return (m, a, -eps)


@dataclass(frozen=True)
class AffineWeight:
    """Fundamental-weight coordinates on both affine sides plus loop degree.

    lamN[i] is the coefficient of the i-th fundamental weight of the
    rank-N side (index mod N, so lamN[0] pairs with the affine node),
    lamL likewise on the rank-L side, and delta counts the shared loop
    grading.
    """

    lamN: tuple
    lamL: tuple
    delta: int

    @classmethod
    def zero(cls, N, L):
        return cls((0,) * N, (0,) * L, 0)

    def __add__(self, other):
        return AffineWeight(
            tuple(x + y for x, y in zip(self.lamN, other.lamN)),
            tuple(x + y for x, y in zip(self.lamL, other.lamL)),
            self.delta + other.delta,
        )

    def __sub__(self, other):
        return AffineWeight(
            tuple(x - y for x, y in zip(self.lamN, other.lamN)),
            tuple(x - y for x, y in zip(self.lamL, other.lamL)),
            self.delta - other.delta,
        )

    def __neg__(self):
        return AffineWeight(
            tuple(-x for x in self.lamN), tuple(-x for x in self.lamL), -self.delta
        )


def weight_of_momentum(k, N, L):
    """Weight of the basis line u_k, loop degree included."""
    eps, a, m = decode(k, N, L)
    lamN = [0] * N
    lamN[eps % N] += 1
    lamN[(eps - 1) % N] -= 1
    lamL = [0] * L
    lamL[(L - a + 1) % L] += 1
    lamL[(L - a) % L] -= 1
    return AffineWeight(tuple(lamN), tuple(lamL), m)


# -- sparse vectors ---------------------------------------------------
#
# Vectors over ScalarQ are plain dicts {key: ScalarQ} with no explicit
# zeros.  Keys are arbitrary hashables (tensor monomials, wedge words,
# heads).  The helpers below are the only mutation points.


def vadd_into(dst, src, coeff=None):
    """dst += coeff * src (coeff None means 1); returns dst."""
    for key, c in src.items():
        v = c if coeff is None else coeff * c
        s = dst.get(key)
        s = v if s is None else s + v
        if s:
            dst[key] = s
        else:
            dst.pop(key, None)
    return dst


def vscale(coeff, vec):
    if isinstance(coeff, int) and coeff == 1:
        return dict(vec)
    out = {}
    for key, c in vec.items():
        s = coeff * c
        if s:
            out[key] = s
    return out


def vsub(u, v):
    out = dict(u)
    return vadd_into(out, {k: -c for k, c in v.items()})


def veq(u, v):
    return not vsub(u, v)


def vapply(op, vec):
    """Apply a linear operator given termwise: op(key) -> {key: ScalarQ}."""
    out = {}
    for key, c in vec.items():
        vadd_into(out, op(key), c)
    return out


def single(key, coeff):
    return {key: coeff} if coeff else {}


def vpretty(vec, key_fmt=str):
    if not vec:
        return "0"
    parts = []
    for key in sorted(vec):
        parts.append(f"({vec[key].text()}) {key_fmt(key)}")
    return " + ".join(parts)


def vjson(vec, key_fmt):
    return [{"key": key_fmt(key), "coeff": vec[key].to_json()} for key in sorted(vec)]
