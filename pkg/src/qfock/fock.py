"""Semi-infinite wedges with finite canonical data.

A charge-M Fock vector is a finite combination of heads.  A head
(k_1, ..., k_r) stands for the semi-infinite word that continues as
k_{r+i} = M - r - i + 1 forever.  Canonical heads are strictly
decreasing, stay strictly above their tail (k_r > M - r), and carry no
trailing letters equal to the vacuum continuation, so two vectors are
equal exactly when their term dicts are equal.

The degree of a head is the total drop in loop degrees against the
vacuum word; it is a non-negative integer, zero only on the vacuum.
Degree-d components embed in finite wedges of length s + l*NL (charge
mod NL = s, any l >= d) by padding with vacuum letters, and that
padding map is a linear isomorphism onto the span of padded words, so
all Fock-level verification can run at a finite slice.
"""

from __future__ import annotations

from .basis import AffineWeight, decode, encode, vadd_into, weight_of_momentum
from .qlaurent import ScalarQ
from .wedge import straighten


class FockVector:
    """Finite combination of canonical heads at a fixed charge."""

    __slots__ = ("M", "terms")

    def __init__(self, M, terms=None):
        self.M = M
        self.terms = dict(terms or {})

    def __eq__(self, other):
        return (
            isinstance(other, FockVector)
            and self.M == other.M
            and self.terms == other.terms
        )

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return f"FockVector({self.M}, 0)"
        parts = [f"({c.text()})*{list(w)}" for w, c in sorted(self.terms.items())]
        return f"FockVector({self.M}, {' + '.join(parts)})"

    def map_terms(self, f):
        out = {}
        for word, c in self.terms.items():
            vadd_into(out, f(word, c))
        return FockVector(self.M, out)

    def scaled(self, coeff):
        return FockVector(
            self.M, {w: coeff * c for w, c in self.terms.items() if coeff * c}
        )

    def to_json(self):
        return {
            "M": self.M,
            "terms": [
                {"head": list(w), "coeff": c.to_json()}
                for w, c in sorted(self.terms.items())
            ],
        }


def vacuum(M, N):
    return FockVector(M, {(): ScalarQ.one(N)})


def canonical(M, word):
    """Trimmed head, or None when the word dies against its tail."""
    r = len(word)
    if word and word[-1] <= M - r:
        return None
    while word and word[-1] == M - len(word) + 1:
        word = word[:-1]
    return word


def from_head(M, head_vec):
    """Attach the charge-M tail to each normally ordered head word."""
    terms = {}
    for word, c in head_vec.items():
        w = canonical(M, word)
        if w is not None:
            vadd_into(terms, {w: c})
    return FockVector(M, terms)


def fadd_into(dst: FockVector, src: FockVector, coeff=None):
    if dst.M != src.M:
        raise ValueError(f"charge mismatch {dst.M} != {src.M}")
    vadd_into(dst.terms, src.terms, coeff)
    return dst


def fsub(u: FockVector, v: FockVector, N):
    out = FockVector(u.M, dict(u.terms))
    return fadd_into(out, v, ScalarQ.rational(N, -1))


def pad_to(M, word, n):
    if len(word) > n:
        raise ValueError(f"head of length {len(word)} exceeds window {n}")
    return word + tuple(M - i for i in range(len(word), n))


def head_degree(M, word, N, L):
    d = 0
    for i, k in enumerate(word):
        d += decode(M - i, N, L)[2] - decode(k, N, L)[2]
    return d


def degree_split(fv, N, L):
    """Homogeneous components, keyed by degree."""
    out = {}
    for word, c in fv.terms.items():
        d = head_degree(fv.M, word, N, L)
        out.setdefault(d, FockVector(fv.M)).terms[word] = c
    return out


def weight_above_vacuum(fv, N, L):
    """Common weight of all terms relative to the charge-M vacuum."""
    wt = None
    for word in fv.terms:
        w = AffineWeight.zero(N, L)
        for i, k in enumerate(word):
            w = w + weight_of_momentum(k, N, L) - weight_of_momentum(fv.M - i, N, L)
        if wt is None:
            wt = w
        elif wt != w:
            raise ValueError("inhomogeneous vector has no single weight")
    return wt if wt is not None else AffineWeight.zero(N, L)


def vacuum_weight(m, N, L):
    """Absolute weight of the charge -NLm vacuum."""
    lamN = [0] * N
    lamN[0] = L
    lamL = [0] * L
    lamL[0] = N
    return AffineWeight(tuple(lamN), tuple(lamL), N * L * m * (1 - m) // 2)


def to_slice(fv, l, N, L):
    """Present as a finite wedge of length (M mod NL) + l*NL.

    Requires l at least the top degree of the vector; the result pairs
    the window length with a word vector supported on padded heads.
    """
    NL = N * L
    s = fv.M % NL
    n = s + l * NL
    out = {}
    for word, c in fv.terms.items():
        if head_degree(fv.M, word, N, L) > l:
            raise ValueError("window parameter below vector degree")
        out[pad_to(fv.M, word, n)] = c
    return n, out


def basis_heads(M, d, N, L):
    """All canonical heads of charge M and degree exactly d.

    Letters stay strictly above the vacuum continuation; a letter in
    the same loop-degree block as its vacuum slot costs nothing, so a
    spent budget can still extend through the tail of a block.
    """
    heads = []

    def rec(pos, prev, dleft, acc):
        if dleft == 0:
            heads.append(tuple(acc))
        o = M - pos + 1
        mo = decode(o, N, L)[2]
        top = encode(N, 1, mo - dleft, N, L)
        for k in range(min(prev - 1, top), o, -1):
            c = mo - decode(k, N, L)[2]
            if c <= dleft:
                rec(pos + 1, k, dleft - c, acc + [k])

    rec(1, 10**9, d, [])
    return heads


# -- the charge shift map ----------------------------------------------


def shift_momentum(k, N, L):
    """Letterwise action of the spin rotation: slot eps -> eps + 1.

    Wraps eps = N to 1 at the cost of one loop degree, which on momenta
    reads k -> k + 1 - N + NL on the wrapping slot and k + 1 elsewhere.
    """
    eps = decode(k, N, L)[0]
    return k + 1 if eps < N else k + 1 - N + N * L


def unshift_momentum(k, N, L):
    eps = decode(k, N, L)[0]
    return k - 1 if eps > 1 else k - 1 + N - N * L


def psi_finite(vec, N, L, inverse=False):
    """The spin rotation on finite wedge vectors, re-straightened."""
    move = unshift_momentum if inverse else shift_momentum
    out = {}
    for word, c in vec.items():
        vadd_into(out, straighten([move(k, N, L) for k in word], N, L), c)
    return out


def psi_inf(fv, N, L):
    """Charge raising map F_M -> F_{M+L}.

    Presents each term over a vacuum at charge divisible by NL, rotates
    the head letterwise, and splices in the L new lattice lines just
    above that vacuum.
    """
    NL = N * L
    out = FockVector(fv.M + L)
    for word, c in fv.terms.items():
        r = len(word)
        n = r + ((fv.M - r) % NL)
        m = (n - fv.M) // NL
        padded = pad_to(fv.M, word, n)
        block = tuple(encode(1, b, m - 1, N, L) for b in range(1, L + 1))
        moved = tuple(shift_momentum(k, N, L) for k in padded)
        fadd_into(out, from_head(fv.M + L, straighten(moved + block, N, L)), c)
    return out


_PSI_TABLE = {}


def _psi_table(M, cap, N, L):
    """Source heads of charge M-L up to the degree cap, with images
    and image weights."""
    key = (M, N, L)
    layers = _PSI_TABLE.setdefault(key, [])
    one = ScalarQ.one(N)
    while len(layers) <= cap:
        d = len(layers)
        rows = []
        for h in basis_heads(M - L, d, N, L):
            im = psi_inf(FockVector(M - L, {h: one}), N, L)
            rows.append((h, im, weight_above_vacuum(im, N, L) if im else None))
        layers.append(rows)
    return [row for layer in layers[: cap + 1] for row in layer]


def _psi_lead_preimage(M, h, N, L):
    """Canonical charge-(M-L) head whose image leads at h, or None.

    The image of a head is a unit multiple of the word sorted from its
    letter multiset plus straightening spillover, so peeling that
    multiset (drop the spliced block, rotate back) inverts the lead.
    """
    NL = N * L
    r = len(h)
    n = max(0, r - L)
    n += (M - L - n) % NL
    while n + L < r:
        n += NL
    m = (n - (M - L)) // NL
    letters = list(pad_to(M, h, n + L))
    for b in range(1, L + 1):
        x = encode(1, b, m - 1, N, L)
        if x not in letters:
            return None
        letters.remove(x)
    letters = sorted((unshift_momentum(k, N, L) for k in letters), reverse=True)
    return canonical(M - L, tuple(letters))


def _psi_inv_table_solve(fv, N, L):
    # columns of another weight can never contribute, so solve each
    # weight component against its own thin slice of the table
    from .linalg import LinearSolveError, sparse_solve

    out = FockVector(fv.M - L)
    parts = {}
    for w, c in fv.terms.items():
        piece = FockVector(fv.M, {w: c})
        wt = weight_above_vacuum(piece, N, L)
        parts.setdefault(wt, FockVector(fv.M))
        fadd_into(parts[wt], piece)
    for wt, part in parts.items():
        top = max(head_degree(part.M, w, N, L) for w in part.terms)
        last = None
        for cap in range(top, top + 7):
            cols = [
                (h, im)
                for h, im, iwt in _psi_table(part.M, cap, N, L)
                if iwt == wt
            ]
            try:
                x = sparse_solve([im.terms for _, im in cols], part.terms, N)
            except LinearSolveError as exc:
                last = exc
                continue
            for (h, _), c in zip(cols, x):
                if c:
                    vadd_into(out.terms, {h: c})
            break
        else:
            raise LinearSolveError(
                f"shift map inversion did not close below degree cap {top + 6}"
            ) from last
    return out


def psi_inf_inv(fv, N, L):
    """Inverse of psi_inf.

    Greedy lead peeling: subtract the unique source head whose image
    leads at a chosen remainder word, which always divides out by a
    unit.  A step budget guards against peeling stalls, falling back
    to an exact sparse solve over a degree-capped source table.
    """
    from .qlaurent import NotDivisible

    if not fv.terms:
        return FockVector(fv.M - L)
    one = ScalarQ.one(N)
    rem = dict(fv.terms)
    out = FockVector(fv.M - L)
    steps = 0
    budget = 200 + 60 * len(rem)
    while rem:
        steps += 1
        progressed = False
        if steps <= budget:
            for h in sorted(rem):
                u = _psi_lead_preimage(fv.M, h, N, L)
                if u is None:
                    continue
                im = psi_inf(FockVector(fv.M - L, {u: one}), N, L)
                c = im.terms.get(h)
                if c is None:
                    continue
                try:
                    alpha = rem[h].divide_exact(c)
                except NotDivisible:
                    continue
                vadd_into(out.terms, {u: alpha})
                vadd_into(rem, im.terms, -alpha)
                progressed = True
                break
        if not progressed:
            fadd_into(out, _psi_inv_table_solve(FockVector(fv.M, rem), N, L))
            return out
    return out
