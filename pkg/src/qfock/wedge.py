"""Straightening engine for q-deformed wedge words.

A wedge word is a tuple of momenta (k_1, ..., k_n).  Words whose
momenta strictly decrease are normally ordered and form a basis; any
other word is rewritten by the two-factor normal ordering rules, which
come in four families selected by how the decoded (eps, a) data of the
violating pair compare: plain antisymmetry when both agree, an
eps-exchange family when only a agrees, an a-exchange family when only
eps agrees, and a four-dimensional mixed family when both differ.  Each
family is a small matrix acting on a vector of candidate ordered pairs,
plus a tail of matrices M(t) walking the loop degrees inward; at equal
loop degrees certain entries are masked off.  The tables are transcribed
once here and validated by quotient_oracle, which rebuilds the defining
quotient (image of the difference between the lattice and spin exchange
operators) independently from the hecke module and checks the engine
kills exactly that image.

The engine rewrites the rightmost violation first and memoizes the
two-factor expansion keyed by relative data only, exploiting the
translation covariance of the rules (momentum shifts by multiples of
N*L commute with straightening; the fock module re-verifies this).
"""

from __future__ import annotations

from .basis import decode, encode, vadd_into, veq, weight_of_momentum
from .qlaurent import ScalarQ
from .report import Report


class StraighteningBudgetError(RuntimeError):
    """Rewriting exceeded its budget: the rule tables must be wrong."""


# -- matrix tables ------------------------------------------------------

_MATRIX_CACHE = {}


def _tables(N):
    """Leading matrices for the three nontrivial families, per N."""
    if N in _MATRIX_CACHE:
        return _MATRIX_CACHE[N]

    def q(k):
        return ScalarQ.q_power(N, k)

    gap = q(1) - q(-1)
    mx = [[q(0) * 0, -q(1)], [-q(1), q(2) - 1]]
    my = [[q(-2) - 1, -q(-1)], [-q(-1), q(0) * 0]]
    zero = ScalarQ.zero(N)
    mz = [
        [zero, zero, -gap, -q(0)],
        [zero, zero, -q(0), zero],
        [-gap, -q(0), gap * gap, gap],
        [-q(0), zero, gap, zero],
    ]
    _MATRIX_CACHE[N] = (mx, my, mz)
    return _MATRIX_CACHE[N]


def _mx_t(N, t):
    def q(k):
        return ScalarQ.q_power(N, k)

    c = q(2) - 1
    return [[c * q(2 * t - 2), -c * q(2 * t - 1)],
            [-c * q(2 * t - 1), c * q(2 * t)]]


def _my_t(N, t):
    def q(k):
        return ScalarQ.q_power(N, k)

    c = q(-2) - 1
    return [[c * q(-2 * t), -c * q(-2 * t + 1)],
            [-c * q(-2 * t + 1), c * q(-2 * t + 2)]]


def _mz_t(N, t):
    # every entry of the bracket matrix is exactly divisible by q^2 + 1
    def q(k):
        return ScalarQ.q_power(N, k)

    A = q(2 * t) - q(-2 * t)
    B = q(2 * t - 1) + q(-2 * t + 1)
    C = q(2 * t + 1) + q(-2 * t - 1)
    D = q(2 * t - 2) - q(-2 * t + 2)
    E = q(2 * t + 2) - q(-2 * t - 2)
    raw = [
        [A, B, -C, -A],
        [B, D, -A, -B],
        [-C, -A, E, C],
        [-A, -B, C, A],
    ]
    scale = q(2) - 1
    den = q(2) + 1
    return [[(scale * x).divide_exact(den) for x in row] for row in raw]


# -- two-factor rule ----------------------------------------------------

_PAIR_MEMO = {}


def _pair_terms(ek, ak, el, al, dm, N, L):
    """Relative expansion of the violating pair, loop degrees rel. to m2."""
    m1, m2 = dm, 0
    mx, my, mz = _tables(N)
    out = []

    if ak == al and ek == el:
        out.append((ScalarQ.rational(N, -1), (el, al, m2), (ek, ak, m1)))
        return out

    if ak == al:
        e1, e2 = max(ek, el), min(ek, el)
        row = 0 if ek == e1 else 1
        entries = lambda u1, u2: [((e1, ak, u1), (e2, ak, u2)),
                                  ((e2, ak, u1), (e1, ak, u2))]
        keep_eq = (0,)
        mats = lambda t: mx if t == 0 else _mx_t(N, t)
    elif ek == el:
        a1, a2 = max(ak, al), min(ak, al)
        row = 0 if ak == a1 else 1
        entries = lambda u1, u2: [((ek, a1, u1), (ek, a2, u2)),
                                  ((ek, a2, u1), (ek, a1, u2))]
        keep_eq = (1,)
        mats = lambda t: my if t == 0 else _my_t(N, t)
    else:
        e1, e2 = max(ek, el), min(ek, el)
        a1, a2 = max(ak, al), min(ak, al)
        row = {(e1, a1): 0, (e1, a2): 1, (e2, a1): 2, (e2, a2): 3}[(ek, ak)]
        entries = lambda u1, u2: [((e1, a1, u1), (e2, a2, u2)),
                                  ((e1, a2, u1), (e2, a1, u2)),
                                  ((e2, a1, u1), (e1, a2, u2)),
                                  ((e2, a2, u1), (e1, a1, u2))]
        keep_eq = (1, 3)
        mats = lambda t: mz if t == 0 else _mz_t(N, t)

    for t in range(0, (m1 - m2) // 2 + 1):
        u1, u2 = m2 + t, m1 - t
        mat_row = mats(t)[row]
        ent = entries(u1, u2)
        for col, coeff in enumerate(mat_row):
            if not coeff:
                continue
            if u1 == u2 and col not in keep_eq:
                continue
            out.append((coeff, ent[col][0], ent[col][1]))
    return out


def straighten_pair(k, l, N, L):
    """Normally ordered expansion of the length-2 word (k, l), k <= l."""
    if k > l:
        raise ValueError("straighten_pair expects k <= l")
    if k == l:
        return {}
    ek, ak, m1 = decode(k, N, L)
    el, al, m2 = decode(l, N, L)
    memo_key = (N, L, ek, ak, el, al, m1 - m2)
    rel = _PAIR_MEMO.get(memo_key)
    if rel is None:
        rel = _pair_terms(ek, ak, el, al, m1 - m2, N, L)
        _PAIR_MEMO[memo_key] = rel
    out = {}
    for coeff, (e1, a1, d1), (e2, a2, d2) in rel:
        word = (encode(e1, a1, m2 + d1, N, L), encode(e2, a2, m2 + d2, N, L))
        vadd_into(out, {word: coeff})
    return out


# -- the engine ---------------------------------------------------------


def _find_violation(word, rightmost=True):
    rng = range(len(word) - 2, -1, -1) if rightmost else range(len(word) - 1)
    for i in rng:
        if word[i] <= word[i + 1]:
            return i
    return None


def _budget(vec):
    total = 100
    for word in vec:
        n = len(word)
        inv = 0
        span = 0
        for i in range(n):
            for j in range(i + 1, n):
                if word[i] <= word[j]:
                    inv += 1
                    span = max(span, word[j] - word[i])
        if inv:
            total += 20 * n * n * (span + 1) * (inv + 1)
    return total


def straighten(vec_or_word, N, L, rightmost=True):
    """Rewrite to the normally ordered basis; accepts a word or a vector."""
    if isinstance(vec_or_word, dict):
        pending = {tuple(w): c for w, c in vec_or_word.items() if c}
    else:
        pending = {tuple(vec_or_word): ScalarQ.one(N)}
    budget = _budget(pending)
    done = {}
    expansions = 0
    while pending:
        word, coeff = pending.popitem()
        if not coeff:
            continue
        pos = _find_violation(word, rightmost)
        if pos is None:
            vadd_into(done, {word: coeff})
            continue
        expansions += 1
        if expansions > budget:
            raise StraighteningBudgetError(
                f"{expansions} pair expansions exceed budget {budget}"
            )
        for (k1, k2), c in straighten_pair(word[pos], word[pos + 1], N, L).items():
            new_word = word[:pos] + (k1, k2) + word[pos + 2:]
            s = pending.get(new_word)
            s = coeff * c if s is None else s + coeff * c
            if s:
                pending[new_word] = s
            else:
                pending.pop(new_word, None)
    return done


def word_weight(word, N, L):
    total = None
    for k in word:
        w = weight_of_momentum(k, N, L)
        total = w if total is None else total + w
    return total


# -- verification -------------------------------------------------------


def quotient_oracle(N, L, mwin=2, report_name=None):
    """Definitional oracle: the engine must kill Im(Tc - Ts) exactly.

    Builds the two-site exchange-difference image on a windowed monomial
    basis using the hecke module (independent transcription), pushes
    every image vector through straighten, and demands zero.  Also
    checks straighten fixes ordered words and that the q=1
    specialization of any straightened pair is minus the transposition.
    """
    from .hecke import apply_tc, apply_ts, mono

    from .linalg import rank_mod_p

    rep = Report(report_name or f"wedge-quotient N={N} L={L}",
                 info={"mwin": mwin})
    img = rep.new("image_straightens_to_zero")
    span = rep.new("image_spans_all_violating_words")
    fix = rep.new("straighten_fixes_ordered")
    qone = rep.new("q1_specialization_is_minus_swap")

    def to_words(tensor_vec):
        out = {}
        for (m, a, e), c in tensor_vec.items():
            word = tuple(encode(e[i], a[i], m[i], N, L) for i in range(len(m)))
            vadd_into(out, {word: c})
        return out

    ms = range(-mwin, mwin + 1)
    inner_images = []
    for m1 in ms:
        for m2 in ms:
            for a1 in range(1, L + 1):
                for a2 in range(1, L + 1):
                    for e1 in range(1, N + 1):
                        for e2 in range(1, N + 1):
                            key = mono((m1, m2), (a1, a2), (e1, e2))
                            v = {key: ScalarQ.one(N)}
                            diff = apply_tc(v, 1, N)
                            vadd_into(diff, apply_ts(v, 1, N),
                                      ScalarQ.rational(N, -1))
                            words = to_words(diff)
                            res = straighten(words, N, L)
                            img.record(not res, input=key, lhs=res)
                            if max(abs(m1), abs(m2)) <= 1:
                                inner_images.append(words)

    # the zero check above shows the image lies inside the span of the
    # rewrite relations; equality needs the rank to reach the number of
    # weakly increasing words on the inner loop window, one relation per
    # violating word
    K = 3 * N * L
    expected = K * (K + 1) // 2
    got = 0
    for p, t0 in ((1000003, 17), (999983, 29)):
        got = max(got, rank_mod_p(inner_images, p, t0))
        if got == expected:
            break
    span.record(got == expected, input=(N, L), lhs=got, rhs=expected)

    ordered_checked = 0
    for k1 in range(-2 * N * L, 2 * N * L):
        for k2 in range(k1 - N * L, k1):
            got = straighten((k1, k2), N, L)
            fix.record(got == {(k1, k2): ScalarQ.one(N)}, input=(k1, k2))
            ordered_checked += 1
            if ordered_checked > 200:
                break
        if ordered_checked > 200:
            break

    for k in range(-N * L - 2, N * L + 2):
        for l in range(k, k + 2 * N * L):
            got = straighten_pair(k, l, N, L)
            at_one = {}
            for word, c in got.items():
                val = c.eval_at_one()
                if val:
                    at_one[word] = val
            expect = {} if k == l else {(l, k): -1}
            qone.record(
                {w: v for w, v in at_one.items()} == expect, input=(k, l), lhs=at_one
            )
    return rep


def confluence_check(N, L, seed=0, samples=200, mwin=2, letters=3):
    """Strategy independence on sampled short words, plus invariants."""
    import random

    rng = random.Random(seed)
    rep = Report(f"confluence N={N} L={L}",
                 info={"seed": seed, "samples": samples, "mwin": mwin})
    agree = rep.new("leftmost_equals_rightmost")
    idem = rep.new("idempotent")
    homog = rep.new("weight_homogeneous")
    shift = rep.new("translation_covariant")

    lo, hi = -mwin * N * L, mwin * N * L
    step = N * L
    for _ in range(samples):
        word = tuple(rng.randint(lo, hi) for _ in range(letters))
        right = straighten(word, N, L, rightmost=True)
        left = straighten(word, N, L, rightmost=False)
        agree.record(veq(right, left), input=word)
        idem.record(veq(straighten(right, N, L), right), input=word)
        wt = word_weight(word, N, L)
        homog.record(all(word_weight(w, N, L) == wt for w in right), input=word)
        shifted = straighten(tuple(k - step for k in word), N, L)
        moved = {tuple(k - step for k in w): c for w, c in right.items()}
        shift.record(veq(shifted, moved), input=word)
    return rep
