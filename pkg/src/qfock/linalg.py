"""Exact linear algebra over the scalar ring.

Two layers.  The fraction-free layer (Bareiss elimination) works inside
the Laurent ring itself; every division it performs is exact by the
Sylvester identity, so divide_exact doubles as a self-check.  It powers
rank and membership tests, the latter done by cross-multiplied
reduction with no division at all.  The field layer wraps scalars in
reduced fractions (gcd via Euclid in Q[t]) and powers kernel bases and
linear solves; results are converted back to ring vectors and any
fraction that fails to clear signals an upstream operator bug.
"""

from __future__ import annotations

from .qlaurent import NotDivisible, ScalarQ

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as _Q


class LinearSolveError(ValueError):
    """No solution, or a solution that should be unique is not."""


# -- polynomial gcd in Q[t] ------------------------------------------


def _dense(s):
    lo = min(s.terms)
    hi = max(s.terms)
    return [s.terms.get(i, _Q(0)) for i in range(lo, hi + 1)]


def _polymod(a, b):
    # remainder of dense coefficient lists (descending index = high degree)
    a = a[:]
    da, db = len(a) - 1, len(b) - 1
    lead = b[-1]
    for sh in range(da - db, -1, -1):
        c = a[db + sh] / lead
        if c:
            for i, bi in enumerate(b):
                if bi:
                    a[i + sh] -= c * bi
    while a and not a[-1]:
        a.pop()
    return a


def poly_gcd(a, b):
    """Unit-normalized gcd of two scalars: lowest term is 1 * t^0."""
    if a.is_zero() and b.is_zero():
        raise ZeroDivisionError("gcd(0, 0)")
    n = a.n if not a.is_zero() else b.n
    fa = _dense(a) if not a.is_zero() else []
    fb = _dense(b) if not b.is_zero() else []
    while fb:
        fa, fb = fb, _polymod(fa, fb)
    # strip trailing zeros low end (units t^v) and scale lowest coeff to 1
    lo = 0
    while not fa[lo]:
        lo += 1
    fa = fa[lo:]
    c0 = fa[0]
    return ScalarQ(n, {i: v / c0 for i, v in enumerate(fa) if v})


class Frac:
    """Reduced fraction of scalars; denominator normalized to lowest term 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce=True):
        if den is None:
            den = ScalarQ.one(num.n)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = ScalarQ.one(num.n)
        elif reduce:
            g = poly_gcd(num, den)
            if not g.is_one():
                num = num.divide_exact(g)
                den = den.divide_exact(g)
            # normalize denominator to have lowest term 1 * t^0
            lo = min(den.terms)
            c0 = den.terms[lo]
            unit = ScalarQ(den.n, {-lo: _Q(1) / c0})
            den = den * unit
            num = num * unit
        self.num = num
        self.den = den

    def is_zero(self):
        return self.num.is_zero()

    __bool__ = lambda self: not self.num.is_zero()

    def __add__(self, other):
        return Frac(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other):
        return Frac(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self):
        return Frac(-self.num, self.den, reduce=False)

    def __mul__(self, other):
        return Frac(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.num.is_zero():
            raise ZeroDivisionError
        return Frac(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        return (self.num * other.den - other.num * self.den).is_zero()

    def as_scalar(self):
        """Clear the denominator; raises NotDivisible if it is not a unit."""
        return self.num.divide_exact(self.den)

    def __repr__(self):
        return f"Frac({self.num.text()!r}, {self.den.text()!r})"


# -- fraction-free echelon (Bareiss) ---------------------------------


def bareiss_echelon(rows, ncols=None):
    """Row echelon by fraction-free elimination.

    Returns (echelon_rows, pivot_cols).  Entries stay in the ring; each
    interior division is exact (raising otherwise would mean corrupted
    input arithmetic).
    """
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return [], []
    n = rows[0][0].n if rows[0] else None
    nr = len(rows)
    nc = ncols if ncols is not None else len(rows[0])
    piv_cols = []
    prev = None
    r = 0
    for c in range(nc):
        p = next((i for i in range(r, nr) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pivot = rows[r][c]
        for i in range(r + 1, nr):
            head = rows[i][c]
            if not (head or any(rows[i][c + 1:])):
                continue
            for j in range(c + 1, nc):
                num = rows[i][j] * pivot - head * rows[r][j]
                rows[i][j] = num.divide_exact(prev) if prev is not None else num
            rows[i][c] = ScalarQ.zero(n)
        piv_cols.append(c)
        prev = pivot
        r += 1
        if r == nr:
            break
    ech = [rows[i] for i in range(r)]
    return ech, piv_cols


def rank(rows, ncols=None):
    return len(bareiss_echelon(rows, ncols)[1])


def reduce_against(ech, piv_cols, vec):
    """Cross-multiplied reduction of vec against an echelon basis.

    Division-free: the result is a ring multiple of the true residue,
    so 'residue == 0' is decided exactly.  Returns the reduced vector.
    """
    v = list(vec)
    for row, c in zip(ech, piv_cols):
        if v[c]:
            pivot = row[c]
            coeff = v[c]
            v = [pivot * x - coeff * y for x, y in zip(v, row)]
    return v


def in_span(ech, piv_cols, vec):
    return not any(reduce_against(ech, piv_cols, vec))


# -- field-level kernel and solve ------------------------------------


def _to_frac_rows(rows):
    return [[Frac(x) for x in r] for r in rows]


def _gauss_jordan(rows, nc):
    rows = [r for r in rows if any(r)]
    piv = []
    r = 0
    for c in range(nc):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], piv


def strip_content(vec):
    """Scale a ring vector so entries are coprime with lowest unit 1."""
    nz = [x for x in vec if x]
    if not nz:
        return list(vec)
    g = nz[0]
    shift = min(min(x.terms) for x in nz)
    g = ScalarQ(g.n, {e - shift: c for e, c in g.terms.items()})
    for x in nz[1:]:
        if g.is_one():
            break
        g = poly_gcd(g, x)
    g = ScalarQ(g.n, {e + shift: c for e, c in g.terms.items()})
    out = [x.divide_exact(g) for x in vec]
    # clear rational denominators and common integer content
    den = 1
    for x in out:
        for c in x.terms.values():
            den = den * c.denominator // _gcd_int(den, c.denominator)
    if den != 1:
        out = [x * den for x in out]
    num = 0
    for x in out:
        for c in x.terms.values():
            num = _gcd_int(num, abs(int(c.numerator)))
    if num > 1:
        out = [x.divide_exact(num) for x in out]
    return out


def _gcd_int(a, b):
    a, b = abs(int(a)), abs(int(b))
    while b:
        a, b = b, a % b
    return a


def kernel_basis(rows, ncols):
    """Basis of {x : rows . x = 0}, as content-stripped ring vectors."""
    if not rows:
        raise ValueError("kernel needs at least one constraint row")
    n = rows[0][0].n
    ech, piv = _gauss_jordan(_to_frac_rows(rows), ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    zero = Frac(ScalarQ.zero(n))
    for fc in free:
        x = [zero] * ncols
        x[fc] = Frac(ScalarQ.one(n))
        for row, pc in zip(ech, piv):
            x[pc] = -row[fc]
        # clear denominators
        den = ScalarQ.one(n)
        for f in x:
            if f and not f.den.is_one():
                den = den * f.den.divide_exact(poly_gcd(den, f.den))
        vec = [(f.num * den).divide_exact(f.den) for f in x]
        basis.append(strip_content(vec))
    return basis


def solve_unique(rows, rhs, ncols):
    """Solve rows . x = rhs expecting a unique ring solution.

    Raises LinearSolveError if inconsistent or underdetermined, and
    NotDivisible if the solution exists over the fraction field only.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    ech, piv = _gauss_jordan(_to_frac_rows(aug), ncols + 1)
    if ncols in piv:
        raise LinearSolveError("inconsistent linear system")
    if len(piv) < ncols:
        raise LinearSolveError("underdetermined linear system")
    x = [None] * ncols
    for row, pc in zip(ech, piv):
        x[pc] = row[ncols].as_scalar()
    return x


def sparse_solve(columns, rhs, n):
    """Solve sum_j x_j * columns[j] = rhs over sparse ring vectors.

    columns is a list of {key: ScalarQ} and rhs a single such dict; n
    is the ring parameter.  Elimination is sparse with a fill-reducing
    pivot choice, so near-triangular systems cost little.  Expects a
    unique solution: raises LinearSolveError when the system is
    inconsistent or underdetermined, NotDivisible when the solution
    lives only in the fraction field.
    """
    rows = {}
    colkeys = {}
    for j, col in enumerate(columns):
        live = {k: Frac(c) for k, c in col.items() if c}
        colkeys[j] = set(live)
        for k, f in live.items():
            rows.setdefault(k, {})[j] = f
    b = {k: Frac(c) for k, c in rhs.items() if c}
    for k in b:
        rows.setdefault(k, {})
    stack = []
    unsolved = set(range(len(columns)))
    while unsolved:
        j = min(unsolved, key=lambda v: (len(colkeys[v]), v))
        if not colkeys[j]:
            raise LinearSolveError("underdetermined linear system")
        k = min(colkeys[j], key=lambda key: (len(rows[key]), str(key)))
        prow = rows.pop(k)
        pb = b.pop(k, None)
        for jj in prow:
            colkeys[jj].discard(k)
        for kk in list(colkeys[j]):
            row = rows[kk]
            f = row.pop(j) / prow[j]
            colkeys[j].discard(kk)
            for jj, v in prow.items():
                if jj == j:
                    continue
                nv = row.get(jj)
                nv = -(f * v) if nv is None else nv - f * v
                if nv:
                    row[jj] = nv
                    colkeys[jj].add(kk)
                else:
                    row.pop(jj, None)
                    colkeys[jj].discard(kk)
            if pb is not None and pb:
                nb = b.get(kk)
                nb = -(f * pb) if nb is None else nb - f * pb
                if nb:
                    b[kk] = nb
                else:
                    b.pop(kk, None)
        stack.append((j, prow, pb))
        unsolved.discard(j)
    if b:
        raise LinearSolveError("inconsistent linear system")
    zero = Frac(ScalarQ.zero(n))
    x = {}
    for j, prow, pb in reversed(stack):
        acc = pb if pb is not None else zero
        for jj, v in prow.items():
            if jj != j and jj in x:
                acc = acc - v * x[jj]
        x[j] = acc / prow[j]
    return [x[j].as_scalar() for j in range(len(columns))]


def rank_mod_p(rows, p=1000003, t0=17):
    """Rank after specializing the deformation variable to t0 in F_p.

    rows is a list of sparse vectors {key: ScalarQ} over arbitrary
    hashable keys.  The specialized rank never exceeds the rank over
    the rational function field, so matching an upper bound certifies
    the symbolic rank exactly while staying in machine integers.
    """
    cols = {}
    reduced = []
    for row in rows:
        r = {}
        for key, c in row.items():
            j = cols.setdefault(key, len(cols))
            v = 0
            for e, frac in c.terms.items():
                den = int(frac.denominator) % p
                if den == 0:
                    raise LinearSolveError(f"denominator divisible by {p}")
                term = int(frac.numerator) % p * pow(den, p - 2, p) % p
                v = (v + term * pow(t0, e % (p - 1), p)) % p
            if v:
                r[j] = v
        if r:
            reduced.append(r)
    pivots = {}
    rank = 0
    for r in reduced:
        while r:
            j = min(r)
            pr = pivots.get(j)
            if pr is None:
                pivots[j] = r
                rank += 1
                break
            factor = r[j] * pow(pr[j], p - 2, p) % p
            for jj, vv in pr.items():
                nv = (r.get(jj, 0) - factor * vv) % p
                if nv:
                    r[jj] = nv
                else:
                    r.pop(jj, None)
    return rank
