"""Exact scalar arithmetic in fractional powers of the quantum parameter.

Every coefficient in this package lives in the Laurent ring Q[t, t^-1]
where t is a formal (2N)-th root of q, so q^k sits at t-exponent 2*N*k
and half-integral powers such as q^(1/2) stay exact.  A ScalarQ stores
{t-exponent: rational} with all values nonzero; N is carried along and
mixing scalars with different N raises.  No floats, ever: division is
only available through divide_exact, and a failed exact division raises
NotDivisible, which downstream code treats as an operator bug rather
than a numerical problem.
"""

from __future__ import annotations

import re

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as _Q


class NotDivisible(ArithmeticError):
    """Exact division failed; some operator table upstream is wrong."""


class ScalarMismatch(ValueError):
    """Two scalars with different root-of-q denominators were combined."""


def _as_q(x):
    if isinstance(x, int):
        return _Q(x)
    return x


class ScalarQ:
    """Laurent polynomial in t = q^(1/(2N)) with rational coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        if terms is None:
            self.terms = {}
        else:
            self.terms = {e: _as_q(c) for e, c in terms.items() if c}

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def one(cls, n):
        return cls(n, {0: 1})

    @classmethod
    def rational(cls, n, num, den=1):
        return cls(n, {0: _Q(num, den)})

    @classmethod
    def q_power(cls, n, k, coeff=1):
        """coeff * q^k, with k an integer."""
        return cls(n, {2 * n * k: coeff})

    @classmethod
    def t_power(cls, n, j, coeff=1):
        """coeff * q^(j/(2N)); j counts powers of the root t."""
        return cls(n, {j: coeff})

    # -- basic predicates --------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {0: 1}

    def is_monomial(self):
        return len(self.terms) == 1

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other):
        if self.n != other.n:
            raise ScalarMismatch(f"mixing roots q^(1/{2*self.n}) and q^(1/{2*other.n})")

    # -- ring operations ---------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ScalarQ):
            other = ScalarQ(self.n, {0: _Q(other)})
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return ScalarQ(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return ScalarQ(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, ScalarQ):
            other = ScalarQ(self.n, {0: _Q(other)})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ScalarQ):
            c = _Q(other)
            if not c:
                return ScalarQ(self.n)
            return ScalarQ(self.n, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return ScalarQ(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k == 0:
            return ScalarQ.one(self.n)
        if k < 0:
            if not self.is_monomial():
                raise NotDivisible("negative power of a non-monomial")
            (e, c), = self.terms.items()
            return ScalarQ(self.n, {e * k: _Q(1) / c ** (-k)})
        base, out = self, ScalarQ.one(self.n)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, ScalarQ):
            return self.n == other.n and self.terms == other.terms
        try:
            c = _Q(other)
        except (TypeError, ValueError):
            return NotImplemented
        if not c:
            return not self.terms
        return self.terms == {0: c}

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.terms.items()))))

    # -- exact division ----------------------------------------------

    def divide_exact(self, other):
        """Return self / other, raising NotDivisible unless it is exact."""
        if not isinstance(other, ScalarQ):
            other = _Q(other)
            if not other:
                raise ZeroDivisionError("division by zero scalar")
            return ScalarQ(self.n, {e: c / other for e, c in self.terms.items()})
        self._check(other)
        if not other.terms:
            raise ZeroDivisionError("division by zero scalar")
        if not self.terms:
            return ScalarQ(self.n)
        fmin, fmax = min(self.terms), max(self.terms)
        gmin, gmax = min(other.terms), max(other.terms)
        dlen = (fmax - fmin) - (gmax - gmin)
        if dlen < 0:
            raise NotDivisible(f"{self} not divisible by {other}")
        work = [self.terms.get(fmin + i, _Q(0)) for i in range(fmax - fmin + 1)]
        g = [other.terms.get(gmin + i, _Q(0)) for i in range(gmax - gmin + 1)]
        quot = {}
        for j in range(dlen + 1):
            c = work[j] / g[0]
            if c:
                quot[fmin - gmin + j] = c
                for i, gi in enumerate(g):
                    if gi:
                        work[j + i] -= c * gi
        if any(work[dlen + 1:]):
            raise NotDivisible(f"{self} not divisible by {other}")
        return ScalarQ(self.n, quot)

    # -- evaluation and display --------------------------------------

    def eval_at_one(self):
        """Specialize q -> 1 (hence t -> 1); returns an exact rational."""
        total = _Q(0)
        for c in self.terms.values():
            total += c
        return total

    def _exp_frac(self, j):
        # reduced exponent of q as (num, den)
        d = 2 * self.n
        from math import gcd
        g = gcd(abs(j), d) if j else d
        return j // g, d // g

    def text(self):
        """Render like '3*q^{-1/2} + 1 - q^{2}', exponents ascending."""
        if not self.terms:
            return "0"
        pieces = []
        for j in sorted(self.terms):
            c = self.terms[j]
            neg = c < 0
            c = -c if neg else c
            num, den = self._exp_frac(j)
            if j == 0:
                body = str(c)
            else:
                exp = str(num) if den == 1 else f"{num}/{den}"
                head = "q" if exp == "1" else "q^{%s}" % exp
                body = head if c == 1 else f"{c}*{head}"
            if not pieces:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append(("- " if neg else "+ ") + body)
        return " ".join(pieces)

    __str__ = text

    def __repr__(self):
        return f"ScalarQ({self.n}, {self.text()!r})"

    def to_json(self):
        """List of {num, den, exp2N} term objects, exponents ascending."""
        out = []
        for j in sorted(self.terms):
            c = self.terms[j]
            out.append({"num": int(c.numerator), "den": int(c.denominator), "exp2N": j})
        return out

    @classmethod
    def from_json(cls, n, data):
        return cls(n, {d["exp2N"]: _Q(d["num"], d["den"]) for d in data})


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<num>\d+)(?:/(?P<den>\d+))?\s*\*?\s*)?
        (?:(?P<q>q)(?:\^\{(?P<enum>-?\d+)(?:/(?P<eden>\d+))?\})?)?\s*""",
    re.VERBOSE,
)


def parse_scalar(n, text):
    """Inverse of ScalarQ.text for the format this package prints."""
    text = text.strip()
    if text == "0":
        return ScalarQ.zero(n)
    out = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse scalar at {text[pos:]!r}")
        if m.group("num") is None and m.group("q") is None:
            raise ValueError(f"empty term in {text!r}")
        if not first and m.group("sign") is None:
            raise ValueError(f"missing sign before {text[m.start():]!r}")
        sign = -1 if m.group("sign") == "-" else 1
        coeff = _Q(int(m.group("num") or 1), int(m.group("den") or 1)) * sign
        if m.group("q") is None:
            j = 0
        elif m.group("enum") is None:
            j = 2 * n
        else:
            enum, eden = int(m.group("enum")), int(m.group("eden") or 1)
            if (2 * n * enum) % eden:
                raise ValueError(f"exponent {enum}/{eden} not supported at N={n}")
            j = 2 * n * enum // eden
        out[j] = out.get(j, _Q(0)) + coeff
        pos = m.end()
        first = False
    return ScalarQ(n, {e: c for e, c in out.items() if c})


# -- q-combinatorics -------------------------------------------------


def q_int(n, c):
    """Symmetric q-integer [c] = (q^c - q^-c)/(q - q^-1)."""
    if c < 0:
        return -q_int(n, -c)
    return ScalarQ(n, {2 * n * (c - 1 - 2 * j): 1 for j in range(c)})


def q_factorial(n, m):
    out = ScalarQ.one(n)
    for c in range(1, m + 1):
        out = out * q_int(n, c)
    return out


def q_binom(n, m, k):
    """Symmetric Gaussian binomial [m choose k]; exact by construction."""
    if k < 0 or k > m:
        return ScalarQ.zero(n)
    num = ScalarQ.one(n)
    for c in range(m - k + 1, m + 1):
        num = num * q_int(n, c)
    return num.divide_exact(q_factorial(n, k))
