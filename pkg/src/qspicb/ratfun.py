"""Rational functions in q and exact linear algebra over them.

Gram matrices of the bilinear form and intermediate solver states are
honest rational functions even when the final answers are Laurent, so
the field arithmetic lives here: RatFun is a reduced fraction of
integer Laurent polynomials with a canonical representative, which
makes equality a plain dict comparison.

The module also provides the two linear-algebra workhorses used
everywhere else: a dense row-reduction solver with row provenance
tags (so an inconsistent system can name the equation that broke),
and an incremental sparse echelon basis that can carry a shadow
vector through the same row operations, optionally twisting the
scalars (needed when the shadow is the image under an antilinear
map).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (InconsistentSystemError, SingularGramError,
                     UnderdeterminedSystemError)
from .laurent import LaurentPoly


def _poly_gcd(a, b):
    """Monic gcd of two dense Fraction coefficient lists (low first)."""
    a = list(a)
    b = list(b)
    while b and not b[-1]:
        b.pop()
    while a and not a[-1]:
        a.pop()
    while b:
        # a mod b
        while len(a) >= len(b):
            if not a[-1]:
                a.pop()
                continue
            f = a[-1] / b[-1]
            off = len(a) - len(b)
            for k in range(len(b)):
                a[off + k] -= f * b[k]
            a.pop()
        a, b = b, a
        while b and not b[-1]:
            b.pop()
    if not a:
        return [Fraction(1)]
    lead = a[-1]
    return [c / lead for c in a]


def _to_dense(poly):
    """LaurentPoly with valuation shifted to 0 -> dense Fraction list."""
    lo = poly.valuation()
    hi = poly.degree()
    return [Fraction(poly.coeff(e)) for e in range(lo, hi + 1)]


def _from_dense(coeffs):
    return LaurentPoly({e: c for e, c in enumerate(coeffs)})


def _clear_fractions(poly):
    """Scale a LaurentPoly with Fraction coefficients to integer
    coefficients; returns (integer poly, scale) with poly = intpoly/scale."""
    denoms = [c.denominator if isinstance(c, Fraction) else 1
              for c in poly.terms.values()]
    lcm = 1
    for d in denoms:
        g = _gcd_int(lcm, d)
        lcm = lcm // g * d
    if lcm == 1:
        return poly, 1
    return poly * lcm, lcm


def _gcd_int(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def _content(poly):
    g = 0
    for c in poly.terms.values():
        g = _gcd_int(g, c)
    return g or 1


class RatFun:
    """A fraction num/den of Laurent polynomials, kept canonical.

    Canonical form: den is an integer polynomial with nonzero constant
    term and positive leading coefficient, num an integer Laurent
    polynomial, gcd(num, den) = 1 over Q[q], and the integer contents
    of num and den are coprime.  Zero is 0/1.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _canonical=False):
        if den is None:
            den = LaurentPoly.one()
        if _canonical:
            self.num = num
            self.den = den
            self._hash = None
            return
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num = LaurentPoly.zero()
            self.den = LaurentPoly.one()
            self._hash = None
            return
        num, sn = _clear_fractions(num)
        den, sd = _clear_fractions(den)
        num = num * sd
        den = den * sn
        # pull the denominator's monomial part into the numerator
        dval = den.valuation()
        if dval:
            den = den.shift(-dval)
            num = num.shift(-dval)
        if len(den.terms) > 1 or den.coeff(0) != 1:
            g = _poly_gcd(_to_dense(num), _to_dense(den))
            if len(g) > 1:
                gp = _from_dense(g)
                num = num.divide_exact(gp)
                den = den.divide_exact(gp)
                num, s1 = _clear_fractions(num)
                den, s2 = _clear_fractions(den)
                num = num * s2
                den = den * s1
        cn, cd = _content(num), _content(den)
        g = _gcd_int(cn, cd)
        if g > 1:
            num = num * Fraction(1, g)
            den = den * Fraction(1, g)
        if den.terms[den.degree()] < 0:
            num = -num
            den = -den
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls):
        return cls(LaurentPoly.zero(), LaurentPoly.one(), _canonical=True)

    @classmethod
    def one(cls):
        return cls(LaurentPoly.one(), LaurentPoly.one(), _canonical=True)

    @classmethod
    def from_laurent(cls, p):
        if p.is_integral():
            return cls(p, LaurentPoly.one(), _canonical=True)
        return cls(p)

    @classmethod
    def from_int(cls, c):
        return cls.from_laurent(LaurentPoly.from_int(c))

    # -- queries ----------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def is_laurent(self):
        return self.den == LaurentPoly.one()

    def as_laurent(self):
        """Return the numerator when the fraction is polynomial,
        otherwise raise ValueError.  This is the integrality gate."""
        if not self.is_laurent():
            raise ValueError("not a Laurent polynomial: %s" % (self,))
        return self.num

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFun):
            return other
        if isinstance(other, LaurentPoly):
            return RatFun.from_laurent(other)
        if isinstance(other, int):
            return RatFun.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den,
                      self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RatFun.zero()
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverting zero")
        return RatFun(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def bar(self):
        """q -> q^-1 on numerator and denominator."""
        return RatFun(self.num.bar(), self.den.bar())

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        if self.is_laurent():
            return str(self.num)
        return "(%s) / (%s)" % (self.num, self.den)

    def __repr__(self):
        return "RatFun(%s)" % (self,)


RF_ZERO = RatFun.zero()
RF_ONE = RatFun.one()


# ---------------------------------------------------------------------------
# sparse vectors: dict label -> RatFun, zero entries absent
# ---------------------------------------------------------------------------

def vec_axpy(dst, coeff, src):
    """dst += coeff * src, in place, pruning zeros."""
    if coeff.is_zero():
        return dst
    for k, v in src.items():
        cur = dst.get(k)
        nv = coeff * v if cur is None else cur + coeff * v
        if nv.is_zero():
            dst.pop(k, None)
        else:
            dst[k] = nv
    return dst


def vec_scale(vec, coeff):
    if coeff.is_zero():
        return {}
    return {k: coeff * v for k, v in vec.items()}


def vec_map(vec, fn):
    out = {}
    for k, v in vec.items():
        nv = fn(v)
        if not nv.is_zero():
            out[k] = nv
    return out


class EchelonBasis:
    """Incremental row echelon over RatFun for sparse dict vectors.

    Each stored row is a pair (vector, shadow); row operations applied
    to the vector are mirrored on the shadow, with the scalar passed
    through ``twist`` first (identity for a linear shadow, bar for the
    image under an antilinear map, so shadow_k stays the image of
    row_k throughout).
    """

    def __init__(self, twist=None):
        self.rows = []           # list of (pivot_label, vec, shadow)
        self.pivots = {}         # pivot_label -> row index
        self.twist = twist or (lambda c: c)

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec, shadow=None):
        """Reduce vec against the stored rows.  Returns the residual
        pair (vec', shadow', coeffs) where coeffs maps row index -> the
        coefficient of that row in the eliminated part."""
        vec = dict(vec)
        shadow = dict(shadow) if shadow is not None else {}
        coeffs = {}
        while True:
            hit = None
            for label in vec:
                idx = self.pivots.get(label)
                if idx is not None:
                    hit = (label, idx)
                    break
            if hit is None:
                break
            label, idx = hit
            _, rvec, rsh = self.rows[idx]
            c = vec[label]      # pivot rows are normalized to pivot 1
            coeffs[idx] = coeffs.get(idx, RF_ZERO) + c
            vec_axpy(vec, -c, rvec)
            vec.pop(label, None)
            vec_axpy(shadow, self.twist(-c), rsh)
        return vec, shadow, coeffs

    def add(self, vec, shadow=None):
        """Insert a vector (with its shadow).  Returns the new pivot
        label, or None when the vector was already in the span."""
        vec, shadow, _ = self.reduce(vec, shadow)
        if not vec:
            return None
        pivot = min(vec)
        inv = vec[pivot].inverse()
        vec = vec_scale(vec, inv)
        shadow = vec_scale(shadow, self.twist(inv))
        self.pivots[pivot] = len(self.rows)
        self.rows.append((pivot, vec, shadow))
        return pivot

    def express(self, vec):
        """Coefficients writing vec as a combination of stored rows.

        Returns dict row index -> coefficient, or None when vec is not
        in the span."""
        res, _, coeffs = self.reduce(vec)
        if res:
            return None
        return coeffs


def solve_unique(rows, rhs, tags=None):
    """Solve an overdetermined system  sum_j rows[r][j] x_j = rhs[r].

    rows: list of dense RatFun lists, all the same length n.
    Raises InconsistentSystemError (with the tag of the offending row)
    or UnderdeterminedSystemError; returns the list of n RatFun.
    """
    n = len(rows[0]) if rows else 0
    work = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    tags = list(tags) if tags is not None else [None] * len(work)
    piv_rows = []                      # (col, row index) in order
    used = [False] * len(work)
    for col in range(n):
        sel = None
        for r in range(len(work)):
            if used[r] or work[r][col].is_zero():
                continue
            # prefer structurally simple pivots
            if sel is None or len(work[r][col].num.terms) < len(work[sel][col].num.terms):
                sel = r
        if sel is None:
            raise UnderdeterminedSystemError(
                "no pivot for unknown %d of %d" % (col, n))
        used[sel] = True
        piv_rows.append((col, sel))
        inv = work[sel][col].inverse()
        work[sel] = [inv * v for v in work[sel]]
        for r in range(len(work)):
            if r == sel or work[r][col].is_zero():
                continue
            f = work[r][col]
            row = work[r]
            prow = work[sel]
            for j in range(col, n + 1):
                if not prow[j].is_zero():
                    row[j] = row[j] - f * prow[j]
    for r in range(len(work)):
        if used[r]:
            continue
        if not work[r][n].is_zero():
            raise InconsistentSystemError(
                "inconsistent equation (tag %r)" % (tags[r],), tag=tags[r])
    sol = [RF_ZERO] * n
    for col, r in piv_rows:
        sol[col] = work[r][n]
    return sol


def invert_gram(gram):
    """Inverse of a square RatFun matrix given as list of lists.
    Raises SingularGramError when singular."""
    n = len(gram)
    work = [list(gram[i]) + [RF_ONE if j == i else RF_ZERO
                             for j in range(n)] for i in range(n)]
    for col in range(n):
        sel = None
        for r in range(col, n):
            if not work[r][col].is_zero():
                if sel is None or len(work[r][col].num.terms) < len(work[sel][col].num.terms):
                    sel = r
        if sel is None:
            raise SingularGramError("Gram matrix is singular at column %d" % col)
        work[col], work[sel] = work[sel], work[col]
        inv = work[col][col].inverse()
        work[col] = [inv * v for v in work[col]]
        for r in range(n):
            if r == col or work[r][col].is_zero():
                continue
            f = work[r][col]
            prow = work[col]
            row = work[r]
            for j in range(col, 2 * n):
                if not prow[j].is_zero():
                    row[j] = row[j] - f * prow[j]
    return [row[n:] for row in work]
