"""Exact Laurent polynomials in one variable q.

This is the scalar ring used everywhere else: sparse integer Laurent
polynomials with the bar involution q -> q^-1, lattice membership
predicates, and a canonical JSON form for golden files.  Coefficients
are Python ints; a Fraction sneaking in (from transient rational
arithmetic) is tolerated by the arithmetic but rejected by the
serializer, so integrality failures surface loudly.
"""

from __future__ import annotations

from fractions import Fraction

LATTICES = ("A", "Zq", "Zqinv", "qZq", "qinvZqinv")


def _norm_coeff(c):
    """Collapse integral Fractions back to int."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class LaurentPoly:
    """A finite sum  sum_e c_e q^e  with exact coefficients.

    Instances are immutable and hashable.  Arithmetic never loses
    exactness; exponents are arbitrary ints.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for e, c in terms.items():
                c = _norm_coeff(c)
                if c:
                    clean[int(e)] = c
        self.terms = clean
        self._hash = None

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def from_int(cls, c):
        return cls({0: c})

    @classmethod
    def q_power(cls, e, c=1):
        return cls({e: c})

    # -- basic queries ------------------------------------------------

    def is_zero(self):
        return not self.terms

    def coeff(self, e):
        return self.terms.get(e, 0)

    def support(self):
        return sorted(self.terms)

    def degree(self):
        """Largest exponent; None for the zero polynomial."""
        return max(self.terms) if self.terms else None

    def valuation(self):
        """Smallest exponent; None for the zero polynomial."""
        return min(self.terms) if self.terms else None

    def eval_at_one(self):
        return sum(self.terms.values())

    def is_integral(self):
        return all(isinstance(c, int) for c in self.terms.values())

    def is_nonneg(self):
        return all(c >= 0 for c in self.terms.values())

    # -- ring structure ----------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.terms.items()})

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
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a Laurent polynomial")
        out = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k):
        """Multiply by q^k."""
        return LaurentPoly({e + k: c for e, c in self.terms.items()})

    def divide_exact(self, other):
        """Exact division; raises ValueError when the quotient is not
        a Laurent polynomial."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return LaurentPoly.zero()
        if len(other.terms) == 1:
            (e, c), = other.terms.items()
            return LaurentPoly(
                {e1 - e: Fraction(c1) / c for e1, c1 in self.terms.items()})
        # shift both to honest polynomials, then long division
        sv, ov = self.valuation(), other.valuation()
        rem = {e - sv: Fraction(c) for e, c in self.terms.items()}
        div = {e - ov: c for e, c in other.terms.items()}
        dlead = max(div)
        dc = div[dlead]
        quot = {}
        while rem and max(rem) >= dlead:
            rlead = max(rem)
            f = rem[rlead] / dc
            e = rlead - dlead
            quot[e] = f
            for e2, c2 in div.items():
                key = e2 + e
                val = rem.get(key, Fraction(0)) - f * c2
                if val:
                    rem[key] = val
                else:
                    rem.pop(key, None)
        if rem:
            raise ValueError("quotient is not a Laurent polynomial")
        shift = sv - ov
        return LaurentPoly({e + shift: c for e, c in quot.items()})

    # -- involution and lattices ---------------------------------------

    def bar(self):
        """The involution q -> q^-1."""
        return LaurentPoly({-e: c for e, c in self.terms.items()})

    def in_lattice(self, lattice):
        """Membership in one of the standard coefficient lattices.

        A          all of Z[q, q^-1]
        Zq         Z[q]
        Zqinv      Z[q^-1]
        qZq        q Z[q]        (strictly positive exponents)
        qinvZqinv  q^-1 Z[q^-1]  (strictly negative exponents)
        """
        if lattice not in LATTICES:
            raise ValueError("unknown lattice %r" % (lattice,))
        if not self.is_integral():
            return False
        if self.is_zero():
            return True
        lo, hi = min(self.terms), max(self.terms)
        if lattice == "A":
            return True
        if lattice == "Zq":
            return lo >= 0
        if lattice == "Zqinv":
            return hi <= 0
        if lattice == "qZq":
            return lo >= 1
        return hi <= -1

    # -- hashing and comparison ----------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- serialization --------------------------------------------------

    def to_json(self):
        """Canonical dense form {"min_exp": k, "coeffs": [...]} with
        zero-trim at both ends.  Zero is {"min_exp": 0, "coeffs": []}."""
        if not self.terms:
            return {"min_exp": 0, "coeffs": []}
        if not self.is_integral():
            raise ValueError("non-integer coefficients in %s" % (self,))
        lo, hi = min(self.terms), max(self.terms)
        return {"min_exp": lo,
                "coeffs": [self.terms.get(e, 0) for e in range(lo, hi + 1)]}

    @classmethod
    def from_json(cls, obj):
        lo = obj["min_exp"]
        return cls({lo + k: c for k, c in enumerate(obj["coeffs"])})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            neg = c < 0
            mag = -c if neg else c
            if e == 0:
                body = str(mag)
            else:
                qpow = "q" if e == 1 else "q^%d" % e
                body = qpow if mag == 1 else "%s%s" % (mag, qpow)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return "LaurentPoly(%s)" % (self,)


ZERO = LaurentPoly.zero()
ONE = LaurentPoly.one()
Q = LaurentPoly.q_power(1)
QINV = LaurentPoly.q_power(-1)


def qint(n):
    """The balanced q-integer [n] = (q^n - q^-n)/(q - q^-1)."""
    if n == 0:
        return LaurentPoly.zero()
    if n < 0:
        return -qint(-n)
    return LaurentPoly({e: 1 for e in range(-(n - 1), n, 2)})


def qfact(n):
    """Balanced q-factorial [n]! = [n][n-1]...[1]."""
    out = LaurentPoly.one()
    for k in range(2, n + 1):
        out = out * qint(k)
    return out
