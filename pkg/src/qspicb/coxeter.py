"""Coxeter groups of types A and B, their Hecke algebras, and
Kazhdan-Lusztig bases.

Elements are permutation tuples: type A_r permutes (1..r+1), type B_s
signs and permutes (1..s).  Generators act on the right by position:
s_i swaps slots i and i+1, and in type B the extra generator s_0 flips
the sign of the first slot.  Lengths and reduced words come from a
breadth-first search over the Cayley graph, which is cheap at the
ranks this package targets and sidesteps any need for a Bruhat-order
comparator.

The Hecke algebra uses the quadratic relation
(H_s - q^-1)(H_s + q) = 0, so bar(H_s) = H_s + (q - q^-1) and the
Kazhdan-Lusztig element for a simple reflection is H_s + q.  Parabolic
quotients rewrite H_w to (-q)^(length of the W_J part) times the
minimal coset representative.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GroupMismatchError
from .laurent import LaurentPoly
from .transition import TransitionMatrix

_Q = LaurentPoly.q_power(1)
_QINV = LaurentPoly.q_power(-1)
_ONE = LaurentPoly.one()


@dataclass(frozen=True)
class CoxeterGroup:
    family: str          # "A" or "B"
    rank: int            # number of generators

    def __post_init__(self):
        if self.family not in ("A", "B"):
            raise ValueError("family must be A or B")
        if self.rank < 0 or (self.family == "B" and self.rank < 1):
            raise ValueError("bad rank %d for type %s" % (self.rank, self.family))

    def identity(self):
        n = self.rank + 1 if self.family == "A" else self.rank
        return tuple(range(1, n + 1))

    def gen_labels(self):
        if self.family == "A":
            return tuple(range(1, self.rank + 1))
        return tuple(range(self.rank))

    def apply_gen(self, w, i):
        """Right multiplication w * s_i."""
        if self.family == "B" and i == 0:
            return (-w[0],) + w[1:]
        k = i - 1
        w = list(w)
        w[k], w[k + 1] = w[k + 1], w[k]
        return tuple(w)

    def apply_gen_left(self, w, i):
        """Left multiplication s_i * w (acts on values)."""
        if self.family == "B" and i == 0:
            return tuple(-v if abs(v) == 1 else v for v in w)
        a, b = i, i + 1
        out = []
        for v in w:
            if abs(v) == a:
                out.append((b if v > 0 else -b))
            elif abs(v) == b:
                out.append((a if v > 0 else -a))
            else:
                out.append(v)
        return tuple(out)


_BFS_CACHE = {}


def _bfs(group):
    key = (group.family, group.rank)
    hit = _BFS_CACHE.get(key)
    if hit is not None:
        return hit
    e = group.identity()
    lengths = {e: 0}
    words = {e: ()}
    frontier = [e]
    gens = group.gen_labels()
    while frontier:
        nxt = []
        for w in frontier:
            for i in gens:
                v = group.apply_gen(w, i)
                if v not in lengths:
                    lengths[v] = lengths[w] + 1
                    words[v] = words[w] + (i,)
                    nxt.append(v)
        frontier = nxt
    data = (lengths, words)
    _BFS_CACHE[key] = data
    return data


def group_elements(group):
    lengths, _ = _bfs(group)
    return sorted(lengths, key=lambda w: (lengths[w], w))


def length(group, w):
    return _bfs(group)[0][w]


def reduced_word(group, w):
    return _bfs(group)[1][w]


# ---------------------------------------------------------------------------
# Hecke algebra
# ---------------------------------------------------------------------------

@dataclass
class HeckeElement:
    group: CoxeterGroup
    terms: dict           # element tuple -> LaurentPoly

    def __post_init__(self):
        self.terms = {w: c for w, c in self.terms.items() if not c.is_zero()}

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.group == other.group and self.terms == other.terms

    def __add__(self, other):
        _check_group(self, other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, LaurentPoly.zero()) + c
        return HeckeElement(self.group, out)

    def __sub__(self, other):
        _check_group(self, other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, LaurentPoly.zero()) - c
        return HeckeElement(self.group, out)

    def scale(self, poly):
        return HeckeElement(self.group,
                            {w: c * poly for w, c in self.terms.items()})

    def coeff(self, w):
        return self.terms.get(w, LaurentPoly.zero())


def _check_group(a, b):
    if a.group != b.group:
        raise GroupMismatchError(
            "cannot combine elements of %s and %s" % (a.group, b.group))


def hecke_unit(group):
    return HeckeElement(group, {group.identity(): _ONE})


def hecke_basis_element(group, w):
    return HeckeElement(group, {w: _ONE})


def hecke_mul_gen(h, i):
    """h * H_{s_i}."""
    group = h.group
    lengths, _ = _bfs(group)
    out = {}
    for w, c in h.terms.items():
        ws = group.apply_gen(w, i)
        if lengths[ws] > lengths[w]:
            out[ws] = out.get(ws, LaurentPoly.zero()) + c
        else:
            # H_w H_s = H_{ws} + (q^-1 - q) H_w
            out[ws] = out.get(ws, LaurentPoly.zero()) + c
            out[w] = out.get(w, LaurentPoly.zero()) + c * (_QINV - _Q)
    return HeckeElement(group, out)


def hecke_mul(h1, h2):
    _check_group(h1, h2)
    group = h1.group
    _, words = _bfs(group)
    total = HeckeElement(group, {})
    for w, c in h2.terms.items():
        cur = h1.scale(c)
        for i in words[w]:
            cur = hecke_mul_gen(cur, i)
        total = total + cur
    return total


def hecke_bar(h):
    """The bar involution: q -> q^-1, H_s -> H_s + (q - q^-1)."""
    group = h.group
    _, words = _bfs(group)
    total = HeckeElement(group, {})
    for w, c in h.terms.items():
        cur = hecke_unit(group).scale(c.bar())
        for i in words[w]:
            cur = hecke_mul_gen(cur, i) + cur.scale(_Q - _QINV)
        total = total + cur
    return total


_KL_CACHE = {}


def kl_element(group, w):
    """The Kazhdan-Lusztig basis element for w: bar-invariant, equal
    to H_w plus strictly lower terms with coefficients in q Z[q]."""
    key = (group.family, group.rank, w)
    hit = _KL_CACHE.get(key)
    if hit is not None:
        return hit
    lengths, words = _bfs(group)
    if lengths[w] == 0:
        out = hecke_unit(group)
    else:
        i = words[w][-1]
        wp = group.apply_gen(w, i)
        # (H_{wp} + lower) * (H_s + q), then strip bar-invariant trash
        c = hecke_mul_gen(kl_element(group, wp), i) \
            + kl_element(group, wp).scale(_Q)
        for y in sorted(c.terms, key=lambda u: -lengths[u]):
            if y == w:
                continue
            m = c.coeff(y).coeff(0)
            if m:
                c = c - kl_element(group, y).scale(LaurentPoly.from_int(m))
        out = c
    _KL_CACHE[key] = out
    return out


# ---------------------------------------------------------------------------
# parabolic quotients
# ---------------------------------------------------------------------------

def is_minimal_rep(group, J, w):
    """Minimal length in the coset W_J w: no left descent from J."""
    lengths, _ = _bfs(group)
    lw = lengths[w]
    return all(lengths[group.apply_gen_left(w, j)] > lw for j in J)


def longest_element(group, J):
    """The longest element of the standard parabolic subgroup
    generated by the listed reflections."""
    lengths, _ = _bfs(group)
    best = group.identity()
    seen = {best}
    frontier = [best]
    while frontier:
        nxt = []
        for w in frontier:
            if lengths[w] > lengths[best]:
                best = w
            for j in J:
                v = group.apply_gen(w, j)
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return best


def left_multiply(group, u, x):
    """The product u * x."""
    for j in reversed(reduced_word(group, u)):
        x = group.apply_gen_left(x, j)
    return x


def minimal_coset_reps(group, J):
    lengths, _ = _bfs(group)
    return [w for w in group_elements(group) if is_minimal_rep(group, J, w)]


def project_to_parabolic(group, J, h):
    """Image in the quotient by the right ideal generated by
    H_{s_j} + q for j in J: each H_w collapses onto its minimal coset
    representative times (-q)^(length difference)."""
    lengths, _ = _bfs(group)
    out = {}
    for w, c in h.terms.items():
        factor = _ONE
        moved = True
        while moved:
            moved = False
            for j in J:
                jw = group.apply_gen_left(w, j)
                if lengths[jw] < lengths[w]:
                    w = jw
                    factor = factor * (-_Q)
                    moved = True
                    break
        val = out.get(w, LaurentPoly.zero()) + c * factor
        out[w] = val
    return {w: c for w, c in out.items() if not c.is_zero()}


def parabolic_kl_matrix(group, J):
    """Transition matrix of the parabolic Kazhdan-Lusztig basis over
    the standard basis of the quotient, columns and rows labeled by
    minimal coset representatives in (length, tuple) order."""
    J = tuple(sorted(J))
    bad = set(J) - set(group.gen_labels())
    if bad:
        raise GroupMismatchError("parabolic set %r not among generators" % (bad,))
    reps = minimal_coset_reps(group, J)
    columns = {}
    for x in reps:
        columns[x] = project_to_parabolic(group, J, kl_element(group, x))
    return TransitionMatrix.from_columns(
        reps, reps, columns,
        order_note="rows and columns by (length, signed permutation)",
        lattice="qZq")
