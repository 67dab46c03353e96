"""Tensor products of the two letter modules and their quotients.

A shape lists an optional flip-symmetric exterior block followed by
ordinary exterior blocks of the natural module V or its dual W; the
tensor of those blocks is realized inside the plain tensor power of
letter modules, and the quotient by the Kazhdan-Lusztig ideal of the
relevant Coxeter group is handled by a straightening rewrite: every
ambient label either dies or collapses onto a unique chamber label
times a power of -q.  The chamber depends on the convention pack
(the rewrite scalar must sit on the lattice side of the pack's bar
correction, which flips the preferred orientation), so both packs get
their own basis of the same quotient.

Labels are tuples over the doubled alphabet of uq_core; the module
weight of a letter is its value on V factors and minus its value on W
factors.  Hecke generators act on the right of pure tensor powers by
the rank-1 table below, the sign-flip generator acting on the first
slot only; the table is the unique one compatible with the quadratic
relation and with the coideal action, which the test suite enforces.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .coxeter import (CoxeterGroup, kl_element, left_multiply,
                      longest_element, reduced_word)
from .errors import (EmptyBlockError, GroupMismatchError,
                     InconsistentSystemError, ShapeError)
from .transition import TransitionMatrix
from .laurent import LaurentPoly
from .ratfun import RF_ONE, RF_ZERO, RatFun, vec_axpy
from .uq_core import (alphabet, eps_diff_root_coords, label_eps_weight,
                      label_weight_alpha)

_Q = RatFun.from_laurent(LaurentPoly.q_power(1))
_QINV = RatFun.from_laurent(LaurentPoly.q_power(-1))
_CORR = _QINV - _Q              # q^-1 - q, the quadratic-relation tail


# -- shapes ---------------------------------------------------------------------


@dataclass(frozen=True)
class TensorShape:
    """An exterior-block decomposition of a mixed tensor power.

    a0 counts the slots of the flip-symmetric block (always V letters);
    blocks lists (c, a) pairs meaning an a-fold exterior block of V
    (c = 0) or W (c = 1).  b_seq and levi record the data the shape
    was derived from, so a shape is reproducible and serializable.
    """
    a0: int
    blocks: tuple           # ((c, a), ...)
    b_seq: tuple
    levi: frozenset

    def __post_init__(self):
        if self.a0 < 0:
            raise ShapeError("negative flip block size %d" % self.a0)
        for c, a in self.blocks:
            if c not in (0, 1) or a < 1:
                raise ShapeError("bad block (%r, %r)" % (c, a))
        total = self.a0 + sum(a for _, a in self.blocks)
        if total != len(self.b_seq):
            raise ShapeError(
                "blocks cover %d slots but the type sequence has %d"
                % (total, len(self.b_seq)))

    def total(self):
        return len(self.b_seq)

    def letters(self):
        out = ["V"] * self.a0
        for c, a in self.blocks:
            out.extend(["V" if c == 0 else "W"] * a)
        return tuple(out)

    def spans(self):
        """(start, stop, kind, is_flip_block) per block, in slot order."""
        out = []
        pos = 0
        if self.a0:
            out.append((0, self.a0, "V", True))
            pos = self.a0
        for c, a in self.blocks:
            out.append((pos, pos + a, "V" if c == 0 else "W", False))
            pos += a
        return tuple(out)


def levi_to_shape(b_seq, levi):
    """Shape of the quotient attached to a type sequence and a set of
    retained simple reflections.

    The indices 0..len(b) not naming a retained reflection cut the
    slot line into blocks; index 0 retained means the leading slots
    form the flip-symmetric block.  A reflection between slots of
    different types cannot be retained (the corresponding root is not
    a reflection of the even subsystem).
    """
    b = tuple(int(x) for x in b_seq)
    if not b:
        raise ShapeError("empty type sequence")
    if any(x not in (0, 1) for x in b):
        raise ShapeError("type sequence entries must be 0 or 1")
    if b[0] != 0:
        raise ShapeError("type sequence must start with 0")
    mn = len(b)
    levi = frozenset(int(j) for j in levi)
    for j in levi:
        if j < 0 or j >= mn:
            raise ShapeError("no simple reflection %d for %d slots" % (j, mn))
        if j >= 1 and b[j - 1] != b[j]:
            raise ShapeError(
                "reflection %d sits between slot types %d and %d" %
                (j, b[j - 1], b[j]))
    cuts = [j for j in range(mn + 1) if j not in levi]
    a0 = cuts[0]
    blocks = []
    for t in range(len(cuts) - 1):
        lo, hi = cuts[t], cuts[t + 1]
        blocks.append((b[lo], hi - lo))
    return TensorShape(a0, tuple(blocks), b, levi)


def shape_from_blocks(a0, blocks):
    """Rebuild the (b_seq, levi) presentation from explicit blocks;
    inverse to reading those fields off a shape."""
    b = [0] * a0
    for c, a in blocks:
        b.extend([c] * a)
    cuts = {a0}
    pos = a0
    for _, a in blocks:
        pos += a
        cuts.add(pos)
    levi = frozenset(j for j in range(len(b)) if j not in cuts)
    return TensorShape(a0, tuple(blocks), tuple(b), levi)


def module_dimension(shape, N):
    """Product of exterior-power dimensions: the flip block draws its
    labels from one sign class, so it sees only half the alphabet."""
    dim = math.comb(N // 2, shape.a0)
    for _, a in shape.blocks:
        dim *= math.comb(N, a)
    return dim


# -- chamber bases and straightening ----------------------------------------------


def _sigma(kind):
    return 1 if kind == "V" else -1


def _block_chamber(kind, size, is_flip, N, convention):
    """Chamber labels of one exterior block, as tuples of values.

    The lower pack keeps labels whose module weights strictly decrease
    along the block (flip block additionally on the negative side);
    the upper pack is the mirror image.
    """
    sgn = _sigma(kind)
    values = list(alphabet(N))
    if is_flip:
        values = [v for v in values if (v < 0 if convention == "lower"
                                        else v > 0)]
    out = []

    def rec(prefix, pool):
        if len(prefix) == size:
            out.append(tuple(prefix))
            return
        for t, v in enumerate(pool):
            rec(prefix + [v], pool[t + 1:])

    # pool sorted by decreasing module weight for the lower pack,
    # increasing for the upper, so prefixes extend in chamber order
    values.sort(key=lambda v: -sgn * v if convention == "lower" else sgn * v)
    rec([], values)
    return out


@dataclass(frozen=True)
class ModuleHandle:
    """A built module: shape, convention data, letter kinds, and the
    chamber basis (tuples of values, lexicographic order)."""
    shape: "TensorShape"
    cfg: object
    letters: tuple
    basis: tuple

    def index(self, label):
        return self.basis.index(label)


def build_module(shape, cfg):
    if shape.total() == 0:
        raise ShapeError("shape with no slots")
    if shape.a0 > cfg.N // 2:
        raise EmptyBlockError(
            "flip block of %d slots needs %d sign-definite values but the "
            "alphabet has %d" % (shape.a0, shape.a0, cfg.N // 2))
    for c, a in shape.blocks:
        if a > cfg.N:
            raise EmptyBlockError(
                "exterior block of %d slots exceeds the alphabet size %d"
                % (a, cfg.N))
    per_block = [_block_chamber(kind, stop - start, is_flip, cfg.N,
                                cfg.convention)
                 for start, stop, kind, is_flip in shape.spans()]
    basis = [()]
    for chamber in per_block:
        basis = [lab + part for lab in basis for part in chamber]
    basis.sort()
    return ModuleHandle(shape, cfg, shape.letters(), tuple(basis))


def straighten(handle, label):
    """Collapse an ambient label onto the chamber, or return None when
    it dies in the quotient.

    Each step applies one defining relation of the quotient: swapping
    an out-of-order adjacent pair inside a block, or flipping the sign
    of the leading flip-block entry, both at the cost of one rewrite
    scalar; a repeated module weight inside a block, or a zero leading
    value in the flip block, kills the label.  Sign flips strictly
    reduce the number of wrong-sign entries and swaps strictly reduce
    inversions, so the loop terminates; the result is the image in the
    quotient, hence independent of the scan order.
    """
    lower = handle.cfg.convention == "lower"
    factor = _Q if lower else _QINV
    # the sign-flip generator of the lower pack squares to one when the
    # alphabet contains the value zero, so its rewrite costs only a sign
    flip_factor = RF_ONE if lower and handle.cfg.N % 2 else factor
    coeff = RF_ONE
    out = list(label)
    for start, stop, kind, is_flip in handle.shape.spans():
        sgn = _sigma(kind)
        while True:
            if is_flip:
                lead = out[start]
                if lead == 0:
                    return None
                if (lead > 0) if lower else (lead < 0):
                    out[start] = -lead
                    coeff = coeff * (-flip_factor)
                    continue
            moved = False
            for k in range(start, stop - 1):
                a, b = sgn * out[k], sgn * out[k + 1]
                if a == b:
                    return None
                if (a < b) if lower else (a > b):
                    out[k], out[k + 1] = out[k + 1], out[k]
                    coeff = coeff * (-factor)
                    moved = True
                    break
            if not moved:
                break
    return coeff, tuple(out)


def project(handle, vec):
    """Quotient image of an ambient vector, over chamber labels."""
    out = {}
    for label, c in vec.items():
        hit = straighten(handle, label)
        if hit is None:
            continue
        f, lab = hit
        nv = out.get(lab, RF_ZERO) + c * f
        if nv.is_zero():
            out.pop(lab, None)
        else:
            out[lab] = nv
    return out

def section(handle, vec):
    """Chamber lift of a quotient vector: chamber labels are honest
    ambient labels, so the section is the identity inclusion."""
    for label in vec:
        if straighten(handle, label) != (RF_ONE, label):
            raise ShapeError("label %r is not a chamber label" % (label,))
    return dict(vec)


def module_b_action(handle, i, vec):
    """Mixed coideal generator on the quotient: act on the chamber
    lift, then straighten.  Well defined because the rewrite ideal is
    stable under the coideal (enforced by tests)."""
    from .qsp import b_action
    return project(handle, b_action(handle.cfg, i, vec, handle.letters))


def module_k_action(handle, i, vec):
    from .qsp import k_action
    return k_action(handle.cfg, i, vec, handle.letters)


# -- weights and orders -------------------------------------------------------------


def weight_of(label, letters, N):
    """Module weight as a sparse value -> multiplicity map."""
    return label_eps_weight(label, letters, N)


def i_weight(label, letters, cfg):
    """Eigenvalue exponents of the Cartan ratios k_i, i = 1..N-1."""
    N = cfg.N
    return tuple(label_weight_alpha(label, letters, i, N)
                 - label_weight_alpha(label, letters, cfg.theta(i), N)
                 for i in cfg.nodes)


def _weight_diff(w1, w2):
    keys = set(w1) | set(w2)
    return {k: w1.get(k, 0) - w2.get(k, 0) for k in keys
            if w1.get(k, 0) != w2.get(k, 0)}


def order_lt(w1, w2, N, convention="lower"):
    """Strict weight order of the canonical-basis triangularity.

    Upper pack: w1 below w2 when w1 - w2 is a nonzero nonnegative sum
    of simple roots (so raising moves down); the lower pack uses the
    opposite order.
    """
    if convention == "upper":
        diff = _weight_diff(w1, w2)
    else:
        diff = _weight_diff(w2, w1)
    if not diff:
        return False
    coords = eps_diff_root_coords(diff, N)
    return coords is not None and all(c >= 0 for c in coords)


def suffix_order_lt(g, f, letters, N, convention="lower"):
    """Strict partial order on labels: every tail weight weakly below,
    at least one strictly.  The bar involutions built downstream are
    unitriangular for it: their corrections push weight through the
    tails in the pack's direction only."""
    strict = False
    n = len(letters)
    for k in range(n):
        wg = label_eps_weight(g[k:], letters[k:], N)
        wf = label_eps_weight(f[k:], letters[k:], N)
        if convention == "upper":
            diff = _weight_diff(wg, wf)
        else:
            diff = _weight_diff(wf, wg)
        if not diff:
            continue
        coords = eps_diff_root_coords(diff, N)
        if coords is None or any(c < 0 for c in coords):
            return False
        strict = True
    return strict


def block_suffix_weights(handle, label):
    """Tail weights at block boundaries, the data of the coarse order
    of the transition-matrix support condition."""
    spans = handle.shape.spans()
    N = handle.cfg.N
    out = []
    for start, _, _, _ in spans[1:]:
        w = label_eps_weight(label[start:], handle.letters[start:], N)
        out.append(tuple(sorted(w.items())))
    return tuple(out)


# -- Hecke right actions ------------------------------------------------------------


def _check_pure(letters):
    kinds = set(letters)
    if len(kinds) != 1:
        raise GroupMismatchError(
            "Hecke action needs a pure tensor block, got %r" % (kinds,))
    return letters[0]


def hecke_gen_action(vec, i, letters, N, convention="lower"):
    """Right action of the i-th Hecke generator on a pure tensor power.

    Generators i >= 1 compare the module weights of slots i, i+1:
    strictly decreasing pairs swap plainly, increasing pairs swap and
    keep a q^-1 - q tail, and ties scale by q^-1.  The extra generator
    i = 0 flips the sign of the first value: plainly when the module
    weight there is negative, with the tail when positive, and a zero
    value scales by q^-1.  Exception, forced by commutation with the
    coideal: the lower pack at odd rank has an involutive i = 0
    generator, the plain sign flip fixing the zero value.
    """
    kind = _check_pure(letters)
    sgn = _sigma(kind)
    plain_flip = (i == 0 and N % 2 == 1 and convention == "lower")
    out = {}

    def put(label, c):
        nv = out.get(label, RF_ZERO) + c
        if nv.is_zero():
            out.pop(label, None)
        else:
            out[label] = nv

    for label, c in vec.items():
        if i == 0:
            a = sgn * label[0]
            if plain_flip:
                put((-label[0],) + label[1:], c)
                continue
            if a == 0:
                put(label, c * _QINV)
                continue
            flipped = (-label[0],) + label[1:]
            put(flipped, c)
            if a > 0:
                put(label, c * _CORR)
        else:
            a, b = sgn * label[i - 1], sgn * label[i]
            if a == b:
                put(label, c * _QINV)
                continue
            swapped = (label[:i - 1] + (label[i], label[i - 1])
                       + label[i + 1:])
            put(swapped, c)
            if a < b:
                put(label, c * _CORR)
    return out


def _check_group(group, letters):
    n = len(letters)
    want = group.rank + 1 if group.family == "A" else group.rank
    if want != n:
        raise GroupMismatchError(
            "group %s_%d acts on %d slots, tensor has %d"
            % (group.family, group.rank, want, n))


def hecke_right_action(h, vec, letters, N, convention="lower"):
    """Right action of a Hecke algebra element, generator by generator
    along reduced words."""
    _check_group(h.group, letters)
    total = {}
    for w, c in h.terms.items():
        cur = {label: v * c for label, v in vec.items()}
        for i in reduced_word(h.group, w):
            cur = hecke_gen_action(cur, i, letters, N, convention)
        vec_axpy(total, RF_ONE, cur)
    return {k: v for k, v in total.items() if not v.is_zero()}


def kl_gen_action(vec, i, letters, N, convention="lower"):
    """Right action of the Kazhdan-Lusztig element of one generator:
    H_i + q, except H_0 + 1 where the generator is involutive.  These
    span the rewrite ideal."""
    out = hecke_gen_action(vec, i, letters, N, convention)
    if i == 0 and N % 2 == 1 and convention == "lower":
        vec_axpy(out, RF_ONE, vec)
    else:
        vec_axpy(out, _Q, vec)
    return {k: v for k, v in out.items() if not v.is_zero()}


def coxeter_group_for(letters, family):
    """The Coxeter group whose Hecke algebra acts on this pure block."""
    n = len(letters)
    rank = n - 1 if family == "A" else n
    return CoxeterGroup(family, rank)


def exterior_quotient(kind, size, cfg, flip=False):
    """Module handle of a single exterior block; its project/section
    realize the quotient by the span of all assert-lower
    Kazhdan-Lusztig elements of the block's Coxeter group."""
    if flip:
        if kind != "V":
            raise ShapeError("the flip-symmetric block is built from V")
        shape = shape_from_blocks(size, ())
    else:
        shape = shape_from_blocks(0, ((0 if kind == "V" else 1, size),))
    return build_module(shape, cfg)


# -- Hecke-side parabolic Kazhdan-Lusztig oracle -----------------------------------


def signed_right_step(label, i):
    """One signed-permutation generator acting on a label on the
    right: index 0 negates the first value, index i swaps the values
    in slots i and i+1."""
    if i == 0:
        return (-label[0],) + label[1:]
    out = list(label)
    out[i - 1], out[i] = out[i], out[i - 1]
    return tuple(out)


def signed_orbit_rep(label, group):
    """(base, x) with base the all-nonpositive weakly decreasing
    representative of the signed-permutation orbit of the label and x
    of minimal length with base . x = label."""
    base = tuple(sorted((-abs(v) for v in label), reverse=True))
    seen = {base}
    queue = deque([(base, group.identity())])
    while queue:
        lab, w = queue.popleft()
        if lab == label:
            return base, w
        for i in group.gen_labels():
            nl = signed_right_step(lab, i)
            if nl not in seen:
                seen.add(nl)
                queue.append((nl, group.apply_gen(w, i)))
    raise GroupMismatchError(
        "label %r not reached from its orbit base %r" % (label, base))


def stabilizer_reflections(label):
    """Generator indices of the signed-permutation stabilizer of an
    all-nonpositive weakly decreasing label: the sign flip when the
    first value is zero, a swap wherever adjacent values repeat."""
    stab = []
    if label and label[0] == 0:
        stab.append(0)
    stab.extend(i for i in range(1, len(label)) if label[i - 1] == label[i])
    return tuple(stab)


def parabolic_kl_oracle(handle):
    """Transition matrix of the parabolic Kazhdan-Lusztig basis of the
    module, computed on the Hecke side alone.

    The column of a chamber label f: walk the signed-permutation orbit
    of f from its base point, take the Kazhdan-Lusztig element of
    (longest stabilizer element) * (minimal representative), act on
    the base point and straighten into the chamber.  The result is
    divisible by the spherical symmetrizer scalar of the stabilizer;
    the quotient is the column.  Lower pack only: the Hecke-side
    lattice of the upper pack belongs to the dual basis.
    """
    cfg = handle.cfg
    if cfg.convention != "lower":
        raise ValueError("the Hecke-side oracle uses the lower pack")
    letters = handle.letters
    if any(k != "V" for k in letters):
        raise ValueError("the Hecke-side oracle needs V letters only")
    group = coxeter_group_for(letters, "B")
    columns = {}
    for f in handle.basis:
        base, x = signed_orbit_rep(f, group)
        wk = longest_element(group, stabilizer_reflections(base))
        sym = hecke_right_action(kl_element(group, wk), {base: RF_ONE},
                                 letters, cfg.N, "lower")
        if set(sym) != {base}:
            raise InconsistentSystemError(
                "symmetrizer moved the orbit base %r" % (base,), tag="oracle")
        big = left_multiply(group, wk, x)
        vec = hecke_right_action(kl_element(group, big), {base: RF_ONE},
                                 letters, cfg.N, "lower")
        columns[f] = {g: (c / sym[base]).as_laurent()
                      for g, c in project(handle, vec).items()
                      if not c.is_zero()}
    return TransitionMatrix.from_columns(
        handle.basis, handle.basis, columns,
        order_note="rows and columns by chamber label", lattice="qZq")


# -- integer weights and index sequences ------------------------------------------


def _position_roles(b_seq):
    """Per slot: (kind, index among slots of the same kind, 1-based)."""
    roles = []
    nv = nw = 0
    for b in b_seq:
        if b == 0:
            nv += 1
            roles.append(("V", nv))
        else:
            nw += 1
            roles.append(("W", nw))
    return roles


def lambda_to_f(lam, b_seq, N):
    """Doubled label sequence of an integer weight.

    The shift staggers same-type slots by one full step so that weak
    dominance of the weight becomes strict monotonicity of the labels;
    the parity offset keeps values on the alphabet's parity class
    (odd doubled values for N even, even ones for N odd).
    """
    off = 0 if N % 2 == 0 else 1
    out = []
    for value, (kind, x) in zip(lam, _position_roles(b_seq)):
        if kind == "V":
            out.append(2 * value - (2 * x - 1) + off)
        else:
            out.append(2 * value + (2 * x - 1) + off)
    return tuple(out)


def f_to_lambda(f, b_seq, N):
    off = 0 if N % 2 == 0 else 1
    out = []
    for d, (kind, x) in zip(f, _position_roles(b_seq)):
        if kind == "V":
            num = d + (2 * x - 1) - off
        else:
            num = d - (2 * x - 1) - off
        if num % 2:
            raise ShapeError("label %r has the wrong parity at rank %d"
                             % (f, N))
        out.append(num // 2)
    return tuple(out)


def label_in_chamber(handle, label):
    """Membership in the standard basis of the built module; for the
    weight bijection this is the dominance condition on the weight."""
    return straighten(handle, label) == (RF_ONE, tuple(label))
