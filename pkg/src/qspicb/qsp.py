"""Coideal subalgebra of quasi-split type at finite rank.

The subalgebra is generated by Cartan ratios k_i = K_i K_{theta(i)}^-1
and mixed generators B_i pairing the raising operator at node i with
the lowering operator at the mirrored node theta(i) = N - i, dressed
by K_i^-1.  A scalar q-power rides on the generator at the fixed node
(N even), together with an additive Cartan tail weighted by kappa.
The exact q-powers are not free: the intertwiner between the bar
involution of the subalgebra and the bar involution of the full
algebra exists only for one choice per convention pack, and the
degree-by-degree solver below doubles as that validator.
"""

from dataclasses import dataclass

from .errors import HeightCapExceededError, InconsistentSystemError
from .laurent import LaurentPoly, ONE
from .ratfun import RF_ONE, RF_ZERO, RatFun, solve_unique, vec_axpy
from .uq_core import (UPlusElement, _all_labels, _min_letters, deriv_r,
                      deriv_rho, element_action, element_coords,
                      elements_equal_mod_radical, elt_mul, generator_action,
                      pair_weight_node, theta_component, uplus_weight_basis,
                      weight_height, weight_sub, word_action)


def _rf_q(k):
    return RatFun.from_laurent(LaurentPoly.q_power(k))


_QQ = RatFun.from_laurent(LaurentPoly({1: 1, -1: -1}))   # q - q^-1


@dataclass(frozen=True)
class QSPConfig:
    """Rank, parameter, and convention pack of one symmetric pair.

    convention "lower" grades the intertwiner over lowering words and
    keeps canonical corrections in q Z[q]; "upper" mirrors everything
    (raising words, corrections in q^-1 Z[q^-1]).
    """
    N: int
    kappa: int = 1
    convention: str = "lower"
    height_cap: int = 8

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("rank N must be at least 2")
        if self.convention not in ("lower", "upper"):
            raise ValueError("convention must be 'lower' or 'upper'")
        if self.kappa not in (0, 1):
            raise ValueError("kappa must be 0 or 1")

    def theta(self, i):
        return self.N - i

    @property
    def nodes(self):
        return tuple(range(1, self.N))

    @property
    def fixed_node(self):
        return self.N // 2 if self.N % 2 == 0 else None

    @property
    def lattice(self):
        return "qZq" if self.convention == "lower" else "qinvZqinv"

    def varsigma(self, i):
        """Scalar on the mirrored term of B_i.

        The intertwiner solver pins these: at the fixed node (N even)
        only q (lower pack) respectively q^-1 (upper pack) admits a
        solution; for N odd the two middle nodes form an orbit and the
        smaller one carries q^-1 respectively q (the mirrored choice
        also solves and is a gauge we do not take).  All other nodes
        carry 1.
        """
        if i == self.theta(i):
            return LaurentPoly.q_power(1 if self.convention == "lower"
                                       else -1)
        if self.N % 2 == 1 and i == (self.N - 1) // 2:
            return LaurentPoly.q_power(-1 if self.convention == "lower"
                                       else 1)
        return ONE

    def _sigma_key(self):
        """Cache fingerprint for the generator scalars, so a config
        with doctored scalars never shares solved components."""
        return tuple(str(self.varsigma(i)) for i in self.nodes)

    def to_json_dict(self):
        return {"N": self.N, "kappa": self.kappa,
                "convention": self.convention,
                "lattice": self.lattice,
                "height_cap": self.height_cap}

    @classmethod
    def from_json_dict(cls, data):
        keep = {k: data[k] for k in ("N", "kappa", "convention",
                                     "height_cap") if k in data}
        cfg = cls(**keep)
        if "lattice" in data and data["lattice"] != cfg.lattice:
            raise ValueError("lattice %r does not match convention %r"
                             % (data["lattice"], cfg.convention))
        return cfg


# -- module actions of the generators -------------------------------------------


def b_action(cfg, i, vec, letters):
    """The mixed generator at node i on a tensor of letter modules.

    lower:  B_i = E_i + varsigma_i F_{theta(i)} K_i^-1  (+ kappa K_i^-1
            at the fixed node);
    upper:  B_i = F_i + varsigma_i E_{theta(i)} K_i^-1  (+ kappa K_i^-1).
    """
    conv = cfg.convention
    N = cfg.N
    th = cfg.theta(i)
    kvec = generator_action(("K", i, -1), vec, letters, N, conv)
    if conv == "lower":
        out = dict(generator_action(("E", i), vec, letters, N, conv))
        mixed = generator_action(("F", th), kvec, letters, N, conv)
    else:
        out = dict(generator_action(("F", i), vec, letters, N, conv))
        mixed = generator_action(("E", th), kvec, letters, N, conv)
    vec_axpy(out, RatFun.from_laurent(cfg.varsigma(i)), mixed)
    if cfg.fixed_node == i and cfg.kappa:
        vec_axpy(out, RatFun.from_int(cfg.kappa), kvec)
    return {k: v for k, v in out.items() if not v.is_zero()}


def k_action(cfg, i, vec, letters):
    """Cartan ratio k_i = K_i K_{theta(i)}^-1, diagonal on labels."""
    tmp = generator_action(("K", i, 1), vec, letters, cfg.N, cfg.convention)
    return generator_action(("K", cfg.theta(i), -1), tmp, letters, cfg.N,
                            cfg.convention)


# -- the intertwiner, degree by degree -------------------------------------------


_UPSILON_CACHE = {}


def upsilon_component(cfg, mu):
    """Weight-mu component of the intertwiner between the two bar
    involutions, normalized to 1 in degree zero.

    Commuting a mixed generator across the component splits into two
    Cartan sectors; each sector pins one word derivation of the
    unknown against data from lower degrees.  Stacking both sectors
    over all nodes gives a heavily overdetermined linear system whose
    unique solvability is the convention validator: a wrong q-power
    in the generators makes it inconsistent at height 2.
    """
    mu = tuple(mu)
    key = (cfg.N, cfg.kappa, cfg.convention, cfg._sigma_key(), mu)
    hit = _UPSILON_CACHE.get(key)
    if hit is not None:
        return hit
    N = cfg.N
    ht = weight_height(mu)
    if ht == 0:
        out = UPlusElement.unit(N)
        _UPSILON_CACHE[key] = out
        return out
    if ht > cfg.height_cap:
        raise HeightCapExceededError(
            "intertwiner component at height %d exceeds cap %d"
            % (ht, cfg.height_cap))
    basis = uplus_weight_basis(N, mu)
    lower_pack = cfg.convention == "lower"
    sign = RF_ONE if lower_pack else -RF_ONE
    rows = []
    rhs = []
    tags = []
    for i in cfg.nodes:
        sub = weight_sub(mu, i)
        if sub is None:
            continue
        th = cfg.theta(i)
        vs = RatFun.from_laurent(cfg.varsigma(i))
        sub2 = weight_sub(sub, th)
        kap = RatFun.from_int(cfg.kappa) if cfg.fixed_node == i else RF_ZERO
        below = upsilon_component(cfg, sub) if not kap.is_zero() else None
        deep = upsilon_component(cfg, sub2) if sub2 is not None else None
        # sector carrying the plain Cartan: the mirrored letter joins
        # on the right, scalars barred
        plain = UPlusElement.zero(N, sub)
        if deep is not None:
            plain = plain + deep.append_letter(th).scale(vs.bar())
        if below is not None:
            plain = plain + below.scale(kap)
        plain = plain.scale(sign * _QQ)
        # sector carrying the inverse Cartan: the mirrored letter
        # joins on the left, with commutation q-powers
        qdir = 1 if lower_pack else -1
        inv = UPlusElement.zero(N, sub)
        if deep is not None:
            inv = inv + deep.prepend_letter(th).scale(
                vs * _rf_q(qdir * pair_weight_node(sub2, i)))
        if below is not None:
            inv = inv + below.scale(
                kap * _rf_q(qdir * pair_weight_node(sub, i)))
        inv = inv.scale(sign * _QQ)
        flavors = (((deriv_rho, plain), (deriv_r, inv)) if lower_pack
                   else ((deriv_r, plain), (deriv_rho, inv)))
        target = uplus_weight_basis(N, sub)
        for dfun, rhs_elt in flavors:
            cols = [element_coords(dfun(UPlusElement.from_word(N, w), i))
                    for w in basis]
            want = element_coords(rhs_elt)
            for k in range(len(target)):
                row = [cols[j][k] for j in range(len(basis))]
                b = want[k]
                if b.is_zero() and all(a.is_zero() for a in row):
                    continue
                rows.append(row)
                rhs.append(b)
                tags.append((cfg.convention, mu, i, dfun.__name__,
                             target[k]))
    coeffs = solve_unique(rows, rhs, tags=tags)
    out = UPlusElement(N, mu, {w: c for w, c in zip(basis, coeffs)
                               if not c.is_zero()})
    _UPSILON_CACHE[key] = out
    return out


def upsilon_inverse_component(cfg, mu):
    """The inverse of the intertwiner is its own coefficient-bar,
    degree by degree; see validate_upsilon for the convolution check
    that certifies this."""
    return upsilon_component(cfg, mu).bar_coeffs()


def _weights_to_height(N, cap):
    """All nonnegative root-coordinate weights of height at most cap,
    sorted by height."""
    out = []

    def rec(prefix, remaining):
        if len(prefix) == N - 1:
            out.append(tuple(prefix))
            return
        for c in range(remaining + 1):
            rec(prefix + [c], remaining - c)

    rec([], max(cap, 0))
    return sorted(out, key=lambda nu: (weight_height(nu), nu))


def validate_upsilon(cfg, cap):
    """Solve every component to the cap and certify the package:
    solvable and unique at each weight, convolution with its
    coefficient-bar equal to delta, and integral action on letter
    tensors (matrix entries in Z[q, q^-1], checked on the smallest
    tensor power of the natural module the component acts on).
    Raises on any failure; returns the number of nonzero components.
    """
    weights = _weights_to_height(cfg.N, cap)
    comps = {nu: upsilon_component(cfg, nu) for nu in weights}
    fam = "F" if cfg.convention == "lower" else "E"
    nonzero = 0
    for mu in weights:
        total = UPlusElement.zero(cfg.N, mu)
        for nu, comp in comps.items():
            rest = tuple(a - b for a, b in zip(mu, nu))
            if any(c < 0 for c in rest):
                continue
            total = total + elt_mul(comp, comps[rest].bar_coeffs())
        expect = (UPlusElement.unit(cfg.N) if weight_height(mu) == 0
                  else UPlusElement.zero(cfg.N, mu))
        if not elements_equal_mod_radical(total, expect):
            raise InconsistentSystemError(
                "inverse convolution fails at %r" % (mu,), tag=mu)
        comp = comps[mu]
        if comp.is_zero():
            continue
        nonzero += 1
        letters = ("V",) * max(_min_letters(cfg.N, mu), 1)
        for label in _all_labels(letters, cfg.N):
            img = element_action(comp, fam, {label: RF_ONE}, letters,
                                 cfg.convention)
            for c in img.values():
                if not c.is_laurent() or not c.as_laurent().is_integral():
                    raise InconsistentSystemError(
                        "non-integral action entry at %r" % (mu,), tag=mu)
    return nonzero


# -- components of the twisted quasi-R matrix ------------------------------------


_THETA_I_CACHE = {}


def theta_i_component(cfg, mu, aux_cap=None):
    """Weight-mu component of the twisted quasi-R matrix of the pair,
    as a finite tuple of (first-leg operator word, coefficient, second
    leg) triples.  The second legs are plain words of one half of the
    algebra at weight mu; the first-leg operator words mix letters of
    the other half with Cartan markers and act through the iterated
    comultiplication of whatever module they are applied to.

    The first-leg grading is infinite in the completion, so the list
    truncates the auxiliary first-leg weights at aux_cap (default:
    height_cap minus ht(mu)); the action is exact on any module whose
    weight spread stays within the truncation.

    Degree zero is the identity pair exactly: the first-leg sum
    collapses by the inverse convolution identity, so it is not
    materialized.
    """
    mu = tuple(mu)
    key = (cfg.N, cfg.kappa, cfg.convention, cfg._sigma_key(), mu, aux_cap)
    hit = _THETA_I_CACHE.get(key)
    if hit is not None:
        return hit
    N = cfg.N
    ht = weight_height(mu)
    if ht > cfg.height_cap:
        raise HeightCapExceededError(
            "twisted component at height %d exceeds cap %d"
            % (ht, cfg.height_cap))
    if ht == 0:
        out = (((), RF_ONE, UPlusElement.unit(N)),)
        _THETA_I_CACHE[key] = out
        return out
    word_fam = "F" if cfg.convention == "lower" else "E"
    theta_first_fam = "E" if cfg.convention == "lower" else "F"
    if aux_cap is None:
        aux_cap = cfg.height_cap - ht
    pairs = []
    # split the component weight between the subword of the
    # comultiplied intertwiner factor that lands on the second leg and
    # the quasi-R factor; everything else stays on the first leg, up
    # to the auxiliary height bound
    for nu in _weights_below(mu):
        theta = theta_component(N, nu, cfg.convention, cfg.height_cap)
        if not theta.pairs:
            continue
        gap = tuple(a - b for a, b in zip(mu, nu))
        inverses = []
        for gamma in _weights_to_height(N, aux_cap):
            if not _theta_symmetric(gamma):
                continue
            inv = upsilon_inverse_component(cfg, gamma)
            for gw, gc in inv.terms.items():
                inverses.append((tuple((word_fam, j) for j in gw), gc))
        for beta_extra in _weights_to_height(N, aux_cap):
            beta = tuple(a + b for a, b in zip(gap, beta_extra))
            if weight_height(beta) > cfg.height_cap:
                continue
            if not _theta_symmetric(beta):
                continue
            ups = upsilon_component(cfg, beta)
            for word, coeff in ups.terms.items():
                for delta_ops, subword in _word_splits(word, gap, word_fam):
                    for tw, telt in theta.pairs:
                        lead = delta_ops + tuple(
                            (theta_first_fam, j) for j in tw)
                        second = elt_mul(
                            UPlusElement.from_word(N, subword), telt)
                        if second.is_zero():
                            continue
                        for inv_ops, gc in inverses:
                            pairs.append((lead + inv_ops, coeff * gc,
                                          second))
    out = tuple(pairs)
    _THETA_I_CACHE[key] = out
    return out


def _theta_symmetric(weight):
    """Whether a weight is invariant under the node mirror i -> N - i.
    Intertwiner components at asymmetric weights vanish identically."""
    n = len(weight)
    return all(weight[j] == weight[n - 1 - j] for j in range(n))


def _feasible_weights(N, k, symmetric=False):
    """Weights whose raising or lowering action on a tensor of k letter
    modules is not forced to vanish.

    A single letter walks a chain using each simple root once, so its
    displacement is a consecutive interval of simple roots; a weight is
    realizable on k letters exactly when it splits into at most k
    intervals, which is the positive-increment count _min_letters.
    """
    out = []

    def rec(prefix, idx):
        if idx == N - 1:
            w = tuple(prefix)
            if 0 < _min_letters(N, w) <= k:
                if not symmetric or _theta_symmetric(w):
                    out.append(w)
            return
        for c in range(k + 1):
            rec(prefix + [c], idx + 1)

    rec([], 0)
    out.sort(key=lambda w: (weight_height(w), w))
    return [(0,) * (N - 1)] + out


def _weights_below(mu):
    """All weights componentwise between 0 and mu, sorted by height."""
    out = []

    def rec(prefix, idx):
        if idx == len(mu):
            out.append(tuple(prefix))
            return
        for c in range(mu[idx] + 1):
            rec(prefix + [c], idx + 1)

    rec([], 0)
    return sorted(out, key=lambda nu: (weight_height(nu), nu))


def _word_splits(word, gap, word_fam):
    """Expand the comultiplication of a word: every subsequence of
    weight `gap` may move to the second leg, leaving a Cartan marker
    in its slot on the first leg."""
    want = sum(gap)
    out = []
    for mask in range(1 << len(word)):
        sub = tuple(word[p] for p in range(len(word)) if mask >> p & 1)
        if len(sub) != want:
            continue
        wt = [0] * (len(gap))
        for j in sub:
            wt[j - 1] += 1
        if tuple(wt) != gap:
            continue
        ops = tuple(("K", word[p], 1) if mask >> p & 1 else (word_fam, word[p])
                    for p in range(len(word)))
        out.append((ops, sub))
    return out


def _apply_half(ops_or_elt, vec, letters, split, cfg, first, family=None):
    """Apply an operator word (first=True) or a word element's family
    action (first=False) to one half of each label, leaving the other
    half untouched.  The comultiplication dressing is computed within
    the half only."""
    half_letters = letters[:split] if first else letters[split:]
    grouped = {}
    for label, c in vec.items():
        fixed = label[split:] if first else label[:split]
        moving = label[:split] if first else label[split:]
        grouped.setdefault(fixed, {})[moving] = c
    out = {}
    for fixed, sub in grouped.items():
        if first:
            img = sub
            for gen in reversed(ops_or_elt):
                img = generator_action(gen, img, half_letters, cfg.N,
                                       cfg.convention)
        else:
            img = element_action(ops_or_elt, family, sub, half_letters,
                                 cfg.convention)
        for moving, c in img.items():
            full = moving + fixed if first else fixed + moving
            nv = out.get(full, RF_ZERO) + c
            if nv.is_zero():
                out.pop(full, None)
            else:
                out[full] = nv
    return out


def theta_i_apply(cfg, component, vec, letters, split):
    """Apply one component produced by theta_i_component to a split
    tensor of letter modules."""
    fam = "F" if cfg.convention == "lower" else "E"
    out = {}
    for ops, coeff, second in component:
        v = _apply_half(second, vec, letters, split, cfg, first=False,
                        family=fam)
        v = _apply_half(ops, v, letters, split, cfg, first=True)
        vec_axpy(out, coeff, v)
    return {k: v for k, v in out.items() if not v.is_zero()}


def _capped(cfg, weights):
    for w in weights:
        if weight_height(w) > cfg.height_cap:
            raise HeightCapExceededError(
                "module needs a component at height %d above cap %d"
                % (weight_height(w), cfg.height_cap))
        yield w


def theta_i_total_apply(cfg, vec, letters, split):
    """The full twisted quasi-R operator on a split tensor module,
    assembled factor by factor: inverse intertwiner on the first half,
    then every quasi-R component, then the comultiplied intertwiner on
    the whole string.  Each graded sum runs over every weight whose
    action on the module is not forced to vanish, so the result is
    exact; if such a weight exceeds the height cap, this raises rather
    than silently truncating."""
    N = cfg.N
    word_fam = "F" if cfg.convention == "lower" else "E"
    n = len(letters)
    v1 = {}
    for gamma in _capped(cfg, _feasible_weights(N, split, symmetric=True)):
        inv = upsilon_inverse_component(cfg, gamma)
        for gw, gc in inv.terms.items():
            ops = tuple((word_fam, j) for j in gw)
            vec_axpy(v1, gc, _apply_half(ops, vec, letters, split, cfg,
                                         first=True))
    v2 = {}
    for nu in _capped(cfg, _feasible_weights(N, min(split, n - split))):
        theta = theta_component(N, nu, cfg.convention, cfg.height_cap)
        comp = theta.apply(v1, letters, split)
        vec_axpy(v2, RF_ONE, comp)
    v3 = {}
    for beta in _capped(cfg, _feasible_weights(N, n, symmetric=True)):
        ups = upsilon_component(cfg, beta)
        for w, c in ups.terms.items():
            vec_axpy(v3, c, word_action(w, word_fam, v2, letters, N,
                                        cfg.convention))
    return {k: v for k, v in v3.items() if not v.is_zero()}
