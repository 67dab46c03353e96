"""Coideal generators, intertwiner solver, twisted quasi-R components."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qspicb.errors import InconsistentSystemError
from qspicb.laurent import LaurentPoly, ONE
from qspicb.qsp import (QSPConfig, _apply_half, _feasible_weights, b_action,
                        k_action, theta_i_apply, theta_i_component,
                        theta_i_total_apply, upsilon_component,
                        upsilon_inverse_component, validate_upsilon)
from qspicb.ratfun import RF_ONE, RF_ZERO, RatFun, vec_axpy
from qspicb.uq_core import (UPlusElement, alphabet, dp_factor, elt_mul,
                            elements_equal_mod_radical, label_eps_weight)


def lp(d):
    return LaurentPoly(d)


def rf(num, den=None):
    return RatFun(lp(num), lp(den) if den is not None else None)


def vec_eq(a, b):
    keys = set(a) | set(b)
    return all((a.get(k, RF_ZERO) - b.get(k, RF_ZERO)).is_zero()
               for k in keys)


QQ = rf({1: 1, -1: -1})    # q - q^-1


# -- configuration ---------------------------------------------------------------


def test_config_validation():
    with pytest.raises(ValueError):
        QSPConfig(N=1)
    with pytest.raises(ValueError):
        QSPConfig(N=4, kappa=2)
    with pytest.raises(ValueError):
        QSPConfig(N=4, convention="sideways")
    cfg = QSPConfig(N=4)
    assert cfg.nodes == (1, 2, 3)
    assert cfg.theta(1) == 3 and cfg.theta(2) == 2
    assert cfg.fixed_node == 2
    assert QSPConfig(N=5).fixed_node is None
    assert QSPConfig(N=2).lattice == "qZq"
    assert QSPConfig(N=2, convention="upper").lattice == "qinvZqinv"


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 7), st.integers(0, 1),
       st.sampled_from(["lower", "upper"]), st.integers(2, 12))
def test_config_json_roundtrip(N, kappa, convention, cap):
    cfg = QSPConfig(N=N, kappa=kappa, convention=convention, height_cap=cap)
    assert QSPConfig.from_json_dict(cfg.to_json_dict()) == cfg


def test_config_json_lattice_mismatch():
    data = QSPConfig(N=4).to_json_dict()
    data["lattice"] = "qinvZqinv"
    with pytest.raises(ValueError):
        QSPConfig.from_json_dict(data)


def test_varsigma_table():
    q = LaurentPoly.q_power
    assert QSPConfig(N=2).varsigma(1) == q(1)
    assert QSPConfig(N=2, convention="upper").varsigma(1) == q(-1)
    assert [QSPConfig(N=3).varsigma(i) for i in (1, 2)] == [q(-1), ONE]
    assert [QSPConfig(N=3, convention="upper").varsigma(i)
            for i in (1, 2)] == [q(1), ONE]
    assert [QSPConfig(N=4).varsigma(i) for i in (1, 2, 3)] \
        == [ONE, q(1), ONE]
    assert [QSPConfig(N=5).varsigma(i) for i in (1, 2, 3, 4)] \
        == [ONE, q(-1), ONE, ONE]


# -- generator actions -----------------------------------------------------------


def test_b_action_rank_one_matrix():
    # both packs act on the two-dimensional letter module by
    # [[q^-1, 1], [1, q]] in the basis (top, bottom)
    for convention in ("lower", "upper"):
        cfg = QSPConfig(N=2, convention=convention)
        top = b_action(cfg, 1, {(1,): RF_ONE}, ("V",))
        bot = b_action(cfg, 1, {(-1,): RF_ONE}, ("V",))
        assert vec_eq(top, {(1,): rf({-1: 1}), (-1,): RF_ONE})
        assert vec_eq(bot, {(1,): RF_ONE, (-1,): rf({1: 1})})


def test_b_action_kappa_zero_swaps():
    for convention in ("lower", "upper"):
        cfg = QSPConfig(N=2, kappa=0, convention=convention)
        assert vec_eq(b_action(cfg, 1, {(1,): RF_ONE}, ("V",)),
                      {(-1,): RF_ONE})
        assert vec_eq(b_action(cfg, 1, {(-1,): RF_ONE}, ("V",)),
                      {(1,): RF_ONE})


def test_b_action_odd_rank_nilpotent_corner():
    # N = 3: no Cartan tail, and the mirrored lowering only connects
    # the middle letter to the ends
    cfg = QSPConfig(N=3)
    assert b_action(cfg, 1, {(2,): RF_ONE}, ("V",)) == {}
    assert vec_eq(b_action(cfg, 1, {(0,): RF_ONE}, ("V",)),
                  {(2,): RF_ONE, (-2,): RF_ONE})
    assert b_action(cfg, 1, {(-2,): RF_ONE}, ("V",)) == {}


def test_k_action_diagonal():
    cfg = QSPConfig(N=4)
    expected = {3: 1, 1: -1, -1: -1, -3: 1}
    for val, e in expected.items():
        assert vec_eq(k_action(cfg, 1, {(val,): RF_ONE}, ("V",)),
                      {(val,): rf({e: 1})})
        # the fixed node ratio is trivial, and the mirror inverts
        assert vec_eq(k_action(cfg, 2, {(val,): RF_ONE}, ("V",)),
                      {(val,): RF_ONE})
        assert vec_eq(k_action(cfg, 3, {(val,): RF_ONE}, ("V",)),
                      {(val,): rf({-e: 1})})


# -- the intertwiner of the two bar involutions ----------------------------------


def test_upsilon_rank_one_frozen():
    cfg = QSPConfig(N=2)
    assert upsilon_component(cfg, (0,)).terms == {(): RF_ONE}
    assert upsilon_component(cfg, (1,)).terms == {(1,): QQ}
    assert upsilon_component(cfg, (2,)).terms == {
        (1, 1): rf({4: 1, 2: -1}, {2: 1, 0: 1})}
    assert upsilon_component(cfg, (3,)).terms == {
        (1, 1, 1): rf({5: 1, 3: -2, 1: 1}, {2: 1, 0: 1})}
    up = QSPConfig(N=2, convention="upper")
    assert upsilon_component(up, (1,)).terms == {(1,): rf({1: -1, -1: 1})}
    assert upsilon_component(up, (2,)).terms == {
        (1, 1): rf({0: -1, -2: 1}, {2: 1, 0: 1})}


def test_upsilon_divided_power_integral():
    # raw word coefficients are rational, but the divided-power
    # normalization lands in Z[q, q^-1]
    frozen = {
        ("lower", 2): lp({3: 1, 1: -1}),
        ("lower", 3): lp({6: 1, 4: -1, 0: -1, -2: 1}),
        ("lower", 4): lp({10: 1, 8: -1, 4: -1, 2: 1}),
        ("upper", 2): lp({-1: -1, -3: 1}),
        ("upper", 3): lp({2: 1, 0: -1, -4: -1, -6: 1}),
        ("upper", 4): lp({-2: 1, -4: -1, -8: -1, -10: 1}),
    }
    for (convention, k), want in frozen.items():
        cfg = QSPConfig(N=2, convention=convention)
        c = upsilon_component(cfg, (k,)).terms[(1,) * k]
        dp = c * dp_factor((1,) * k)
        assert dp.is_laurent()
        assert dp.as_laurent() == want


def test_upsilon_higher_rank_frozen():
    cfg3 = QSPConfig(N=3)
    assert upsilon_component(cfg3, (1, 1)).terms == {(1, 2): QQ}
    cfg4 = QSPConfig(N=4)
    assert upsilon_component(cfg4, (0, 1, 0)).terms == {(2,): QQ}
    assert upsilon_component(cfg4, (1, 0, 1)).terms == {(1, 3): QQ}
    assert upsilon_component(cfg4, (1, 1, 1)).terms == {
        (1, 2, 3): QQ, (3, 2, 1): QQ,
        (1, 3, 2): rf({0: -1, -2: 1}), (2, 1, 3): rf({0: -1, -2: 1})}


def test_upsilon_mirror_asymmetric_weights_vanish():
    for cfg, mu in ((QSPConfig(N=3), (1, 0)),
                    (QSPConfig(N=3), (0, 1)),
                    (QSPConfig(N=4), (1, 0, 0)),
                    (QSPConfig(N=4, convention="upper"), (2, 1, 0))):
        assert upsilon_component(cfg, mu).terms == {}


def test_upsilon_inverse_is_termwise_bar():
    cfg = QSPConfig(N=4)
    comp = upsilon_component(cfg, (1, 1, 1))
    inv = upsilon_inverse_component(cfg, (1, 1, 1))
    assert inv.terms == {w: c.bar() for w, c in comp.terms.items()}


def test_upsilon_convolution_inverse():
    # the components of the inverse really convolve to the identity
    cfg = QSPConfig(N=2)
    for k in range(5):
        acc = UPlusElement.zero(2, (k,))
        for j in range(k + 1):
            acc = acc + elt_mul(upsilon_component(cfg, (j,)),
                                upsilon_inverse_component(cfg, (k - j,)))
        want = UPlusElement.unit(2) if k == 0 else UPlusElement.zero(2, (k,))
        assert elements_equal_mod_radical(acc, want)


def test_validate_upsilon_both_packs():
    for convention in ("lower", "upper"):
        assert validate_upsilon(
            QSPConfig(N=2, convention=convention), 5) >= 5
        assert validate_upsilon(
            QSPConfig(N=3, convention=convention, height_cap=6), 4) >= 2
        assert validate_upsilon(
            QSPConfig(N=4, convention=convention), 3) >= 3


class _FlatSigma(QSPConfig):
    """Deliberately wrong scalars: every node carries 1."""

    def varsigma(self, i):
        return ONE


def test_wrong_varsigma_is_rejected():
    with pytest.raises(InconsistentSystemError):
        upsilon_component(_FlatSigma(N=2), (2,))
    with pytest.raises(InconsistentSystemError):
        upsilon_component(_FlatSigma(N=3, convention="upper"), (1, 1))


# -- twisted quasi-R components --------------------------------------------------


def test_theta_i_degree_zero_is_identity_pair():
    comp = theta_i_component(QSPConfig(N=2), (0,))
    assert len(comp) == 1
    ops, coeff, second = comp[0]
    assert ops == () and coeff == RF_ONE
    assert second.terms == {(): RF_ONE}


def test_theta_i_second_leg_outruns_module():
    # a component whose second leg needs more room than the module has
    # acts as zero
    cfg = QSPConfig(N=2)
    comp = theta_i_component(cfg, (2,))
    for label in itertools.product(alphabet(2), repeat=2):
        assert theta_i_apply(cfg, comp, {label: RF_ONE}, ("V", "V"), 1) == {}


def _weight_drop(base, other):
    keys = set(base) | set(other)
    return tuple(sorted((v, base.get(v, 0) - other.get(v, 0))
                        for v in keys
                        if base.get(v, 0) != other.get(v, 0)))


def _graded_blocks(cfg, vec, letters, split):
    """Split the twisted operator's output by the weight drop of the
    trailing letters, the grading the component list is indexed by."""
    total = theta_i_total_apply(cfg, vec, letters, split)
    label = next(iter(vec))
    base = label_eps_weight(label[split:], letters[split:], cfg.N)
    blocks = {}
    for out, c in total.items():
        w = label_eps_weight(out[split:], letters[split:], cfg.N)
        blocks.setdefault(_weight_drop(base, w), {})[out] = c
    return blocks


def _root_shift(cfg, mu):
    """Trailing-letter weight drop realized by a second leg at mu."""
    sign = 1 if cfg.convention == "lower" else -1
    shift = {}
    for j, m in enumerate(mu, start=1):
        hi = cfg.N + 1 - 2 * j
        lo = cfg.N - 1 - 2 * j
        shift[hi] = shift.get(hi, 0) + sign * m
        shift[lo] = shift.get(lo, 0) - sign * m
    return tuple(sorted((v, c) for v, c in shift.items() if c))


def test_theta_i_component_matches_factor_assembly():
    # the pair list applied grade by grade agrees with multiplying the
    # three factors of the twisted operator directly on the module
    for convention in ("lower", "upper"):
        cfg = QSPConfig(N=2, convention=convention)
        letters = ("V", "V")
        for label in itertools.product(alphabet(2), repeat=2):
            vec = {label: RF_ONE}
            blocks = _graded_blocks(cfg, vec, letters, 1)
            for mu in ((1,), (2,)):
                got = theta_i_apply(cfg, theta_i_component(cfg, mu), vec,
                                    letters, 1)
                want = blocks.get(_root_shift(cfg, mu), {})
                assert vec_eq(got, want), (convention, label, mu)


def test_theta_i_degree_zero_block_is_identity():
    for convention in ("lower", "upper"):
        cfg = QSPConfig(N=2, convention=convention)
        for letters in (("V", "V"), ("V", "W"), ("W", "W")):
            for label in itertools.product(alphabet(2), repeat=2):
                vec = {label: RF_ONE}
                blocks = _graded_blocks(cfg, vec, letters, 1)
                assert vec_eq(blocks.get((), {}), vec)


def _psi_linear(cfg, vec, letters):
    """Linear part of the full-algebra bar involution of a tensor of
    letter modules (coefficients are conjugated by the caller)."""
    from qspicb.uq_core import theta_component

    if len(letters) <= 1:
        return vec
    grouped = {}
    for label, c in vec.items():
        grouped.setdefault(label[:1], {})[label[1:]] = c
    inner = {}
    for head, sub in grouped.items():
        img = _psi_linear(cfg, sub, letters[1:])
        for tail, c in img.items():
            key = head + tail
            inner[key] = inner.get(key, RF_ZERO) + c
    out = {}
    for nu in _feasible_weights(cfg.N, 1):
        comp = theta_component(cfg.N, nu, cfg.convention, cfg.height_cap)
        vec_axpy(out, RF_ONE, comp.apply(inner, letters, 1))
    return {k: c for k, c in out.items() if not c.is_zero()}


def _twisted_involution(cfg, letters, split):
    """The antilinear involution of the split module assembled from
    the factorwise involutions and the twisted quasi-R operator."""
    word_fam = "F" if cfg.convention == "lower" else "E"

    def T(v):
        barred = {k: c.bar() for k, c in v.items()}
        grouped = {}
        for label, c in barred.items():
            grouped.setdefault(label[:split], {})[label[split:]] = c
        staged = {}
        for head, sub in grouped.items():
            img = _psi_linear(cfg, sub, letters[split:])
            for tail, c in img.items():
                key = head + tail
                staged[key] = staged.get(key, RF_ZERO) + c
        grouped = {}
        for label, c in staged.items():
            grouped.setdefault(label[split:], {})[label[:split]] = c
        staged = {}
        for tail, sub in grouped.items():
            img = _psi_linear(cfg, sub, letters[:split])
            for head, c in img.items():
                key = head + tail
                staged[key] = staged.get(key, RF_ZERO) + c
        dressed = {}
        for beta in _feasible_weights(cfg.N, split, symmetric=True):
            ups = upsilon_component(cfg, beta)
            for w, c in ups.terms.items():
                ops = tuple((word_fam, j) for j in w)
                vec_axpy(dressed, c,
                         _apply_half(ops, staged, letters, split, cfg,
                                     first=True))
        dressed = {k: c for k, c in dressed.items() if not c.is_zero()}
        return theta_i_total_apply(cfg, dressed, letters, split)

    return T


def test_theta_i_twisted_involution_squares_to_identity():
    for convention in ("lower", "upper"):
        cfg = QSPConfig(N=2, convention=convention)
        for letters in (("V", "V"), ("V", "W"), ("W", "V"), ("W", "W")):
            T = _twisted_involution(cfg, letters, 1)
            for label in itertools.product(alphabet(2), repeat=2):
                vec = {label: RF_ONE}
                assert vec_eq(T(T(vec)), vec), (convention, letters, label)


def test_theta_i_twisted_involution_commutes_with_generators():
    for convention in ("lower", "upper"):
        cfg = QSPConfig(N=2, convention=convention)
        letters = ("V", "W")
        T = _twisted_involution(cfg, letters, 1)
        for label in itertools.product(alphabet(2), repeat=2):
            vec = {label: RF_ONE}
            lhs = T(b_action(cfg, 1, vec, letters))
            rhs = b_action(cfg, 1, T(vec), letters)
            assert vec_eq(lhs, rhs), (convention, label)


def test_theta_i_involution_split_choice_immaterial():
    cfg = QSPConfig(N=2)
    letters = ("V", "W", "V")
    T1 = _twisted_involution(cfg, letters, 1)
    T2 = _twisted_involution(cfg, letters, 2)
    for label in itertools.product(alphabet(2), repeat=3):
        vec = {label: RF_ONE}
        assert vec_eq(T1(vec), T2(vec)), label


# -- weight feasibility ----------------------------------------------------------


def test_feasible_weights_interval_rule():
    one = _feasible_weights(4, 1)
    assert (1, 0, 1) not in one
    assert (1, 1, 0) in one and (0, 1, 1) in one and (1, 1, 1) in one
    two = _feasible_weights(4, 2)
    assert (1, 0, 1) in two and (2, 2, 2) in two
    assert (2, 1, 2) not in two and (3, 0, 0) not in two
    assert (2, 1, 2) in _feasible_weights(4, 3)
    sym = _feasible_weights(4, 2, symmetric=True)
    assert (1, 0, 0) not in sym and (1, 0, 1) in sym
    assert all(w == tuple(reversed(w)) for w in sym)
    assert one[0] == (0, 0, 0)
