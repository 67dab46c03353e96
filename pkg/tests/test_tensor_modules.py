"""Shapes, chamber bases, straightening, and Hecke right actions."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qspicb.errors import EmptyBlockError, GroupMismatchError, ShapeError
from qspicb.qsp import QSPConfig, b_action, k_action
from qspicb.ratfun import RF_ONE, RF_ZERO, RatFun, EchelonBasis
from qspicb.laurent import LaurentPoly
from qspicb.tensor_modules import (build_module, coxeter_group_for,
                                   exterior_quotient, f_to_lambda,
                                   hecke_gen_action, hecke_right_action,
                                   i_weight, kl_gen_action, label_in_chamber,
                                   lambda_to_f, levi_to_shape,
                                   module_b_action, module_dimension,
                                   module_k_action, order_lt, project,
                                   section, shape_from_blocks, straighten,
                                   suffix_order_lt, weight_of)
from qspicb.uq_core import _all_labels, alphabet

Q = RatFun.from_laurent(LaurentPoly.q_power(1))
QINV = RatFun.from_laurent(LaurentPoly.q_power(-1))


def vec_eq(u, v):
    keys = set(u) | set(v)
    return all((u.get(k, RF_ZERO) - v.get(k, RF_ZERO)).is_zero()
               for k in keys)


# -- shapes ----------------------------------------------------------------------


def test_levi_to_shape_flip_block():
    shape = levi_to_shape((0, 0), {0})
    assert shape.a0 == 1
    assert shape.blocks == ((0, 1),)
    assert shape.letters() == ("V", "V")


def test_levi_to_shape_plain_block():
    shape = levi_to_shape((0, 0), {1})
    assert shape.a0 == 0
    assert shape.blocks == ((0, 2),)


def test_levi_to_shape_mixed():
    shape = levi_to_shape((0, 0, 1, 1), {1, 3})
    assert shape.a0 == 0
    assert shape.blocks == ((0, 2), (1, 2))
    assert shape.letters() == ("V", "V", "W", "W")
    assert shape.spans() == ((0, 2, "V", False), (2, 4, "W", False))


def test_levi_to_shape_rejects_odd_root():
    with pytest.raises(ShapeError):
        levi_to_shape((0, 1), {1})


def test_levi_to_shape_rejects_bad_sequences():
    with pytest.raises(ShapeError):
        levi_to_shape((), set())
    with pytest.raises(ShapeError):
        levi_to_shape((1, 0), set())
    with pytest.raises(ShapeError):
        levi_to_shape((0, 2), set())
    with pytest.raises(ShapeError):
        levi_to_shape((0, 0), {5})


@given(st.lists(st.integers(min_value=0, max_value=1), min_size=0,
                max_size=4),
       st.data())
def test_shape_roundtrip(tail, data):
    b = tuple([0] + tail)
    allowed = [j for j in range(len(b))
               if j == 0 or b[j - 1] == b[j]]
    levi = frozenset(data.draw(st.sets(st.sampled_from(allowed))
                               if allowed else st.just(frozenset())))
    shape = levi_to_shape(b, levi)
    again = shape_from_blocks(shape.a0, shape.blocks)
    assert again == shape


def test_module_dimensions():
    cfg = QSPConfig(N=4)
    cases = [((0, 0), {1}, 6),       # one exterior square of V
             ((0, 0), {0}, 8),       # flip block of two slots
             ((0, 1), set(), 16),    # V tensor W
             ((0, 0, 0), {0, 1}, 4)]  # flip block of three slots
    for b, levi, dim in cases:
        handle = build_module(levi_to_shape(b, levi), cfg)
        assert len(handle.basis) == dim
        assert module_dimension(handle.shape, 4) == dim


def test_block_too_large_raises():
    with pytest.raises(EmptyBlockError):
        build_module(levi_to_shape((0, 0), {0, 1}), QSPConfig(N=3))
    with pytest.raises(EmptyBlockError):
        build_module(levi_to_shape((0, 0, 0), {1, 2}), QSPConfig(N=2))


def test_chamber_orientation_per_pack():
    shape = levi_to_shape((0, 0), {1})
    low = build_module(shape, QSPConfig(N=2, convention="lower"))
    up = build_module(shape, QSPConfig(N=2, convention="upper"))
    assert low.basis == ((1, -1),)
    assert up.basis == ((-1, 1),)


def test_flip_chamber_sign_per_pack():
    shape = levi_to_shape((0,), {0})
    low = build_module(shape, QSPConfig(N=4, convention="lower"))
    up = build_module(shape, QSPConfig(N=4, convention="upper"))
    assert low.basis == ((-3,), (-1,))
    assert up.basis == ((1,), (3,))


# -- straightening ----------------------------------------------------------------


def test_straighten_swap_factor():
    handle = build_module(levi_to_shape((0, 0), {1}),
                          QSPConfig(N=4, convention="lower"))
    coeff, lab = straighten(handle, (-3, -1))
    assert lab == (-1, -3)
    assert (coeff + Q).is_zero()
    assert straighten(handle, (-1, -1)) is None


def test_straighten_flip_factor_even_rank():
    handle = build_module(levi_to_shape((0,), {0}),
                          QSPConfig(N=4, convention="lower"))
    coeff, lab = straighten(handle, (3,))
    assert lab == (-3,)
    assert (coeff + Q).is_zero()


def test_straighten_flip_factor_odd_rank():
    handle = build_module(levi_to_shape((0,), {0}),
                          QSPConfig(N=5, convention="lower"))
    coeff, lab = straighten(handle, (4,))
    assert lab == (-4,)
    assert (coeff + RF_ONE).is_zero()
    assert straighten(handle, (0,)) is None


def test_straighten_flip_factor_upper():
    handle = build_module(levi_to_shape((0,), {0}),
                          QSPConfig(N=5, convention="upper"))
    coeff, lab = straighten(handle, (-4,))
    assert lab == (4,)
    assert (coeff + QINV).is_zero()


def test_straighten_fixes_chamber():
    cfg = QSPConfig(N=4, convention="lower")
    handle = build_module(levi_to_shape((0, 0, 1), {0}), cfg)
    for lab in handle.basis:
        assert straighten(handle, lab) == (RF_ONE, lab)


def test_section_rejects_non_chamber():
    handle = build_module(levi_to_shape((0, 0), {1}),
                          QSPConfig(N=4, convention="lower"))
    with pytest.raises(ShapeError):
        section(handle, {(-3, -1): RF_ONE})


# -- Hecke actions ----------------------------------------------------------------


@given(st.sampled_from([2, 3, 4, 5]), st.sampled_from(["V", "W"]),
       st.sampled_from(["lower", "upper"]), st.data())
@settings(max_examples=40, deadline=None)
def test_quadratic_relation(N, kind, conv, data):
    letters = (kind, kind)
    labels = list(_all_labels(letters, N))
    f = data.draw(st.sampled_from(labels))
    vec = {f: RF_ONE}
    once = hecke_gen_action(vec, 1, letters, N, conv)
    twice = hecke_gen_action(once, 1, letters, N, conv)
    # (H - q^-1)(H + q) = 0, so H^2 = (q^-1 - q) H + 1
    rhs = {k: v * (QINV - Q) for k, v in once.items()}
    rhs[f] = rhs.get(f, RF_ZERO) + RF_ONE
    assert vec_eq(twice, rhs)


@given(st.sampled_from([2, 3, 4, 5]), st.data())
@settings(max_examples=40, deadline=None)
def test_sign_flip_quadratic(N, data):
    letters = ("V",)
    f = data.draw(st.sampled_from([(v,) for v in alphabet(N)]))
    vec = {f: RF_ONE}
    for conv in ("lower", "upper"):
        once = hecke_gen_action(vec, 0, letters, N, conv)
        twice = hecke_gen_action(once, 0, letters, N, conv)
        if N % 2 and conv == "lower":
            rhs = dict(vec)           # involution at odd rank
        else:
            rhs = {k: v * (QINV - Q) for k, v in once.items()}
            rhs[f] = rhs.get(f, RF_ZERO) + RF_ONE
        assert vec_eq(twice, rhs)


def test_braid_relations():
    N = 3
    letters = ("V", "V", "V")
    for conv in ("lower", "upper"):
        for f in _all_labels(letters, N):
            vec = {f: RF_ONE}
            lhs = rhs = vec
            for i in (1, 2, 1):
                lhs = hecke_gen_action(lhs, i, letters, N, conv)
            for i in (2, 1, 2):
                rhs = hecke_gen_action(rhs, i, letters, N, conv)
            assert vec_eq(lhs, rhs)


def test_sign_flip_braid_relation():
    # rank-two type B braid: 0101 = 1010
    N = 4
    letters = ("V", "V")
    for conv in ("lower", "upper"):
        for f in _all_labels(letters, N):
            lhs = rhs = {f: RF_ONE}
            for i in (0, 1, 0, 1):
                lhs = hecke_gen_action(lhs, i, letters, N, conv)
            for i in (1, 0, 1, 0):
                rhs = hecke_gen_action(rhs, i, letters, N, conv)
            assert vec_eq(lhs, rhs)


def test_hecke_commutes_with_coideal():
    for N, conv, family in [(3, "lower", "B"), (3, "upper", "B"),
                            (4, "lower", "B"), (4, "upper", "A")]:
        cfg = QSPConfig(N=N, convention=conv)
        letters = ("V", "V")
        gens = (1,) if family == "A" else (0, 1)
        for f in _all_labels(letters, N):
            vec = {f: RF_ONE}
            for i in gens:
                hv = hecke_gen_action(vec, i, letters, N, conv)
                for j in cfg.nodes:
                    lhs = b_action(cfg, j, hv, letters)
                    rhs = hecke_gen_action(b_action(cfg, j, vec, letters),
                                           i, letters, N, conv)
                    assert vec_eq(lhs, rhs), (N, conv, f, i, j)


def test_hecke_element_action_matches_generators():
    from qspicb.coxeter import hecke_basis_element, hecke_mul
    N = 3
    letters = ("V", "V")
    group = coxeter_group_for(letters, "B")
    h0 = hecke_basis_element(group, group.apply_gen(group.identity(), 0))
    h1 = hecke_basis_element(group, group.apply_gen(group.identity(), 1))
    prod = hecke_mul(h0, h1)
    for f in _all_labels(letters, N):
        vec = {f: RF_ONE}
        via_elt = hecke_right_action(prod, vec, letters, N, "upper")
        step = hecke_gen_action(vec, 0, letters, N, "upper")
        step = hecke_gen_action(step, 1, letters, N, "upper")
        assert vec_eq(via_elt, step)


def test_hecke_rank_mismatch_raises():
    from qspicb.coxeter import hecke_unit, CoxeterGroup
    group = CoxeterGroup("A", 3)
    with pytest.raises(GroupMismatchError):
        hecke_right_action(hecke_unit(group), {(1, -1): RF_ONE},
                           ("V", "V"), 2)
    with pytest.raises(GroupMismatchError):
        hecke_gen_action({(1, -1): RF_ONE}, 1, ("V", "W"), 2)


def test_ideal_rank_plus_chamber_is_dimension():
    for N, conv, flip in [(4, "lower", False), (5, "lower", True),
                          (5, "upper", True)]:
        cfg = QSPConfig(N=N, convention=conv)
        letters = ("V", "V")
        gens = (0, 1) if flip else (1,)
        ech = EchelonBasis()
        rank = 0
        for f in _all_labels(letters, N):
            for i in gens:
                v = kl_gen_action({f: RF_ONE}, i, letters, N, conv)
                if ech.add(dict(v)) is not None:
                    rank += 1
        shape = (shape_from_blocks(2, ()) if flip
                 else shape_from_blocks(0, ((0, 2),)))
        handle = build_module(shape, cfg)
        assert rank + len(handle.basis) == N * N


def test_quotient_action_well_defined():
    # acting then projecting kills the rewrite ideal
    cfg = QSPConfig(N=4, convention="lower")
    handle = build_module(levi_to_shape((0, 0), {0, 1}), cfg)
    letters = ("V", "V")
    for f in _all_labels(letters, 4):
        for i in (0, 1):
            v = kl_gen_action({f: RF_ONE}, i, letters, 4, "lower")
            assert project(handle, v) == {}
            for j in cfg.nodes:
                assert project(handle, b_action(cfg, j, v, letters)) == {}


def test_module_actions_stay_in_chamber():
    cfg = QSPConfig(N=4, convention="lower")
    handle = build_module(levi_to_shape((0, 0, 1), {0}), cfg)
    vec = {handle.basis[0]: RF_ONE}
    for j in cfg.nodes:
        out = module_b_action(handle, j, vec)
        assert set(out) <= set(handle.basis)
        out = module_k_action(handle, j, vec)
        assert set(out) <= set(handle.basis)


def test_exterior_quotient_shapes():
    cfg = QSPConfig(N=4)
    assert len(exterior_quotient("V", 2, cfg).basis) == 6
    assert len(exterior_quotient("W", 2, cfg).basis) == 6
    assert len(exterior_quotient("V", 1, cfg, flip=True).basis) == 2
    assert len(exterior_quotient("V", 2, cfg, flip=True).basis) == 1
    with pytest.raises(ShapeError):
        exterior_quotient("W", 1, cfg, flip=True)


# -- weights and orders -----------------------------------------------------------


def test_weight_of_counts_signed_values():
    w = weight_of((3, 3, -1), ("V", "V", "W"), 4)
    assert w == {3: 2, -1: -1}


def test_i_weight_is_k_eigenvalue_data():
    cfg = QSPConfig(N=4, convention="lower")
    handle = build_module(levi_to_shape((0, 1), set()), cfg)
    for lab in handle.basis:
        iw = i_weight(lab, handle.letters, cfg)
        vec = {lab: RF_ONE}
        for t, j in enumerate(cfg.nodes):
            out = k_action(cfg, j, vec, handle.letters)
            got = out[lab]
            want = RatFun.from_laurent(LaurentPoly.q_power(iw[t]))
            assert (got - want).is_zero()


def test_order_lt_simple_root_direction():
    # raising by a simple root moves down in the printed order
    up, down = {1: 1}, {-1: 1}
    assert order_lt(up, down, 2, "upper")
    assert not order_lt(down, up, 2, "upper")
    assert order_lt(down, up, 2, "lower")
    assert not order_lt(up, down, 2, "lower")
    assert not order_lt(up, up, 2, "upper")


def test_order_lt_rejects_non_root_differences():
    # a difference outside the root span is incomparable
    assert not order_lt({3: 1}, {1: -1}, 4, "upper")
    assert not order_lt({1: -1}, {3: 1}, 4, "upper")


def test_suffix_order_examples():
    letters = ("V", "V")
    assert suffix_order_lt((1, -1), (-1, 1), letters, 2, "lower")
    assert not suffix_order_lt((-1, 1), (1, -1), letters, 2, "lower")
    assert suffix_order_lt((-1, 1), (1, -1), letters, 2, "upper")
    assert not suffix_order_lt((1, -1), (1, -1), letters, 2, "lower")
    # equal total weight but incomparable tails
    assert not suffix_order_lt((1, -1), (1, -1), letters, 2, "upper")


def test_suffix_order_refines_block_order():
    cfg = QSPConfig(N=4, convention="lower")
    handle = build_module(levi_to_shape((0, 0), {1}), cfg)
    pairs = 0
    for g in handle.basis:
        for f in handle.basis:
            if suffix_order_lt(g, f, handle.letters, 4, "lower"):
                pairs += 1
                assert not suffix_order_lt(f, g, handle.letters, 4,
                                           "lower")
    assert pairs > 0


# -- integer weights --------------------------------------------------------------


@given(st.lists(st.integers(min_value=0, max_value=1), min_size=0,
                max_size=3),
       st.data())
def test_lambda_f_roundtrip(tail, data):
    b = tuple([0] + tail)
    lam = tuple(data.draw(st.lists(st.integers(-6, 6), min_size=len(b),
                                   max_size=len(b))))
    for N in (4, 5):
        f = lambda_to_f(lam, b, N)
        assert f_to_lambda(f, b, N) == lam


def test_lambda_to_f_stagger():
    # adjacent equal entries of the same kind stay strictly separated
    assert lambda_to_f((0, 0), (0, 0), 4) == (-1, -3)
    assert lambda_to_f((0, 0), (0, 1), 4) == (-1, 1)
    assert lambda_to_f((0, 0, 0), (0, 1, 1), 4) == (-1, 1, 3)


def test_f_to_lambda_parity_check():
    with pytest.raises(ShapeError):
        f_to_lambda((0,), (0,), 4)


def test_dominance_matches_chamber():
    cfg = QSPConfig(N=4, convention="lower")
    handle = build_module(levi_to_shape((0, 0), {1}), cfg)
    for l1 in range(-2, 3):
        for l2 in range(-2, 3):
            f = lambda_to_f((l1, l2), (0, 0), 4)
            in_alphabet = all(v in alphabet(4) for v in f)
            if not in_alphabet:
                continue
            assert label_in_chamber(handle, f) == (l1 >= l2)


def test_flip_dominance_matches_chamber():
    cfg = QSPConfig(N=4, convention="lower")
    handle = build_module(levi_to_shape((0,), {0}), cfg)
    for l1 in range(-2, 3):
        f = lambda_to_f((l1,), (0,), 4)
        if f[0] not in alphabet(4):
            continue
        assert label_in_chamber(handle, f) == (l1 <= 0)
