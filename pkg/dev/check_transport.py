"""Dev: transport-built coideal involution - span, involutivity,
integrality, ideal stability, dressing oracle at N=2."""
import sys, time
sys.path.insert(0, "src")
from qspicb.qsp import QSPConfig, b_action, theta_i_total_apply
from qspicb.bar_canonical import (ambient_psi_i_columns, ambient_psi_columns,
                                  letter_bar_columns, psi_bar, psi_i_bar,
                                  canonical_solve, _to_rat_vec)
from qspicb.tensor_modules import (build_module, levi_to_shape, project,
                                   kl_gen_action)
from qspicb.uq_core import _all_labels
from qspicb.ratfun import RF_ONE, RF_ZERO, vec_axpy

def vec_eq(u, v):
    keys = set(u) | set(v)
    return all((u.get(k, RF_ZERO) - v.get(k, RF_ZERO)).is_zero() for k in keys)

def bar_apply(cols, vec):
    out = {}
    for f, c in vec.items():
        vec_axpy(out, c.bar(), cols[f])
    return {k: v for k, v in out.items() if not v.is_zero()}

print("== ambient transport: build + involutivity + commutation ==")
for conv in ("lower", "upper"):
    for N, letters in [(2, ("V","V")), (2, ("V","W")), (3, ("V","V")),
                       (4, ("V","V")), (4, ("V","W")), (2, ("V","V","V")),
                       (3, ("V","W","V"))]:
        t0 = time.time()
        cols = ambient_psi_i_columns(QSPConfig(N=N, convention=conv), letters)
        cfg = QSPConfig(N=N, convention=conv)
        ok_inv = all(vec_eq(bar_apply(cols, cols[f]), {f: RF_ONE})
                     for f in cols)
        ok_comm = True
        for f in list(cols)[:6]:
            for i in cfg.nodes:
                lhs = bar_apply(cols, b_action(cfg, i, {f: RF_ONE}, letters))
                rhs = b_action(cfg, i, cols[f], letters)
                if not vec_eq(lhs, rhs):
                    ok_comm = False
        ok_int = all(c.is_laurent() for col in cols.values()
                     for c in col.values())
        print(f"N={N} {conv} {letters}: inv={ok_inv} comm={ok_comm} "
              f"laurent={ok_int}  ({time.time()-t0:.2f}s)")

print("== dressing oracle at N=2: transport == Theta^i on (psi_V x psi) ==")
for conv in ("lower", "upper"):
    N = 2
    letters = ("V", "V")
    cfg = QSPConfig(N=N, convention=conv)
    cols = ambient_psi_i_columns(cfg, letters)
    psic = ambient_psi_columns(cfg, letters)
    lb = letter_bar_columns(cfg, "V")
    ok = True
    for f in _all_labels(letters, N):
        # psi^i(e_f) = Theta^i ( (psi_1 x id) psi-ish )  -- assemble:
        # first-slot single-letter involution, then plain psi on the rest
        # is folded in by building psi of the full tensor with first slot
        # already dressed: psi^i = Theta^i_total ( psi_1 (x) psi_rest ).
        # psi_rest on slot 2 is trivial; psi of the pair handles the
        # cross-corrections, so compare against
        # Theta^i_total((psi_1 x 1) applied then Theta on split 1... )
        # Simplest exact oracle: psi^i = theta_i_total o (psi_1 x 1) o
        # (Theta-recursion with first slot frozen) -- for 2 slots:
        # psi(x (x) y) = Theta((x (x) y)) since letters bar-fixed,
        # then first-slot dressing, then Theta^i_total? No: the clean
        # identity is psi^i = Theta^i o (psi^i_V (x) psi_N).
        first = {f: RF_ONE}
        # (psi^i_V (x) psi_N): dress slot 1, psi on slot 2 alone = id
        dressed = {}
        for lab, c in first.items():
            for l2, c2 in lb[lab[0]].items():
                dressed[l2 + lab[1:]] = dressed.get(l2 + lab[1:], RF_ZERO) + c * c2
        got = theta_i_total_apply(cfg, dressed, letters, 1)
        if not vec_eq(got, cols[f]):
            ok = False
            print(f"  MISMATCH {conv} f={f}:")
            print(f"    transport: {[(k, str(v)) for k, v in cols[f].items()]}")
            print(f"    dressed:   {[(k, str(v)) for k, v in got.items()]}")
    print(f"N=2 {conv}: dressing oracle {'OK' if ok else 'FAIL'}")

print("== ideal stability of psi and psi^i ==")
for conv in ("lower", "upper"):
    for N, b, levi in [(4, (0,0), {1}), (4, (0,0), {0,1}), (3, (0,0,1), {1})]:
        cfg = QSPConfig(N=N, convention=conv)
        shape = levi_to_shape(b, levi)
        handle = build_module(shape, cfg)
        letters = shape.letters()
        icols = ambient_psi_i_columns(cfg, letters)
        ok_i = True
        spans = shape.spans()
        for start, stop, kind, is_flip in spans:
            seg = letters[start:stop]
            gens = range(0 if is_flip else 1, stop - start)
            for f0 in _all_labels(seg, N):
                for i in gens:
                    rel = kl_gen_action({f0: RF_ONE}, i, seg, N, conv)
                    for L in (list(_all_labels(letters[:start], N)) or [()]):
                        for R in (list(_all_labels(letters[stop:], N)) or [()]):
                            v = {L + lab + R: c for lab, c in rel.items()}
                            img = bar_apply(icols, v)
                            if project(handle, img):
                                ok_i = False
        msg = f"N={N} {conv} b={b} levi={set(levi)}: psi^i ideal-stable={ok_i}"
        if shape.a0 == 0:
            pcols = ambient_psi_columns(cfg, letters)
            ok_p = True
            for start, stop, kind, is_flip in spans:
                seg = letters[start:stop]
                for f0 in _all_labels(seg, N):
                    for i in range(1, stop - start):
                        rel = kl_gen_action({f0: RF_ONE}, i, seg, N, conv)
                        for L in (list(_all_labels(letters[:start], N)) or [()]):
                            for R in (list(_all_labels(letters[stop:], N)) or [()]):
                                v = {L + lab + R: c for lab, c in rel.items()}
                                if project(handle, bar_apply(pcols, v)):
                                    ok_p = False
            msg += f" psi ideal-stable={ok_p}"
        print(msg)

print("== quotient involutions + a first canonical solve ==")
cfg = QSPConfig(N=2, convention="lower")
handle = build_module(levi_to_shape((0, 0), set()), cfg)
op = psi_i_bar(handle)
print("psi^i on V(x)V columns:")
for f in handle.basis:
    print(f"  {f}: {[(g, str(c)) for g, c in op.columns[f].items()]}")
T = canonical_solve(op)
print("canonical transition:")
for f in T.col_labels:
    print(f"  {f}: {[(g, str(T.entry(g, f))) for g in T.row_labels if not T.entry(g, f).is_zero()]}")
