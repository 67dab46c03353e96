"""Dev: Hecke-vs-coideal commutation, ideal stability, ranks."""
import sys
sys.path.insert(0, "src")
from qspicb.qsp import QSPConfig, b_action, k_action
from qspicb.tensor_modules import (hecke_gen_action, kl_gen_action,
                                   shape_from_blocks, build_module,
                                   straighten, module_dimension)
from qspicb.uq_core import _all_labels
from qspicb.ratfun import RF_ONE, RF_ZERO, EchelonBasis

def vec_eq(u, v):
    keys = set(u) | set(v)
    return all((u.get(k, RF_ZERO) - v.get(k, RF_ZERO)).is_zero() for k in keys)

def check_commute(N, conv, kind, n, family):
    cfg = QSPConfig(N=N, convention=conv)
    letters = (kind,) * n
    gens = range(1, n) if family == "A" else range(0, n)
    bad = 0
    for f in _all_labels(letters, N):
        vec = {f: RF_ONE}
        for i in gens:
            hv = hecke_gen_action(vec, i, letters, N, conv)
            for j in cfg.nodes:
                if not vec_eq(b_action(cfg, j, hv, letters),
                              hecke_gen_action(b_action(cfg, j, vec, letters), i, letters, N, conv)):
                    bad += 1
                if not vec_eq(k_action(cfg, j, hv, letters),
                              hecke_gen_action(k_action(cfg, j, vec, letters), i, letters, N, conv)):
                    bad += 1
    return bad

def check_ideal(N, conv, kind, n, family, flip):
    """Ideal = span of KL-generator images; check coideal stability,
    rank + chamber count = dim, and straighten kills the ideal."""
    cfg = QSPConfig(N=N, convention=conv)
    letters = (kind,) * n
    gens = range(1, n) if family == "A" else range(0, n)
    ech = EchelonBasis()
    ideal = []
    for f in _all_labels(letters, N):
        for i in gens:
            v = kl_gen_action({f: RF_ONE}, i, letters, N, conv)
            if ech.add(dict(v)) is not None:
                ideal.append(v)
    dim = len(list(_all_labels(letters, N)))
    if flip:
        shape = shape_from_blocks(n, ())
    else:
        shape = shape_from_blocks(0, ((0 if kind == "V" else 1, n),))
    handle = build_module(shape, cfg)
    ok_rank = (len(handle.basis) + len(ideal) == dim)
    ok_dim = (len(handle.basis) == module_dimension(shape, N))
    # coideal stability
    ok_stab = True
    for v in ideal:
        for j in cfg.nodes:
            bv = b_action(cfg, j, v, letters)
            resid, _, _ = ech.reduce(dict(bv))
            if resid:
                ok_stab = False
    # straighten kills ideal and fixes chamber
    ok_str = True
    for v in ideal:
        img = {}
        for lab, c in v.items():
            hit = straighten(handle, lab)
            if hit is None:
                continue
            fct, lab2 = hit
            nv = img.get(lab2, RF_ZERO) + c * fct
            if nv.is_zero(): img.pop(lab2, None)
            else: img[lab2] = nv
        if img:
            ok_str = False
    for lab in handle.basis:
        if straighten(handle, lab) != (RF_ONE, lab):
            ok_str = False
    return ok_rank, ok_dim, ok_stab, ok_str

print("== commutation ==")
tot = 0
for conv in ("lower", "upper"):
    for N, kind, n, family in [(3,"V",2,"B"), (5,"V",2,"B"), (3,"V",1,"B"),
                               (5,"V",1,"B"), (3,"V",3,"B")]:
        bad = check_commute(N, conv, kind, n, family)
        tot += bad
        print(f"{'OK ' if not bad else 'FAIL'} conv={conv} N={N} {kind}^{n} {family}  bad={bad}")
print("total bad:", tot)

print("== ideal/rank/stability/straighten ==")
cases = [ (2,"V",2,"A",False), (3,"V",2,"A",False), (4,"V",2,"A",False),
          (4,"V",3,"A",False), (3,"W",2,"A",False), (4,"W",2,"A",False),
          (2,"V",1,"B",True), (4,"V",1,"B",True), (3,"V",1,"B",True),
          (5,"V",1,"B",True), (4,"V",2,"B",True), (6,"V",2,"B",True),
          (5,"V",2,"B",True),
          (6,"V",3,"B",True) ]

allok = True
for N, kind, n, family, flip in cases:
    for conv in ("lower", "upper"):
        r = check_ideal(N, conv, kind, n, family, flip)
        tag = "OK " if all(r) else "FAIL"
        if not all(r): allok = False
        print(f"{tag} conv={conv} N={N} {kind}^{n} {family} flip={flip} rank/dim/stab/straighten={r}")
print("ALL OK" if allok and tot == 0 else "FAILURES PRESENT")
