"""Dev: coideal action descends to mixed-shape quotients."""
import sys, itertools
sys.path.insert(0, "src")
from qspicb.qsp import QSPConfig, b_action
from qspicb.tensor_modules import (build_module, levi_to_shape, kl_gen_action,
                                   project, module_dimension)
from qspicb.uq_core import _all_labels
from qspicb.ratfun import RF_ONE, RF_ZERO

def mixed_ideal_vectors(shape, cfg):
    """Ambient vectors spanning the full rewrite ideal: block ideal
    tensored with arbitrary labels elsewhere."""
    letters = shape.letters()
    N = cfg.N
    out = []
    for start, stop, kind, is_flip in shape.spans():
        seg_letters = letters[start:stop]
        n = stop - start
        gens = range(0 if is_flip else 1, n)
        if not gens:
            gens = [0] if is_flip else []
        rest_left = list(_all_labels(letters[:start], N)) or [()]
        rest_right = list(_all_labels(letters[stop:], N)) or [()]
        for f in _all_labels(seg_letters, N):
            for i in gens:
                v = kl_gen_action({f: RF_ONE}, i, seg_letters, N, cfg.convention)
                if not v:
                    continue
                for L in rest_left:
                    for R in rest_right:
                        out.append({L + lab + R: c for lab, c in v.items()})
    return out

def check(b, levi, N, conv):
    cfg = QSPConfig(N=N, convention=conv)
    shape = levi_to_shape(b, levi)
    handle = build_module(shape, cfg)
    bad = 0
    vecs = mixed_ideal_vectors(shape, cfg)
    for v in vecs:
        if project(handle, v):
            bad += 1
        for j in cfg.nodes:
            if project(handle, b_action(cfg, j, v, shape.letters())):
                bad += 1
    print(f"{'OK ' if not bad else 'FAIL'} b={b} levi={set(levi)} N={N} {conv}: "
          f"dim={len(handle.basis)} ideal_vecs={len(vecs)} bad={bad}")
    return bad

tot = 0
for conv in ("lower", "upper"):
    tot += check((0,0), {0}, 4, conv)       # flip block of 2
    tot += check((0,0), {1}, 4, conv)       # A-block of 2
    tot += check((0,1), set(), 3, conv)     # V then W singletons
    tot += check((0,0,1), {1}, 3, conv)     # A-block of 2 then W
    tot += check((0,0,1), {0}, 3, conv)     # flip 1... levi {0}: a0=1, then V, W
    tot += check((0,1,1), {2}, 4, conv)     # V then W-block of 2
    tot += check((0,0,0), {0,1}, 4, conv)   # flip block of 2 then V
    tot += check((0,0,0), {0,1}, 5, conv)   # odd rank mixed
print("ALL OK" if tot == 0 else "FAILURES")
