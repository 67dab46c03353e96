"""Dev: i-canonical transition vs type-B parabolic KL oracle (Deodhar form)."""
import sys, time
from collections import deque
from itertools import combinations
sys.path.insert(0, "src")
from qspicb.qsp import QSPConfig
from qspicb.bar_canonical import psi_i_bar, canonical_solve
from qspicb.coxeter import CoxeterGroup, kl_element, reduced_word, length
from qspicb.tensor_modules import (build_module, levi_to_shape, project,
                                   hecke_right_action)
from qspicb.ratfun import RF_ONE, RatFun

def right_step(lab, i):
    if i == 0:
        return (-lab[0],) + lab[1:]
    out = list(lab)
    out[i - 1], out[i] = out[i], out[i - 1]
    return tuple(out)

def orbit_rep(f, W):
    f0 = tuple(sorted((-abs(v) for v in f), reverse=True))
    seen = {f0}
    queue = deque([(f0, W.identity())])
    while queue:
        lab, w = queue.popleft()
        if lab == f:
            return f0, w
        for i in W.gen_labels():
            nl = right_step(lab, i)
            if nl not in seen:
                seen.add(nl)
                queue.append((nl, W.apply_gen(w, i)))
    raise RuntimeError("orbit walk missed %r" % (f,))

def stabilizer_gens(f0):
    K = []
    if f0[0] == 0:
        K.append(0)
    for i in range(1, len(f0)):
        if f0[i - 1] == f0[i]:
            K.append(i)
    return K

def longest_in_parabolic(W, K):
    best = W.identity()
    seen = {best}
    queue = deque([best])
    while queue:
        w = queue.popleft()
        if length(W, w) > length(W, best):
            best = w
        for j in K:
            v = W.apply_gen(w, j)
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return best

def left_mul(W, u, x):
    for j in reversed(reduced_word(W, u)):
        x = W.apply_gen_left(x, j)
    return x

total_bad = 0
for s in (1, 2, 3):
    N = 2 * s
    W = CoxeterGroup("B", s)
    cfg = QSPConfig(N=N, convention="lower")
    letters = ("V",) * s
    for r in range(s + 1):
        for J in combinations(range(s), r):
            t0 = time.time()
            shape = levi_to_shape((0,) * s, set(J))
            handle = build_module(shape, cfg)
            T = canonical_solve(psi_i_bar(handle))
            bad = 0
            for f in handle.basis:
                f0, x = orbit_rep(f, W)
                K = stabilizer_gens(f0)
                wk = longest_in_parabolic(W, K)
                # spherical symmetrizer scalar on the base point
                base = hecke_right_action(kl_element(W, wk), {f0: RF_ONE},
                                          letters, N, "lower")
                assert set(base) == {f0}
                pk = base[f0]
                vec = hecke_right_action(kl_element(W, left_mul(W, wk, x)),
                                         {f0: RF_ONE}, letters, N, "lower")
                o = {g: (c / pk).as_laurent()
                     for g, c in project(handle, vec).items()
                     if not c.is_zero()}
                col = {g: T.entry(g, f) for g in handle.basis
                       if not T.entry(g, f).is_zero()}
                if o != col:
                    bad += 1
                    if bad <= 2:
                        print(f"  MISMATCH f={f} x={x} K={K}")
                        print(f"    oracle: {sorted((g, str(c)) for g, c in o.items())}")
                        print(f"    canon:  {sorted((g, str(c)) for g, c in col.items())}")
            total_bad += bad
            print(f"s={s} J={set(J) or '{}'} dim={len(handle.basis)}: "
                  f"{'OK' if not bad else f'{bad} BAD'} ({time.time()-t0:.1f}s)",
                  flush=True)
print("TOTAL BAD:", total_bad)
