import sys, time
sys.path.insert(0, "src")
from qspicb.qsp import QSPConfig
from qspicb.bar_canonical import psi_i_bar, canonical_solve, canonical_solve_via_upgrade
from qspicb.tensor_modules import build_module, levi_to_shape
for conv in ("lower", "upper"):
    for N, b, levi in [(3, (0, 0, 1), {1}), (4, (0, 0, 0), {1})]:
        t0 = time.time()
        cfg = QSPConfig(N=N, convention=conv)
        h = build_module(levi_to_shape(b, levi), cfg)
        T1 = canonical_solve(psi_i_bar(h))
        t1 = time.time()
        T2 = canonical_solve_via_upgrade(h)
        t2 = time.time()
        same = (T1.row_labels == T2.row_labels and all(
            (T1.entry(g, f) - T2.entry(g, f)).is_zero()
            for f in T1.col_labels for g in T1.row_labels))
        print(f"{conv} N={N} b={b} levi={set(levi)} dim={len(h.basis)}: "
              f"direct {t1-t0:.1f}s upgrade {t2-t1:.1f}s equal={same}", flush=True)
