"""Dev: plain bar, solver routes, verification report, timing."""
import sys, time
sys.path.insert(0, "src")
from qspicb.qsp import QSPConfig
from qspicb.bar_canonical import (psi_bar, psi_i_bar, canonical_solve,
                                  dual_canonical_solve,
                                  canonical_solve_via_upgrade,
                                  verify_based_module,
                                  check_second_factor_support,
                                  first_block_split)
from qspicb.tensor_modules import build_module, levi_to_shape
from qspicb.laurent import LaurentPoly

def show(T, limit=6):
    for f in T.col_labels[:limit]:
        ent = [(g, str(T.entry(g, f))) for g in T.row_labels
               if not T.entry(g, f).is_zero()]
        print(f"    {f}: {ent}")

print("== plain bar: correction shape and involutivity ==")
for conv in ("lower", "upper"):
    cfg = QSPConfig(N=2, convention=conv)
    h = build_module(levi_to_shape((0, 0), set()), cfg)
    op = psi_bar(h)
    for f in h.basis:
        ent = [(g, str(c)) for g, c in op.columns[f].items()]
        print(f"  {conv} psi e_{f} = {ent}")

for conv in ("lower", "upper"):
    for N, b, levi in [(4, (0, 1), set()), (4, (0, 0), {1}), (3, (0, 0, 1), set())]:
        cfg = QSPConfig(N=N, convention=conv)
        h = build_module(levi_to_shape(b, levi), cfg)
        op = psi_bar(h)  # check_involutive runs inside
        print(f"  {conv} N={N} b={b} levi={set(levi)}: psi involutive ok "
              f"(dim {len(h.basis)})")

print("== canonical solve vs upgrade route ==")
for conv in ("lower", "upper"):
    for N, b, levi in [(2, (0, 0), set()), (4, (0, 1), set()),
                       (3, (0, 0, 1), {1}), (4, (0, 0, 0), {1})]:
        cfg = QSPConfig(N=N, convention=conv)
        h = build_module(levi_to_shape(b, levi), cfg)
        T1 = canonical_solve(psi_i_bar(h))
        T2 = canonical_solve_via_upgrade(h)
        same = (T1.row_labels == T2.row_labels and all(
            (T1.entry(g, f) - T2.entry(g, f)).is_zero()
            for f in T1.col_labels for g in T1.row_labels))
        print(f"  {conv} N={N} b={b} levi={set(levi)}: direct==upgrade {same}")

print("== dual solve ==")
for conv in ("lower", "upper"):
    cfg = QSPConfig(N=2, convention=conv)
    h = build_module(levi_to_shape((0, 0), set()), cfg)
    D = dual_canonical_solve(psi_i_bar(h))
    print(f"  {conv} dual columns:")
    show(D)

print("== verify_based_module ==")
cfg = QSPConfig(N=2, convention="lower")
h = build_module(levi_to_shape((0, 0), set()), cfg)
op = psi_i_bar(h)
T = canonical_solve(op)
print("  canonical:", verify_based_module(h, T, cfg))
std = {f: {f: LaurentPoly.one()} for f in h.basis}
print("  standard: ", verify_based_module(h, std, cfg))
perm = {f: T.column(f) for f in reversed(h.basis)}
print("  permuted: ", verify_based_module(h, perm, cfg))

print("== second factor support ==")
for conv in ("lower", "upper"):
    cfg = QSPConfig(N=4, convention=conv)
    h = build_module(levi_to_shape((0, 0), set()), cfg)
    T = canonical_solve(psi_i_bar(h))
    check_second_factor_support(h, T)
    print(f"  {conv} N=4 V,V split={first_block_split(h)}: support refinement ok")

print("== timing: the big acceptance cell ==")
t0 = time.time()
cfg = QSPConfig(N=6, convention="lower")
h = build_module(levi_to_shape((0, 0, 0), set()), cfg)
op = psi_i_bar(h)
t1 = time.time()
T = canonical_solve(op)
t2 = time.time()
print(f"  N=6 VVV dim={len(h.basis)}: transport+involution {t1-t0:.1f}s "
      f"solve {t2-t1:.1f}s")
rep = verify_based_module(h, T, cfg)
t3 = time.time()
print(f"  verify {t3-t2:.1f}s: {rep}")
