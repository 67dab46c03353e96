"""Dev: solve for the H0 matrix on one V slot from the commutation
requirement with the coideal action, N odd, both packs."""
import sys
sys.path.insert(0, "src")
from qspicb.qsp import QSPConfig, b_action
from qspicb.uq_core import alphabet
from qspicb.ratfun import RF_ONE, RF_ZERO

def gen_matrix(cfg, j, letters, labels):
    return {f: b_action(cfg, j, {f: RF_ONE}, letters) for f in labels}

def rref_nullspace(rows, nvars):
    pivots = {}  # var -> fully reduced row with coeff 1 on var
    for r in rows:
        r = dict(r)
        changed = True
        while True:
            hit = next((v for v in r if v in pivots), None)
            if hit is None:
                break
            c = r.pop(hit)
            for v2, c2 in pivots[hit].items():
                if v2 == hit:
                    continue
                nv = r.get(v2, RF_ZERO) - c * c2
                if nv.is_zero():
                    r.pop(v2, None)
                else:
                    r[v2] = nv
        if not r:
            continue
        v0 = sorted(r)[0]
        inv = r[v0].inverse()
        r = {v: c * inv for v, c in r.items()}
        # reduce existing pivot rows against the new one
        for pv, prow in pivots.items():
            c = prow.get(v0)
            if c is None or c.is_zero():
                continue
            for v2, c2 in r.items():
                nv = prow.get(v2, RF_ZERO) - c * c2
                if nv.is_zero():
                    prow.pop(v2, None)
                else:
                    prow[v2] = nv
        pivots[v0] = r
    free = [v for v in range(nvars) if v not in pivots]
    basis = []
    for fv in free:
        vec = {fv: RF_ONE}
        for pv, row in pivots.items():
            c = row.get(fv, RF_ZERO)
            if not c.is_zero():
                vec[pv] = RF_ZERO - c
        basis.append(vec)
    return basis

def solve_commutant(N, conv):
    cfg = QSPConfig(N=N, convention=conv)
    letters = ("V",)
    labels = [(v,) for v in alphabet(N)]
    n = len(labels)
    idx = {f: i for i, f in enumerate(labels)}
    rows = []
    for j in cfg.nodes:
        B = gen_matrix(cfg, j, letters, labels)
        for b in labels:
            for a in labels:
                r = {}
                for m in labels:
                    c1 = B[b].get(m, RF_ZERO)
                    if not c1.is_zero():
                        v = idx[a]*n + idx[m]
                        r[v] = r.get(v, RF_ZERO) + c1
                    c2 = B[m].get(a, RF_ZERO)
                    if not c2.is_zero():
                        v = idx[m]*n + idx[b]
                        r[v] = r.get(v, RF_ZERO) - c2
                r = {v: c for v, c in r.items() if not c.is_zero()}
                if r:
                    rows.append(r)
    basis = rref_nullspace(rows, n*n)
    print(f"N={N} conv={conv}: commutant dim = {len(basis)}")
    for t, vec in enumerate(basis):
        items = []
        for v, c in sorted(vec.items()):
            a, m = divmod(v, n)
            items.append(f"e{labels[m][0]} -> {c} * e{labels[a][0]}")
        print(f"  basis {t}: " + "; ".join(items))
    return labels, basis

for N in (3, 5):
    for conv in ("lower", "upper"):
        solve_commutant(N, conv)
