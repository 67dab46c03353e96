"""Dev: single-letter Upsilon dressing - is psi^i trivial on V and W?"""
import sys
sys.path.insert(0, "src")
from qspicb.qsp import QSPConfig, upsilon_component, _feasible_weights
from qspicb.uq_core import alphabet, element_action
from qspicb.ratfun import RF_ONE, RF_ZERO

for N in (2, 3, 4, 5, 6):
    for conv in ("lower", "upper"):
        cfg = QSPConfig(N=N, convention=conv, height_cap=8)
        for kind in ("V", "W"):
            letters = (kind,)
            nontrivial = []
            for mu in _feasible_weights(N, 1, symmetric=True):
                if not any(mu):
                    continue
                elt = upsilon_component(cfg, mu)
                if elt.terms:
                    for v in alphabet(N):
                        fam = "F" if conv == "lower" else "E"
                        out = element_action(elt, fam, {(v,): RF_ONE},
                                             letters, cfg.convention)
                        out = {k: c for k, c in out.items() if not c.is_zero()}
                        if out:
                            nontrivial.append((mu, v, out))
            tag = "TRIVIAL " if not nontrivial else "NONTRIV"
            print(f"{tag} N={N} {conv} {kind}: {len(nontrivial)} hits")
            for mu, v, out in nontrivial[:3]:
                print(f"    mu={mu} e_{v} -> {[(k, str(c)) for k, c in out.items()]}")
