import sys, time, faulthandler
sys.path.insert(0, "src")
faulthandler.dump_traceback_later(45, repeat=True)
from qspicb.qsp import QSPConfig
from qspicb.bar_canonical import ambient_psi_i_columns, psi_i_bar, canonical_solve
from qspicb.tensor_modules import build_module, levi_to_shape
cfg = QSPConfig(N=4, convention="lower")
t0 = time.time()
cols = ambient_psi_i_columns(cfg, ("V", "V", "V"))
print(f"ambient transport {time.time()-t0:.1f}s", flush=True)
t0 = time.time()
h = build_module(levi_to_shape((0, 0, 0), {1}), cfg)
op = psi_i_bar(h)
print(f"project+involutive {time.time()-t0:.1f}s dim={len(h.basis)}", flush=True)
t0 = time.time()
T = canonical_solve(op)
print(f"solve {time.time()-t0:.1f}s", flush=True)
