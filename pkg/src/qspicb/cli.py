"""Batch front end for the canonical-basis machinery.

Subcommands: compute (transition matrices to JSON and CSV, with an
optional dual basis and a q=1 specialization table), verify (the full
check battery on one module, exit 0 iff everything passes), oracle
(entrywise comparison against the signed-permutation parabolic
Kazhdan-Lusztig matrix, for all-zero type sequences), kl (export a
parabolic Kazhdan-Lusztig matrix on its own), module (describe a
built module), and selftest (a quick internal battery).

Exit codes: 0 success, 1 verification or comparison failure, 2 usage
or configuration error.  Output files are written atomically (temp
file plus rename) and are byte-identical across repeated runs.  The
environment variable QSPICB_CACHE_DIR names a directory for the
persistent memo store (content-addressed JSON files); QSPICB_FAULT is
a test hook that corrupts the bar matrix before verification.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from dataclasses import dataclass, replace

from . import bar_canonical
from .bar_canonical import (canonical_solve, canonical_solve_via_upgrade,
                            check_second_factor_support, dual_canonical_solve,
                            psi_i_bar, verify_based_module)
from .coxeter import CoxeterGroup, parabolic_kl_matrix
from .errors import InvolutivityError, QspicbError
from .laurent import LaurentPoly, ONE, Q
from .qsp import QSPConfig
from .ratfun import RatFun
from .tensor_modules import (build_module, levi_to_shape,
                             parabolic_kl_oracle, weight_of)

OUTPUT_KINDS = ("matrix", "dual", "verify", "oracle", "q1")


# -- run configuration ----------------------------------------------------------------


@dataclass(frozen=True)
class RunSpec:
    """One reproducible run: algebra configuration, module shape, and
    the requested outputs.  Serializes to a single JSON object, and a
    run is a pure function of that object."""
    N: int
    b_seq: tuple
    levi: frozenset = frozenset()
    kappa: int = 1
    convention: str = "lower"
    height_cap: int = 8
    outputs: tuple = ("matrix",)
    out: str = ""

    def __post_init__(self):
        bad = [k for k in self.outputs if k not in OUTPUT_KINDS]
        if bad:
            raise ValueError("unknown output kinds %r (choose from %s)"
                             % (bad, ", ".join(OUTPUT_KINDS)))

    def config(self):
        return QSPConfig(self.N, kappa=self.kappa,
                         convention=self.convention,
                         height_cap=self.height_cap)

    def shape(self):
        return levi_to_shape(self.b_seq, self.levi)

    def stem(self):
        if self.out:
            return self.out
        b = "".join(str(x) for x in self.b_seq)
        l = "-".join(str(j) for j in sorted(self.levi)) or "none"
        return "qspicb_N%d_b%s_levi%s_%s" % (self.N, b, l, self.convention)

    def to_json_dict(self):
        return {"N": self.N, "b_seq": list(self.b_seq),
                "levi": sorted(self.levi), "kappa": self.kappa,
                "convention": self.convention,
                "height_cap": self.height_cap,
                "outputs": list(self.outputs), "out": self.out}

    @classmethod
    def from_json_dict(cls, data):
        known = {"N", "b_seq", "levi", "kappa", "convention",
                 "height_cap", "outputs", "out"}
        extra = set(data) - known
        if extra:
            raise ValueError("unknown run-spec fields %r" % sorted(extra))
        for key in ("N", "b_seq"):
            if key not in data:
                raise ValueError("run spec needs the field %r" % key)
        kw = {"N": int(data["N"]),
              "b_seq": tuple(int(x) for x in data["b_seq"]),
              "levi": frozenset(int(j) for j in data.get("levi", []))}
        if "kappa" in data:
            kw["kappa"] = int(data["kappa"])
        if "convention" in data:
            kw["convention"] = str(data["convention"])
        if "height_cap" in data:
            kw["height_cap"] = int(data["height_cap"])
        if "outputs" in data:
            kw["outputs"] = tuple(str(k) for k in data["outputs"])
        if "out" in data:
            kw["out"] = str(data["out"])
        return cls(**kw)


def _parse_ints(text, what):
    text = (text or "").strip()
    if not text:
        return ()
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ValueError("%s must be comma-separated integers, got %r"
                         % (what, text))


def _spec_from_args(args):
    if getattr(args, "spec", None):
        with open(args.spec) as fh:
            data = json.load(fh)
        run = RunSpec.from_json_dict(data)
        if getattr(args, "out", None):
            run = replace(run, out=args.out)
        return run
    if args.N is None or args.b is None:
        raise ValueError("either --spec or both --N and --b are required")
    outputs = ["matrix"]
    if getattr(args, "dual", False):
        outputs.append("dual")
    if getattr(args, "q1", False):
        outputs.append("q1")
    return RunSpec(N=args.N,
                   b_seq=_parse_ints(args.b, "type sequence"),
                   levi=frozenset(_parse_ints(args.levi, "levi set")),
                   kappa=args.kappa,
                   convention=args.convention,
                   height_cap=args.height_cap,
                   outputs=tuple(outputs),
                   out=args.out or "")


# -- serialization helpers ----------------------------------------------------------


def _label_str(lab):
    return " ".join(str(v) for v in lab)


def _label_tuple(text):
    return tuple(int(v) for v in text.split())


def _dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _atomic_write(path, text):
    path = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path),
                               prefix=".qspicb-tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _q1_table(trans):
    """q=1 specialization, nonzero entries only, by column."""
    out = {}
    for (i, j), p in sorted(trans.entries.items()):
        v = p.eval_at_one()
        if v:
            col = _label_str(trans.col_labels[j])
            out.setdefault(col, {})[_label_str(trans.row_labels[i])] = int(v)
    return out


def _module_summary(handle):
    shape = handle.shape
    return {"letters": list(handle.letters),
            "dimension": len(handle.basis),
            "flip_slots": shape.a0,
            "blocks": [list(blk) for blk in shape.blocks],
            "b_seq": list(shape.b_seq),
            "levi": sorted(shape.levi),
            "labels": [_label_str(f) for f in handle.basis]}


# -- persistent memo store -----------------------------------------------------------


def _cache_path(dirpath, kind, key):
    digest = hashlib.sha256(
        json.dumps([kind, key], sort_keys=True).encode()).hexdigest()
    return os.path.join(dirpath, "%s-%s.json" % (kind, digest[:32]))


def _cache_load(kind, key):
    dirpath = os.environ.get("QSPICB_CACHE_DIR")
    if not dirpath:
        return None
    path = _cache_path(dirpath, kind, key)
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, ValueError):
        return None
    if data.get("key") != [kind, key]:
        return None
    return data.get("payload")


def _cache_store(kind, key, payload):
    dirpath = os.environ.get("QSPICB_CACHE_DIR")
    if not dirpath:
        return
    os.makedirs(dirpath, exist_ok=True)
    _atomic_write(_cache_path(dirpath, kind, key),
                  _dump_json({"key": [kind, key], "payload": payload}))


def _involution_for(handle):
    """The coideal involution on a built module, with the transport
    columns spliced through the persistent memo store when one is
    configured."""
    cfg, letters = handle.cfg, handle.letters
    if not os.environ.get("QSPICB_CACHE_DIR"):
        return psi_i_bar(handle)
    key = [cfg.N, cfg.kappa, cfg.convention, cfg.height_cap, list(letters)]
    payload = _cache_load("transport", key)
    if payload is not None and \
            bar_canonical.peek_transport_cache(cfg, letters) is None:
        columns = {}
        ok = len(payload) == cfg.N ** len(letters)
        for fs, col in payload.items():
            f = _label_tuple(fs)
            if len(f) != len(letters):
                ok = False
                break
            columns[f] = {
                _label_tuple(gs): RatFun.from_laurent(
                    LaurentPoly.from_json(pj))
                for gs, pj in col.items()}
        if ok:
            bar_canonical.seed_transport_cache(cfg, letters, columns)
    op = psi_i_bar(handle)
    if payload is None:
        columns = bar_canonical.peek_transport_cache(cfg, letters)
        payload = {_label_str(f): {_label_str(g): c.as_laurent().to_json()
                                   for g, c in col.items()}
                   for f, col in columns.items()}
        _cache_store("transport", key, payload)
    return op


# -- compute -------------------------------------------------------------------------


def cmd_compute(args):
    spec = _spec_from_args(args)
    cfg = spec.config()
    handle = build_module(spec.shape(), cfg)
    op = _involution_for(handle)
    trans = canonical_solve(op)
    stem = spec.stem()
    payload = {"spec": spec.to_json_dict(),
               "module": _module_summary(handle),
               "canonical": trans.to_json_dict(_label_str)}
    if "q1" in spec.outputs:
        payload["canonical_q1"] = _q1_table(trans)
    files = [(stem + ".json", None),
             (stem + ".csv", trans.to_csv_text(_label_str))]
    if "dual" in spec.outputs:
        dual = dual_canonical_solve(op)
        payload["dual"] = dual.to_json_dict(_label_str)
        if "q1" in spec.outputs:
            payload["dual_q1"] = _q1_table(dual)
        files.append((stem + ".dual.csv", dual.to_csv_text(_label_str)))
    files[0] = (stem + ".json", _dump_json(payload))
    for path, text in files:
        _atomic_write(path, text)
        print("wrote %s" % path)
    return 0


# -- verify --------------------------------------------------------------------------

_VERIFY_CHECKS = ("involutivity", "triangularity", "lattice",
                  "based_module", "positivity", "finiteness",
                  "second_factor_support")


def _inject_bar_fault(op):
    """Corrupt one off-diagonal bar-matrix entry (test hook)."""
    f = op.handle.basis[-1]
    g = op.handle.basis[0]
    col = dict(op.columns[f])
    col[g] = col.get(g, LaurentPoly.zero()) + Q
    op.columns[f] = col


def cmd_verify(args):
    spec = _spec_from_args(args)
    cfg = spec.config()
    handle = build_module(spec.shape(), cfg)
    op = _involution_for(handle)
    if os.environ.get("QSPICB_FAULT") == "bar-entry":
        _inject_bar_fault(op)

    checks = {name: None for name in _VERIFY_CHECKS}
    counterexample = None
    payload = {"spec": spec.to_json_dict(),
               "module": _module_summary(handle)}

    try:
        op.check_involutive()
        checks["involutivity"] = True
    except InvolutivityError as exc:
        checks["involutivity"] = False
        counterexample = {"check": "involutivity", "detail": str(exc)}

    trans = None
    if counterexample is None:
        try:
            trans = canonical_solve(op)
            checks["triangularity"] = True
            checks["lattice"] = True
        except QspicbError as exc:
            checks["triangularity"] = False
            checks["lattice"] = False
            counterexample = {"check": "triangularity", "detail": str(exc)}

    if trans is not None:
        flags = verify_based_module(handle, trans, cfg)
        payload["based_module_flags"] = flags
        checks["based_module"] = all(flags.values())
        if not checks["based_module"] and counterexample is None:
            counterexample = {"check": "based_module", "detail": flags}

        positive = True
        for (i, j), p in sorted(trans.entries.items()):
            if not p.is_integral() or not p.is_nonneg():
                positive = False
                if counterexample is None:
                    counterexample = {
                        "check": "positivity",
                        "detail": {"row": _label_str(trans.row_labels[i]),
                                   "col": _label_str(trans.col_labels[j]),
                                   "entry": str(p)}}
                break
        checks["positivity"] = positive

        sizes = {}
        for (i, j), p in trans.entries.items():
            col = _label_str(trans.col_labels[j])
            sizes[col] = sizes.get(col, 0) + 1
        payload["support_sizes"] = dict(sorted(sizes.items()))
        payload["max_support"] = max(sizes.values(), default=0)
        checks["finiteness"] = True

        try:
            ok = check_second_factor_support(handle, trans)
        except QspicbError as exc:
            ok = False
            if counterexample is None:
                counterexample = {"check": "second_factor_support",
                                  "detail": str(exc)}
        checks["second_factor_support"] = ok
        if not ok and counterexample is None:
            counterexample = {"check": "second_factor_support",
                              "detail": "support refinement failed"}

    passed = all(checks[name] is True for name in _VERIFY_CHECKS)
    payload["checks"] = checks
    payload["counterexample"] = counterexample
    payload["passed"] = passed

    path = spec.stem() + ".verify.json"
    _atomic_write(path, _dump_json(payload))
    for name in _VERIFY_CHECKS:
        state = checks[name]
        word = "ok" if state is True else (
            "FAIL" if state is False else "skipped")
        print("%-8s %s" % (word, name))
    print("wrote %s" % path)
    if not passed:
        print("first failure: %s" % (counterexample or {}).get("check"),
              file=sys.stderr)
    return 0 if passed else 1


# -- oracle --------------------------------------------------------------------------


def cmd_oracle(args):
    spec = _spec_from_args(args)
    if any(spec.b_seq):
        raise ValueError(
            "the oracle comparison needs an all-zero type sequence")
    cfg = spec.config()
    handle = build_module(spec.shape(), cfg)
    trans = canonical_solve(_involution_for(handle))
    oracle = parabolic_kl_oracle(handle)
    zero = LaurentPoly.zero()
    mismatches = []
    for f in handle.basis:
        tcol = trans.column(f)
        ocol = oracle.column(f)
        for g in sorted(set(tcol) | set(ocol)):
            a = tcol.get(g, zero)
            b = ocol.get(g, zero)
            if a != b:
                mismatches.append({"row": _label_str(g),
                                   "col": _label_str(f),
                                   "canonical": str(a),
                                   "kl": str(b)})
    payload = {"spec": spec.to_json_dict(),
               "dimension": len(handle.basis),
               "equal": not mismatches,
               "mismatches": mismatches}
    path = spec.stem() + ".oracle.json"
    _atomic_write(path, _dump_json(payload))
    print("wrote %s" % path)
    print("oracle agreement: %s (%d labels, %d mismatches)"
          % ("yes" if not mismatches else "NO", len(handle.basis),
             len(mismatches)))
    return 0 if not mismatches else 1


# -- kl ------------------------------------------------------------------------------


def cmd_kl(args):
    J = sorted(_parse_ints(args.parabolic, "parabolic set"))
    group = CoxeterGroup(args.family, args.rank)
    key = [args.family, args.rank, J]
    payload = _cache_load("kl", key)
    if payload is None:
        trans = parabolic_kl_matrix(group, J)
        payload = trans.to_json_dict(_label_str)
        _cache_store("kl", key, payload)
    stem = args.out or ("qspicb_kl_%s%d_p%s"
                        % (args.family, args.rank,
                           "-".join(str(j) for j in J) or "none"))
    lines = ["row,col,entry"]
    for col in payload["col_labels"]:
        for row, pj in sorted(payload["columns"].get(col, {}).items()):
            lines.append("%s,%s,%s" % (row, col, LaurentPoly.from_json(pj)))
    _atomic_write(stem + ".json", _dump_json(payload))
    _atomic_write(stem + ".csv", "\n".join(lines) + "\n")
    print("wrote %s.json" % stem)
    print("wrote %s.csv" % stem)
    return 0


# -- module --------------------------------------------------------------------------


def cmd_module(args):
    spec = _spec_from_args(args)
    cfg = spec.config()
    handle = build_module(spec.shape(), cfg)
    summary = _module_summary(handle)
    summary["weights"] = {
        _label_str(f): list(weight_of(f, handle.letters, cfg.N))
        for f in handle.basis}
    payload = {"spec": spec.to_json_dict(), "module": summary}
    if args.out:
        path = spec.stem() + ".module.json"
        _atomic_write(path, _dump_json(payload))
        print("wrote %s" % path)
    else:
        print(_dump_json(payload), end="")
    return 0


# -- selftest ------------------------------------------------------------------------


def _selftest_battery():
    def laurent_arithmetic():
        assert (Q + ONE) * (Q - ONE) == LaurentPoly({2: 1, 0: -1})
        assert Q.bar() == LaurentPoly.q_power(-1)

    def rank_one_canonical():
        handle = build_module(levi_to_shape((0,), ()), QSPConfig(2))
        trans = canonical_solve(psi_i_bar(handle))
        assert trans.entry((-1,), (1,)) == Q
        assert trans.entry((1,), (1,)) == ONE

    def odd_rank_involution():
        handle = build_module(levi_to_shape((0, 1), ()), QSPConfig(3))
        psi_i_bar(handle).check_involutive()

    def upgrade_route_agrees():
        handle = build_module(levi_to_shape((0, 1), ()), QSPConfig(2))
        direct = canonical_solve(psi_i_bar(handle))
        assert canonical_solve_via_upgrade(handle) == direct

    def oracle_one_slot():
        handle = build_module(levi_to_shape((0,), ()), QSPConfig(2))
        assert parabolic_kl_oracle(handle) == canonical_solve(
            psi_i_bar(handle))

    def oracle_flip_block():
        handle = build_module(levi_to_shape((0, 0), (0,)), QSPConfig(4))
        assert parabolic_kl_oracle(handle) == canonical_solve(
            psi_i_bar(handle))

    def based_module_report():
        handle = build_module(levi_to_shape((0, 0), ()), QSPConfig(2))
        trans = canonical_solve(psi_i_bar(handle))
        flags = verify_based_module(handle, trans, handle.cfg)
        assert all(flags.values()), flags

    return [("laurent arithmetic", laurent_arithmetic),
            ("rank-one canonical column", rank_one_canonical),
            ("odd-rank involution squares to one", odd_rank_involution),
            ("two-stage route agrees", upgrade_route_agrees),
            ("signed-permutation oracle, one slot", oracle_one_slot),
            ("signed-permutation oracle, flip block", oracle_flip_block),
            ("based-module report all true", based_module_report)]


def cmd_selftest(args):
    failures = 0
    for name, check in _selftest_battery():
        try:
            check()
        except Exception as exc:
            failures += 1
            print("FAIL %s: %s" % (name, exc))
        else:
            print("ok   %s" % name)
    if failures:
        print("%d of %d checks failed"
              % (failures, len(_selftest_battery())), file=sys.stderr)
        return 1
    return 0


# -- argument parsing ----------------------------------------------------------------


def _add_module_args(parser, with_outputs=False):
    parser.add_argument("--spec", metavar="FILE",
                        help="JSON run configuration (overrides the "
                             "individual flags below)")
    parser.add_argument("--N", dest="N", type=int,
                        help="alphabet size (rank of the big quantum group)")
    parser.add_argument("--b", help="comma-separated 0/1 type sequence, "
                                    "e.g. 0,0,1")
    parser.add_argument("--levi", default="",
                        help="comma-separated retained reflection indices")
    parser.add_argument("--kappa", type=int, default=1,
                        help="coideal parameter (default 1)")
    parser.add_argument("--convention", choices=("lower", "upper"),
                        default="lower")
    parser.add_argument("--height-cap", type=int, default=8,
                        help="bound on correction weights (default 8)")
    parser.add_argument("--out", help="output path stem")
    if with_outputs:
        parser.add_argument("--dual", action="store_true",
                            help="also compute the dual basis")
        parser.add_argument("--q1", action="store_true",
                            help="include the q=1 specialization table")


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="qspicb",
        description="Canonical bases of tensor modules over quantum "
                    "symmetric pair coideals, with exact arithmetic.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute",
                       help="write canonical transition matrices")
    _add_module_args(p, with_outputs=True)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="run the check battery; exit 0 "
                                      "iff all checks pass")
    _add_module_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle",
                       help="compare against the signed-permutation "
                            "parabolic Kazhdan-Lusztig matrix")
    _add_module_args(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("kl", help="export a parabolic Kazhdan-Lusztig "
                                  "matrix")
    p.add_argument("--family", choices=("A", "B"), required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--parabolic", default="",
                   help="comma-separated generator indices to quotient by")
    p.add_argument("--out", help="output path stem")
    p.set_defaults(func=cmd_kl)

    p = sub.add_parser("module", help="describe a built module")
    _add_module_args(p)
    p.set_defaults(func=cmd_module)

    p = sub.add_parser("selftest", help="quick internal battery")
    p.set_defaults(func=cmd_selftest)

    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except QspicbError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
