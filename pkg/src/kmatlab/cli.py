"""Command-line entry point: scenario presets, batch verification, and
operator computation with machine-readable reports."""

import argparse
import json
import sys
from fractions import Fraction

from .config import (ConfigError, RunConfig, load_config, default_order,
                     VERIFY_CHECKS, COMPUTE_TARGETS)
from .presets import PRESETS, PresetError, get_preset
from .report import make_report, all_passed, render
from .linalg import Mat


# ---------------------------------------------------------------------------
# matrix serialization

def matrix_doc(M):
    entries = {}
    for r, c, v in M.entries():
        entries[f"{r},{c}"] = repr(v)
    return {"nrows": M.nrows, "ncols": M.ncols, "entries": entries}


def _emit(doc, path):
    text = json.dumps(doc, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# verification runners (shared with the test suite)

def _finite_K_data(built, idx, cache={}):
    from . import kmatrix as km
    key = (id(built), idx)
    if key not in cache:
        cache[key] = km.basicK_data(built["sd"], built["gamma"],
                                    built["sigma"], built["modules"][idx])
    return cache[key]


def verify_qsp_relations(preset, built):
    from .qsp import (QspOnModule, verify_qsp_relations as vrel,
                      check_aug_qonsager_relations)
    from .modules import check_uqg_relations
    out = []
    if preset.kind == "finite":
        mods = built["modules"]
    else:
        mods = [built["make_M"](None), built["make_V"](None)]
    for mod in mods:
        ok = all(v for _, v in check_uqg_relations(mod))
        out.append((f"module-relations[{mod.label}]", ok))
        qsp = QspOnModule(built["sd"], built["gamma"], built["sigma"],
                          mod, check=False)
        for name, ok, _ in vrel(qsp):
            out.append((f"coideal-{name}[{mod.label}]", ok))
        if preset.kind == "spectral" and built["sd"].tau == (1, 0):
            for name, ok, _ in check_aug_qonsager_relations(qsp):
                out.append((f"aug-{name}[{mod.label}]", ok))
    return out


def verify_ybe(preset, built):
    from . import rmatrix as rm
    out = []
    if preset.kind == "finite":
        mods = built["modules"]
        n = len(mods)
        for a in range(n):
            for b in range(a, n):
                for c in range(b, n):
                    trio = (mods[a], mods[b], mods[c])
                    if trio[0].dim * trio[1].dim * trio[2].dim > 27:
                        continue
                    tag = "ybe[%s,%s,%s]" % tuple(t.label for t in trio)
                    out.append((tag, rm.check_YBE(*trio)))
        return out
    # spectral: numeric-parameter triple plus the two-variable identity
    from .spectral import check_spectral_YBE
    from .modules import evaluation_sl2hat
    sd = built["sd"]
    sf = built["sfield"]
    q = sf.q
    rd = sd.rd
    pts = [sf.from_int(2) * q, sf.from_int(3) * q,
           sf.from_int(5) * q]
    mods = [evaluation_sl2hat(rd, sf, 1, pts[0]),
            evaluation_sl2hat(rd, sf, 1, pts[1]),
            evaluation_sl2hat(rd, sf, 2, pts[2])]
    dims = tuple(m.dim for m in mods)
    dom = mods[0].domain
    r12 = rm.embed_legs(rm.trig_R(mods[0], mods[1]), dims, 0, 1, dom)
    r13 = rm.embed_legs(rm.trig_R(mods[0], mods[2]), dims, 0, 2, dom)
    r23 = rm.embed_legs(rm.trig_R(mods[1], mods[2]), dims, 1, 2, dom)
    out.append(("ybe-numeric[2,2,3]",
                r12 * r13 * r23 == r23 * r13 * r12))
    out.append(("ybe-spectral[2,2,2]",
                check_spectral_YBE(sd, built["make_V"], built["make_M"],
                                   built["make_W"])))
    return out


def verify_k_suite(preset, built):
    from . import kmatrix as km
    out = []
    if preset.kind == "finite":
        for i, j in built["pairs"]:
            dV = _finite_K_data(built, i)
            dW = _finite_K_data(built, j)
            pair = "[%s,%s]" % (built["modules"][i].label,
                                built["modules"][j].label)
            for tag, ok in km.check_basicK_identities(dV, dW):
                out.append((tag + pair, ok))
        if preset.name == "sl3-aiv":
            sf = built["sfield"]
            for idx, mod in enumerate(built["modules"]):
                d = _finite_K_data(built, idx)
                ok = d["K"] == km.aiv_closed_form(mod, built["gamma"], sf)
                out.append((f"closed-form[{mod.label}]", ok))
        return out
    # spectral: solvability, invertibility, unitarity of the K family
    from . import spectral as sp
    sd, g, s = built["sd"], built["gamma"], built["sigma"]
    M = built["make_M"](None)
    V = built["make_V"](None)
    d = sp.trig_tensor_K(sd, g, s, M, V)
    out.append(("trig-tensor-k-solvable", True))
    out.append(("trig-tensor-k-invertible", sp.is_invertible(d["TK"])))
    from .modules import trivial_module
    triv = trivial_module(sd.rd, V.sfield, V.domain)
    dt = sp.trig_tensor_K(sd, g, s, triv, V)
    dk = sp.trig_K(sd, g, s, V)
    out.append(("trivial-first-leg-slice", dt["TK"] == dk["K"]))
    for tag, ok in sp.check_unitarity(sd, g, s, M, V):
        out.append((tag, ok))
    return out


def verify_tensor_k_suite(preset, built, order=None):
    from . import kmatrix as km
    out = []
    if preset.kind == "finite":
        for a, b, c in built["tensor_triples"]:
            dM = _finite_K_data(built, a)
            dV = _finite_K_data(built, b)
            dW = _finite_K_data(built, c)
            tag = "[%s,%s,%s]" % tuple(built["modules"][k].label
                                       for k in (a, b, c))
            TK = km.tensor_K(dM, dV)
            out.append(("2k-intertwiner" + tag,
                        km.check_tensorK_intertwining(dM, dV, TK)))
            ok1, ok2 = km.check_tensorK_coproducts(dM, dV, dW)
            out.append(("2k-coprod-1" + tag, ok1))
            out.append(("2k-coprod-2" + tag, ok2))
            out.append(("2k-re" + tag, km.check_tensorK_RE(dM, dV, dW)))
            out.append(("epsilon-slice" + tag, km.epsilon_slice_check(dV)))
            out.append(("support" + tag, km.support_membership(dM, dV)))
            V = built["modules"][b]
            nonX = [i for i in built["sd"].rd.I
                    if i not in built["sd"].X]
            if nonX:
                perturbed = dV["K"] + V.E(nonX[0])
                out.append(("support-negative-control" + tag,
                            not km.support_membership(dM, dV,
                                                      perturb=perturbed)))
            xi = km.xi_fixed_point_check(dV, built["modules"][c])
            out.append(("xi-fixed" + tag, all(ok for _, ok in xi)))
            if nonX:
                xin = km.xi_fixed_point_check(dV, built["modules"][c],
                                              negative=True)
                out.append(("xi-negative-control" + tag,
                            not all(ok for _, ok in xin)))
        return out
    # spectral: the series/rational agreement suite
    from . import spectral as sp
    if order is None:
        order = default_order()
    sd, g, s = built["sd"], built["gamma"], built["sigma"]
    M = built["make_M"](None)
    V = built["make_V"](None)
    for tag, ok in sp.check_series_quotients(sd, g, s, M, V, order=order):
        out.append((tag, ok))
    return out


def verify_spectral_re(preset, built):
    from . import spectral as sp
    if preset.kind != "spectral":
        raise ConfigError("spectral-re requires a spectral preset")
    ok = sp.check_spectral_RE(built["sd"], built["gamma"], built["sigma"],
                              built["make_M"], built["make_V"],
                              built["make_W"])
    return [("spectral-re[2,2,2]", ok)]


def verify_groupoid(preset, built):
    from . import groupoid as gp
    from . import kmatrix as km
    if preset.kind == "finite":
        dM = _finite_K_data(built, 0)
        dV = _finite_K_data(built, min(1, len(built["modules"]) - 1))
        rep = gp.finite_rep(dM, dV, n=3)
        from .qsp import tensor_qsp
        dMV = dict(dM)
        dMV["qsp"] = tensor_qsp(dM["qsp"], dV["qsp"].mod)
        direct = km.tensor_K(dMV, dV)
        return gp.verify_groupoid_relations(rep, direct_boundary=direct)
    from . import spectral as sp
    sd, g, s = built["sd"], built["gamma"], built["sigma"]
    sf = built["sfield"]
    M = built["make_M"](None)
    V = built["make_V"](None)
    params = [sf.from_int(k) for k in (2, 3, 5)]
    rep = gp.spectral_rep(sd, g, s, M, V, params)
    Vz1 = sp.grading_shift(V, sd, params[0])
    d2 = sp.trig_tensor_K(sd, g, s, M.tensor(Vz1), V, zval=params[1])
    return gp.verify_groupoid_relations(rep, direct_boundary=d2["TK"])


def verify_classical_limit(preset, built):
    from . import kmatrix as km
    if preset.kind != "finite":
        raise ConfigError("classical-limit requires a finite preset")
    out = []
    sd = built["sd"]
    sf = built["sfield"]
    V = built["modules"][0]
    d = _finite_K_data(built, 0)
    cl = km.classical_limit(d["K"], V, sd, built["gamma_classical"])
    out.append(("limit-support", not cl["off-support-entries"]))
    out.append(("limit-involution-criterion",
                cl["Y_zero"] == cl["involution_criterion"]))
    if preset.name == "sl3-aiv":
        for y0, y1 in ((1, 1), (2, 3), (5, 2)):
            g = {0: sf.from_int(y0), 1: sf.from_int(y1)}
            dd = km.basicK_data(sd, g, None, V)
            cl = km.classical_limit(dd["K"], V, sd,
                                    {0: Fraction(y0), 1: Fraction(y1)})
            pred = _bracket_prediction(V, y1 - y0)
            tag = f"limit-closed-form[{y0},{y1}]"
            out.append((tag, cl["Y"] == pred))
            out.append((f"limit-criterion-agreement[{y0},{y1}]",
                        cl["Y_zero"] == cl["involution_criterion"]))
    return out


def _bracket_prediction(V, coef):
    """coef * [e_0, e_1] at q = 1, as a rational entry dict."""
    from . import kmatrix as km
    E0 = km.specialize_matrix(V.E(0))
    E1 = km.specialize_matrix(V.E(1))

    def mmul(A, B):
        out = {}
        for (r, m), v in A.items():
            for (m2, c), w in B.items():
                if m2 == m:
                    out[(r, c)] = out.get((r, c), Fraction(0)) + v * w
        return out

    C = mmul(E0, E1)
    for k, v in mmul(E1, E0).items():
        C[k] = C.get(k, Fraction(0)) - v
    return {k: coef * v for k, v in C.items() if coef * v}


_VERIFIERS = {
    "qsp-relations": lambda p, b, o: verify_qsp_relations(p, b),
    "ybe": lambda p, b, o: verify_ybe(p, b),
    "k-suite": lambda p, b, o: verify_k_suite(p, b),
    "tensor-k-suite": verify_tensor_k_suite,
    "spectral-re": lambda p, b, o: verify_spectral_re(p, b),
    "groupoid": lambda p, b, o: verify_groupoid(p, b),
    "classical-limit": lambda p, b, o: verify_classical_limit(p, b),
}


# ---------------------------------------------------------------------------
# compute runners

def compute_target(target, preset, built, order):
    from . import kmatrix as km
    from . import rmatrix as rm
    from . import spectral as sp
    if target in ("quasi-k", "tensor-k", "r"):
        if preset.kind != "finite":
            raise ConfigError(f"{target} requires a finite preset")
        if target == "quasi-k":
            return {m.label: matrix_doc(_finite_K_data(built, i)["K"])
                    for i, m in enumerate(built["modules"])}
        i, j = built["pairs"][0]
        A, B = built["modules"][i], built["modules"][j]
        if target == "r":
            return {f"R[{A.label},{B.label}]":
                    matrix_doc(rm.R_matrix(A, B))}
        dM = _finite_K_data(built, i)
        dV = _finite_K_data(built, j)
        return {f"TK[{A.label},{B.label}]":
                matrix_doc(km.tensor_K(dM, dV))}
    if preset.kind != "spectral":
        raise ConfigError(f"{target} requires a spectral preset")
    sd, g, s = built["sd"], built["gamma"], built["sigma"]
    M = built["make_M"](None)
    V = built["make_V"](None)
    if target == "trig-r":
        Vz = sp.grading_shift(V, sd, V.domain.gen)
        return {"trig-R[M,V(z)]": matrix_doc(rm.trig_R(M, Vz))}
    if target == "trig-k":
        return {"trig-K[V(z)]": matrix_doc(sp.trig_K(sd, g, s, V)["K"])}
    d = sp.trig_tensor_K(sd, g, s, M, V)
    return {"trig-TK[M,V(z)]": matrix_doc(d["TK"])}


# ---------------------------------------------------------------------------
# entry point

def _run_verify(cfg):
    preset = get_preset(cfg.preset)
    built = preset.build()
    checks = []
    for name in cfg.checks:
        checks.extend(_VERIFIERS[name](preset, built, cfg.order))
    rep = make_report(cfg.preset, checks)
    text = render(rep)
    if cfg.report:
        with open(cfg.report, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if all_passed(rep) else 1


def main(argv=None):
    p = argparse.ArgumentParser(
        prog="kmatlab",
        description="exact quantum R- and K-matrix computation and "
                    "verification")
    sub = p.add_subparsers(dest="cmd", required=True)

    pp = sub.add_parser("preset", help="list or dump presets")
    pp.add_argument("action", nargs="?", choices=("list", "dump"),
                    default="list")
    pp.add_argument("name", nargs="?")

    pc = sub.add_parser("compute", help="compute an operator")
    pc.add_argument("target", choices=COMPUTE_TARGETS)
    pc.add_argument("--preset", default="split-sl2")
    pc.add_argument("--order", type=int, default=None)
    pc.add_argument("--export", default=None)

    pv = sub.add_parser("verify", help="run verification checks")
    pv.add_argument("checks", nargs="*", choices=VERIFY_CHECKS + ("all",))
    pv.add_argument("--preset", default="split-sl2")
    pv.add_argument("--order", type=int, default=None)
    pv.add_argument("--report", default=None)
    pv.add_argument("--config", default=None)

    args = p.parse_args(argv)
    try:
        if args.cmd == "preset":
            if args.action == "list" or not args.name:
                for name in sorted(PRESETS):
                    pr = PRESETS[name]
                    print(f"{name:14s} {pr.kind:9s} {pr.description}")
                return 0
            pr = get_preset(args.name)
            built = pr.build()
            doc = {"name": pr.name, "kind": pr.kind,
                   "description": pr.description,
                   "gamma": {str(k): repr(v)
                             for k, v in built["gamma"].items()},
                   "sigma": None if not built["sigma"] else
                   {str(k): repr(v) for k, v in built["sigma"].items()}}
            if pr.kind == "finite":
                doc["modules"] = [m.label for m in built["modules"]]
            print(json.dumps(doc, indent=2, sort_keys=True))
            return 0
        if args.cmd == "compute":
            cfg = RunConfig(preset=args.preset, checks=[],
                            order=args.order, export=args.export)
            pr = get_preset(cfg.preset)
            built = pr.build()
            doc = compute_target(args.target, pr, built, cfg.order)
            _emit(doc, cfg.export)
            return 0
        # verify
        if args.config:
            cfg = load_config(args.config)
            if args.checks:
                cfg.checks = list(args.checks)
        else:
            cfg = RunConfig(preset=args.preset, checks=[],
                            order=args.order, report=args.report)
            cfg.checks = list(args.checks)
        if cfg.checks == ["all"] or "all" in cfg.checks:
            pr = get_preset(cfg.preset)
            cfg.checks = [c for c in VERIFY_CHECKS
                          if not (pr.kind == "finite"
                                  and c == "spectral-re")
                          and not (pr.kind == "spectral"
                                   and c == "classical-limit")]
        return _run_verify(cfg)
    except (ConfigError, PresetError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
