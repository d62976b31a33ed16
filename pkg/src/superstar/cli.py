"""Command-line front end: star products, quantization, deformations, the
superfield identity check, and the reproducibility suites.

Every run emits a machine-readable JSON report carrying the residuals, the
tolerances in force, and the derived-constants table, so convention
choices (phase signs, Clifford scalars, the Weyl phase) are auditable
artifacts.  ``SUPERSTAR_THREADS`` caps the linear-algebra thread pools.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time


def _cap_threads():
    cap = os.environ.get("SUPERSTAR_THREADS")
    if cap:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
            os.environ.setdefault(var, cap)


_cap_threads()

import numpy as np  # noqa: E402  (thread caps must precede the import)

REPORT_SCHEMA = "superstar-report/1"

TOLERANCE_PROFILES = {
    "default": {"exact": 1e-12, "quad": 1e-8, "truncation": 1e-4,
                "qft": 1e-6},
    "strict": {"exact": 1e-13, "quad": 1e-9, "truncation": 1e-5,
               "qft": 1e-7},
}


def _params(args, n=None):
    from .params import DeformationParams
    return DeformationParams(args.theta, args.alpha, args.m,
                             args.n if n is None else n)


def _write_report(path, doc):
    doc = dict(doc)
    doc["schema"] = REPORT_SCHEMA
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, default=_json_default)
    return path


def _json_default(x):
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not serializable: {type(x)}")


def _out_path(args, default_name):
    out = getattr(args, "out", None)
    if out:
        return out
    os.makedirs(args.out_dir, exist_ok=True)
    return os.path.join(args.out_dir, default_name)


def _svg_plot(path, xs, ys_by_label, title, xlabel, ylabel, loglog=True):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.4))
    for label, ys in ys_by_label.items():
        if loglog:
            ax.loglog(xs, ys, "o-", label=label)
        else:
            ax.plot(xs, ys, "o-", label=label)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


# =====================================================================
# subcommands
# =====================================================================

def cmd_star(args) -> int:
    from .starprod import star_direct_at, star_fast
    from .superfun import SuperFunction

    p = _params(args)
    with open(args.f) as fh:
        f1 = SuperFunction.from_json(fh.read())
    with open(args.g) as fh:
        f2 = SuperFunction.from_json(fh.read())
    t0 = time.time()
    out = star_fast(p, f1, f2)
    report = {"command": "star", "params": p.derived_constants(),
              "runtime_s": time.time() - t0}
    if args.direct_check:
        rng = np.random.default_rng(args.seed)
        pts = rng.normal(size=(args.direct_points, p.m))
        direct = star_direct_at(p, f1, f2, pts)
        dmat = np.array([[direct[i].coeff(b) for i in range(len(pts))]
                         for b in range(1 << p.n)])
        fast = np.array([[out.component(b).eval(pts)[i] if out.component(b)
                          else 0.0 for b in range(1 << p.n)]
                         for i in range(len(pts))]).T
        resid = float(np.abs(fast - dmat).max() /
                      max(np.abs(dmat).max(), 1e-300))
        report["fast_vs_direct_residual"] = resid
    result_path = _out_path(args, "star_result.json")
    with open(result_path, "w") as fh:
        fh.write(out.to_json())
    report["result_file"] = result_path
    rep_path = _write_report(os.path.splitext(result_path)[0] + "_report.json",
                             report)
    print(f"star: wrote {result_path} and {rep_path}")
    return 0


def cmd_quantize(args) -> int:
    from .quantization import TruncatedBasis, omega_map
    from .superfun import SuperFunction

    p = _params(args)
    with open(args.symbol) as fh:
        f = SuperFunction.from_json(fh.read())
    basis = TruncatedBasis(p.m, p.n, args.levels, p.theta)
    t0 = time.time()
    op = omega_map(p, basis, f)
    arrays = {f"comp_{b}_re": mat.real for b, mat in op.comps.items()}
    arrays.update({f"comp_{b}_im": mat.imag for b, mat in op.comps.items()})
    out = _out_path(args, "operator.npz")
    np.savez(out, levels=args.levels, m=p.m, n=p.n, theta=p.theta,
             alpha=p.alpha, **arrays)
    rep = _write_report(os.path.splitext(out)[0] + "_report.json",
                        {"command": "quantize", "levels": args.levels,
                         "params": p.derived_constants(),
                         "operator_file": out,
                         "runtime_s": time.time() - t0})
    print(f"quantize: wrote {out} and {rep}")
    return 0


def cmd_deform(args) -> int:
    from .udf import (TorusElement, comodule_check, deformed_norm_estimate,
                      hopf_axiom_check, theta_form, translation_action,
                      validate_action, weyl_phase)

    p = _params(args)
    act = translation_action(p)
    gens = [tuple(int(x) for x in chunk.split(","))
            for chunk in args.generators.split(";")]
    report = {"command": "deform", "params": p.derived_constants(),
              "generators": gens, "checks": {}}
    ok = True
    t0 = time.time()
    if "weyl" in args.check:
        rows = []
        for k in gens:
            for l in gens:
                rows.append({"k": k, "l": l,
                             "phase": weyl_phase(p, act, k, l),
                             "theta_form": theta_form(p, act, k, l)})
        report["checks"]["weyl"] = rows
    if "hopf" in args.check:
        rep = hopf_axiom_check(p.m, p.n, rng=args.seed)
        report["checks"]["hopf"] = rep
        ok = ok and rep["passed"]
    if "comodule" in args.check:
        rep = comodule_check(p, act, rng=args.seed)
        report["checks"]["comodule"] = rep
        ok = ok and rep["passed"]
    if "norm" in args.check:
        rep = validate_action(act, rng=args.seed)
        sweeps = {}
        for k in gens:
            est = deformed_norm_estimate(p, act, TorusElement.basis(p.m, p.n, k),
                                         levels=args.levels, m_cyc=args.torus_modes)
            sweeps[str(k)] = est
            ok = ok and est["converged"]
        report["checks"]["action"] = rep
        report["checks"]["norm"] = sweeps
        svg = _out_path(args, "norm_sweep.svg") if not args.out else \
            os.path.splitext(args.out)[0] + "_norm.svg"
        _svg_plot(svg, [args.levels, 2 * args.levels],
                  {kk: v["sweep"] for kk, v in sweeps.items()},
                  "operator-norm truncation sweep", "levels", "norm",
                  loglog=False)
        report["checks"]["norm_plot"] = svg
    report["runtime_s"] = time.time() - t0
    rep_path = _write_report(_out_path(args, "deform_report.json"), report)
    print(f"deform: wrote {rep_path} ({'pass' if ok else 'FAIL'})")
    return 0 if ok else 1


def cmd_qft_check(args) -> int:
    from .qft import FieldConfig, QftParams, identity_check

    q = QftParams(args.theta, args.alpha, args.b, args.nu, args.Lambda)
    field = FieldConfig.gaussian(args.box, args.grid, width=args.width)
    t0 = time.time()
    rep = identity_check(q, field)
    tol = TOLERANCE_PROFILES[args.tolerance_profile]["qft"]
    ok = rep["residual"] < tol and all(v < tol for v in
                                       rep["per_term_relative"].values())
    doc = {"command": "qft-check",
           "qft_params": {k: v for k, v in vars(args).items()
                          if isinstance(v, (int, float, str, bool))
                          or v is None},
           "omega_pred": rep["omega_pred"], "lambda_pred": rep["lambda_pred"],
           "omega2_fit": rep["omega2_fit"], "lambda_fit": rep["lambda_fit"],
           "per_term_relative": rep["per_term_relative"],
           "total_relative": rep["residual"], "tolerance": tol,
           "passed": ok, "runtime_s": time.time() - t0}
    rep_path = _write_report(_out_path(args, "qft_report.json"), doc)
    print(f"qft-check: residual {rep['residual']:.3e} "
          f"({'pass' if ok else 'FAIL'}), wrote {rep_path}")
    return 0 if ok else 1


# =====================================================================
# suites
# =====================================================================

def _suite_algebra(args, tol) -> dict:
    from .grassmann import SuperNumber, sign_eps
    rng = np.random.default_rng(args.seed)
    checks = []
    worst = 0.0
    for n in range(1, 5):
        for _ in range(8):
            def rand():
                return SuperNumber(n, {b: complex(*rng.normal(size=2))
                                       for b in range(1 << n)})
            a, b, c = rand(), rand(), rand()
            worst = max(worst, ((a * b) * c - a * (b * c)).norm1())
    checks.append({"name": "associativity n<=4", "residual": worst,
                   "tol": tol["exact"], "passed": worst <= tol["exact"]})
    cocycle = 0
    for n in (3, 4, 5):
        for i in range(1 << n):
            for j in range(1 << n):
                if i & j:
                    continue
                for k in range(1 << n):
                    if (i | j) & k:
                        continue
                    lhs = sign_eps(i, j) * sign_eps(i | j, k)
                    rhs = sign_eps(j, k) * sign_eps(i, j | k)
                    cocycle = max(cocycle, abs(lhs - rhs))
    checks.append({"name": "sign cocycle n<=5", "residual": float(cocycle),
                   "tol": 0.0, "passed": cocycle == 0})
    return {"suite": "algebra", "checks": checks}


def _suite_star(args, tol) -> dict:
    from .coeffs import GaussianPoly, PlaneWaveSum
    from .params import DeformationParams
    from .starprod import commutative_limit_check, star_fast, tracial_check
    from .superfun import SuperFunction

    rng = np.random.default_rng(args.seed)
    checks = []
    p = DeformationParams(args.theta, args.alpha, 2, 1)
    worst = 0.0
    for _ in range(4):
        fs = []
        for _ in range(3):
            comps = {b: PlaneWaveSum.wave(rng.normal(size=2),
                                          complex(*rng.normal(size=2)))
                     for b in range(2)}
            fs.append(SuperFunction(2, 1, comps))
        lhs = star_fast(p, star_fast(p, fs[0], fs[1]), fs[2])
        rhs = star_fast(p, fs[0], star_fast(p, fs[1], fs[2]))
        diff = lhs - rhs
        worst = max(worst, max(
            (max(abs(a) for a in c.terms.values()) for c in diff.comps.values()
             if c.terms), default=0.0))
    checks.append({"name": "associativity (plane waves)", "residual": worst,
                   "tol": 1e-6, "passed": worst < 1e-6})
    def gauss_grid(a, amp, center=None):
        return GaussianPoly.gaussian(2, a, center=center,
                                     amp=amp).to_grid(8.0, 64)

    g1 = SuperFunction(2, 1, {0: gauss_grid(0.7, 1.0),
                              1: gauss_grid(1.1, 0.4)})
    g2 = SuperFunction(2, 1, {0: gauss_grid(0.9, 0.8, (0.5, -0.4)),
                              1: gauss_grid(0.8, -0.3)})
    tr = tracial_check(p, g1, g2)
    checks.append({"name": "tracial property", "residual": tr["trace_residual"],
                   "tol": tol["quad"], "passed": tr["trace_residual"] < tol["quad"]})
    sweep = np.geomspace(0.02, 0.4, 6)
    # The bracket reference normalisation is tied to the odd sector; probe the
    # semiclassical rates on the purely even sector (n = 0).
    p_even = DeformationParams(args.theta, args.alpha, 2, 0)
    cl = commutative_limit_check(p_even,
                                 SuperFunction(2, 0, {0: g1.component(0)}),
                                 SuperFunction(2, 0, {0: g2.component(0)}),
                                 sweep)
    ok = abs(cl["product_rate"] - 1) < 0.1 and abs(cl["bracket_rate"] - 2) < 0.1
    checks.append({"name": "commutative limit rates",
                   "residual": max(abs(cl["product_rate"] - 1),
                                   abs(cl["bracket_rate"] - 2)),
                   "tol": 0.1, "passed": ok})
    svg = os.path.join(args.out_dir, "commutative_limit.svg")
    _svg_plot(svg, cl["theta_sequence"],
              {"|f*g - fg|": cl["product_errors"],
               "|bracket/theta - poisson|": cl["bracket_errors"]},
              "commutative limit", "theta", "error")
    return {"suite": "star", "checks": checks, "plots": [svg],
            "commutative_limit": cl}


def _suite_quantize(args, tol) -> dict:
    from .params import DeformationParams
    from .quantization import (GroupElement, TruncatedBasis,
                               rep_property_check, unitarity_check)
    from .supercstar import sigma_adjoint_check

    rng = np.random.default_rng(args.seed)
    p = DeformationParams(args.theta, args.alpha, 2, 1)
    basis = TruncatedBasis(2, 1, 32, p.theta)
    checks = []
    sig = sigma_adjoint_check(p, basis)
    for name in ("square_residual", "almost_unitary_residual"):
        checks.append({"name": f"sigma {name}", "residual": sig[name],
                       "tol": 1e-9, "passed": sig[name] < 1e-9})
    g1 = GroupElement.even(p, rng.uniform(-1, 1, size=2) * 0.5, a=0.3)
    g2 = GroupElement.even(p, rng.uniform(-1, 1, size=2) * 0.5, a=-0.1)
    rp = rep_property_check(p, basis, g1, g2)
    checks.append({"name": "rep property (projected)",
                   "residual": rp["projected_residual"],
                   "tol": rp["leakage_bound"], "passed": rp["ok"]})
    un = unitarity_check(p, basis, g1)
    checks.append({"name": "unitarity (projected)",
                   "residual": un["projected_residual"],
                   "tol": un["leakage_bound"], "passed": un["ok"]})
    return {"suite": "quantize", "checks": checks}


def _suite_cstar(args, tol) -> dict:
    from .params import DeformationParams
    from .quantization import SuperOperator, TruncatedBasis
    from .supercstar import (cstar_norm_check, make_hilbert_super,
                             superadjoint, superadjoint_closed_form)

    rng = np.random.default_rng(args.seed)
    p = DeformationParams(args.theta, args.alpha, 2, 1)
    basis = TruncatedBasis(2, 1, 16, p.theta)
    h = make_hilbert_super(basis)
    checks = []
    worst_inv = worst_form = 0.0
    for _ in range(6):
        mat = rng.normal(size=(basis.size, basis.size)) \
            + 1j * rng.normal(size=(basis.size, basis.size))
        t = SuperOperator.from_matrix(basis, mat)
        td = superadjoint(h, t)
        worst_inv = max(worst_inv, np.abs(superadjoint(h, td).body()
                                          - t.body()).max())
        worst_form = max(worst_form, np.abs(
            td.body() - superadjoint_closed_form(h, t).body()).max())
    checks.append({"name": "superadjoint involutive", "residual": worst_inv,
                   "tol": 1e-12, "passed": worst_inv < 1e-12})
    checks.append({"name": "pairing vs closed form", "residual": worst_form,
                   "tol": 1e-12, "passed": worst_form < 1e-12})
    rep = cstar_norm_check(h, [rng.normal(size=(basis.size, basis.size))
                               for _ in range(3)], rng=args.seed)
    checks.append({"name": "dagger anti-multiplicative", "residual": 0.0,
                   "tol": 1e-10, "passed": rep["anti_multiplicative"]})
    return {"suite": "cstar", "checks": checks,
            "cstar_gaps": [pair["cstar_gap"] for pair in rep["pairs"]]}


def _suite_deform(args, tol) -> dict:
    from .params import DeformationParams
    from .udf import (TorusElement, comodule_check, hopf_axiom_check,
                      theta_form, translation_action, validate_action,
                      xi_multiplicativity)

    p = DeformationParams(args.theta, args.alpha, 2, 1)
    act = translation_action(p)
    checks = []
    va = validate_action(act, rng=args.seed, raise_on_fail=False)
    checks.append({"name": "action axioms",
                   "residual": max(va["identity"], va["cocycle"],
                                   va["automorphism"]),
                   "tol": 1e-12, "passed": va["passed"]})
    anti = abs(theta_form(p, act, (1, 0), (0, 1))
               + theta_form(p, act, (0, 1), (1, 0)))
    checks.append({"name": "Weyl form antisymmetric", "residual": anti,
                   "tol": 1e-12, "passed": anti < 1e-12})
    hp = hopf_axiom_check(2, 1, rng=args.seed)
    checks.append({"name": "Hopf axioms",
                   "residual": max(hp["coassoc"], hp["counit"], hp["antipode"]),
                   "tol": 1e-12, "passed": hp["passed"]})
    cm = comodule_check(p, act, rng=args.seed)
    checks.append({"name": "comodule axioms",
                   "residual": max(v for k, v in cm.items() if k != "passed"),
                   "tol": 1e-9, "passed": cm["passed"]})
    xm = xi_multiplicativity(p, act, TorusElement.basis(2, 1, (1, 0)),
                             TorusElement.basis(2, 1, (0, 1), 1, 0.6),
                             levels=16, m_cyc=4)
    res = min(xm["residuals"].values())
    checks.append({"name": "Xi multiplicativity (sweep)", "residual": res,
                   "tol": tol["truncation"], "passed": res < tol["truncation"]})
    return {"suite": "deform", "checks": checks}


def _suite_qft(args, tol) -> dict:
    from .qft import FieldConfig, QftParams, identity_check

    q = QftParams(args.theta, args.alpha, args.b, args.nu, args.Lambda)
    field = FieldConfig.gaussian(args.box, args.grid, width=args.width)
    rep = identity_check(q, field)
    bad = max([rep["residual"]] + list(rep["per_term_relative"].values()))
    checks = [{"name": "superfield = harmonic (per-term)", "residual": bad,
               "tol": tol["qft"], "passed": bad < tol["qft"]}]
    return {"suite": "qft", "checks": checks,
            "omega_pred": rep["omega_pred"], "lambda_pred": rep["lambda_pred"]}


SUITES = {"algebra": _suite_algebra, "star": _suite_star,
          "quantize": _suite_quantize, "cstar": _suite_cstar,
          "deform": _suite_deform, "qft": _suite_qft}


def cmd_suite(args) -> int:
    from .params import DeformationParams

    tol = TOLERANCE_PROFILES[args.tolerance_profile]
    names = list(SUITES) if args.name == "all" else [args.name]
    os.makedirs(args.out_dir, exist_ok=True)
    results = []
    t0 = time.time()
    for name in names:
        t1 = time.time()
        res = SUITES[name](args, tol)
        res["runtime_s"] = time.time() - t1
        res["passed"] = all(c["passed"] for c in res["checks"])
        results.append(res)
    passed = all(r["passed"] for r in results)
    doc = {"command": "suite", "suites": results, "passed": passed,
           "seed": args.seed, "tolerance_profile": args.tolerance_profile,
           "derived_constants":
               DeformationParams(args.theta, args.alpha, 2, 1)
               .derived_constants(),
           "runtime_s": time.time() - t0}
    rep_path = _write_report(os.path.join(args.out_dir, "suite_report.json"),
                             doc)
    for r in results:
        status = "pass" if r["passed"] else "FAIL"
        print(f"[{status}] suite {r['suite']} ({r['runtime_s']:.1f}s)")
        for c in r["checks"]:
            mark = "ok " if c["passed"] else "BAD"
            print(f"    {mark} {c['name']}: residual {c['residual']:.3e} "
                  f"(tol {c['tol']:.3e})")
        if not r["passed"]:
            first = next(c for c in r["checks"] if not c["passed"])
            print(f"    first failure: {first['name']}")
    print(f"report: {rep_path}")
    return 0 if passed else 1


# =====================================================================
# argument parsing
# =====================================================================

def _add_common(sp):
    sp.add_argument("--theta", type=float, default=1.0)
    sp.add_argument("--alpha", type=float, default=0.3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tolerance-profile", dest="tolerance_profile",
                    choices=("strict", "default"), default="default")
    sp.add_argument("--out-dir", dest="out_dir", default="reports")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="superstar",
                                 description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("star", help="star-multiply two serialized symbols")
    _add_common(sp)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--f", required=True)
    sp.add_argument("--g", required=True)
    sp.add_argument("--direct-check", action="store_true")
    sp.add_argument("--direct-points", type=int, default=4)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_star)

    sp = sub.add_parser("quantize", help="quantize a symbol to an operator")
    _add_common(sp)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--levels", type=int, default=16)
    sp.add_argument("--symbol", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_quantize)

    sp = sub.add_parser("deform", help="super-torus deformation checks")
    _add_common(sp)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--action", choices=("torus",), default="torus")
    sp.add_argument("--generators", default="1,0;0,1")
    sp.add_argument("--check", nargs="+",
                    choices=("weyl", "hopf", "comodule", "norm"),
                    default=["weyl", "hopf", "comodule"])
    sp.add_argument("--levels", type=int, default=8)
    sp.add_argument("--torus-modes", type=int, default=4)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_deform)

    sp = sub.add_parser("qft-check", help="superfield-origin identity")
    _add_common(sp)
    sp.add_argument("--b", type=float, default=0.7)
    sp.add_argument("--nu", type=float, default=1.0)
    sp.add_argument("--Lambda", type=float, default=0.5)
    sp.add_argument("--grid", type=int, default=128)
    sp.add_argument("--box", type=float, default=9.0)
    sp.add_argument("--width", type=float, default=0.9)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_qft_check)

    sp = sub.add_parser("suite", help="run a reproducibility suite")
    _add_common(sp)
    sp.add_argument("name", choices=tuple(SUITES) + ("all",))
    sp.add_argument("--b", type=float, default=0.7)
    sp.add_argument("--nu", type=float, default=1.0)
    sp.add_argument("--Lambda", type=float, default=0.5)
    sp.add_argument("--grid", type=int, default=96)
    sp.add_argument("--box", type=float, default=9.0)
    sp.add_argument("--width", type=float, default=0.9)
    sp.set_defaults(func=cmd_suite)
    return ap


def run_suite(name: str, argv=()) -> int:
    """Programmatic entry matching ``superstar suite NAME ...``."""
    return main(["suite", name, *argv])


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
