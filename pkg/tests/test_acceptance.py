"""Acceptance gate: eleven end-to-end checks at their stated tolerances.

Each test prints a single pass/fail line with the measured residual so the
run log is auditable at a glance (use ``pytest -s`` to see the lines for
passing tests)."""

import itertools
import time

import numpy as np
import pytest

from superstar.params import DeformationParams

THETA, ALPHA = 1.3, 0.4


def _report(name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    print(line)
    assert ok, line


# ---------------------------------------------------------------- 1
def test_01_exterior_algebra_laws_exhaustive():
    from superstar.grassmann import SuperNumber, parity, sign_eps
    t0 = time.time()
    worst_cases = 0
    for n in range(6):
        dim = 1 << n
        # structure constants: xi^I xi^J = eps(I,J) xi^{I|J}
        for a in range(dim):
            for b in range(dim):
                x = SuperNumber.monomial(n, a)
                y = SuperNumber.monomial(n, b)
                prod = x * y
                s = sign_eps(a, b)
                expect = (SuperNumber.monomial(n, a | b, float(s)) if s
                          else SuperNumber.scalar(n, 0.0))
                if (prod - expect).norm1() != 0.0:
                    worst_cases += 1
                sign = -1.0 if (parity(a) * parity(b)) & 1 else 1.0
                if (x * y - sign * (y * x)).norm1() != 0.0:
                    worst_cases += 1
        # associativity on all triples
        for a, b, c in itertools.product(range(dim), repeat=3):
            x, y, z = (SuperNumber.monomial(n, bits) for bits in (a, b, c))
            if ((x * y) * z - x * (y * z)).norm1() != 0.0:
                worst_cases += 1
    dt = time.time() - t0
    _report("exterior algebra laws (n <= 5, exhaustive, exact)",
            worst_cases == 0 and dt < 10.0,
            f"violations {worst_cases}, runtime {dt:.1f}s (limit 10s)")


# ---------------------------------------------------------------- 2
def test_02_star_associativity_and_evaluator_agreement():
    from superstar.coeffs import GaussianPoly, PlaneWaveSum
    from superstar.starprod import star_direct_at, star_fast
    from superstar.superfun import SuperFunction
    rng = np.random.default_rng(20260826)
    t0 = time.time()
    worst = 0.0
    # randomized plane-wave triples, n in {0, 1, 2}
    for n in (0, 1, 2):
        p = DeformationParams(THETA, ALPHA, 2, n)
        for _ in range(4):
            fs = [SuperFunction(2, n, {b: PlaneWaveSum.wave(
                rng.normal(size=2), complex(*rng.normal(size=2)))
                for b in range(1 << n)}) for _ in range(3)]
            lhs = star_fast(p, star_fast(p, fs[0], fs[1]), fs[2])
            rhs = star_fast(p, fs[0], star_fast(p, fs[1], fs[2]))
            d = lhs - rhs
            worst = max(worst, max((max(abs(a) for a in c.terms.values())
                                    for c in d.comps.values() if c.terms),
                                   default=0.0))
    # randomized Gaussian triples on grids (sparse odd support at n = 2)
    supports = {0: [0], 1: [0, 1], 2: [0, 3]}
    for n in (0, 1, 2):
        p = DeformationParams(THETA, ALPHA, 2, n)
        for _ in range(2):
            fs = [SuperFunction(2, n, {b: GaussianPoly.gaussian(
                2, rng.uniform(0.6, 1.1), center=rng.normal(scale=0.4, size=2),
                amp=complex(*rng.normal(size=2))).to_grid(8.0, 64)
                for b in supports[n]}) for _ in range(3)]
            lhs = star_fast(p, star_fast(p, fs[0], fs[1]), fs[2])
            rhs = star_fast(p, fs[0], star_fast(p, fs[1], fs[2]))
            d = lhs - rhs
            worst = max(worst, max((float(np.abs(c.values).max())
                                    for c in d.comps.values()), default=0.0))
    # fast vs direct evaluator
    p = DeformationParams(THETA, ALPHA, 2, 1)
    g1 = SuperFunction(2, 1, {0: GaussianPoly.gaussian(2, 0.7),
                              1: GaussianPoly.gaussian(2, 0.8, amp=0.5)})
    g2 = SuperFunction(2, 1, {0: GaussianPoly.gaussian(2, 0.9, (0.4, -0.3),
                                                       amp=0.8),
                              1: GaussianPoly.gaussian(2, 1.0, amp=-0.3)})
    fast = star_fast(p, g1.to_grid(8.0, 64), g2.to_grid(8.0, 64))
    pts = rng.normal(scale=0.8, size=(4, 2))
    direct = star_direct_at(p, g1, g2, pts)
    dworst = 0.0
    for i, pt in enumerate(pts):
        fv = fast.eval([pt])[0]
        for b in range(2):
            dworst = max(dworst, abs(fv.coeff(b) - direct[i].coeff(b)))
    dt = time.time() - t0
    _report("star associativity + evaluator agreement",
            worst < 1e-6 and dworst < 1e-8 and dt < 120.0,
            f"assoc {worst:.3e} (tol 1e-6), fast-vs-direct {dworst:.3e} "
            f"(tol 1e-8), runtime {dt:.1f}s (limit 120s)")


# ---------------------------------------------------------------- 3
def test_03_tracial_and_conjugation():
    from superstar.coeffs import GaussianPoly
    from superstar.starprod import tracial_check
    from superstar.superfun import SuperFunction
    rng = np.random.default_rng(7)
    p = DeformationParams(THETA, ALPHA, 2, 1)
    t0 = time.time()

    def rand_fun(homog=None):
        comps = {}
        bits = [0] if homog == 0 else [1] if homog == 1 else [0, 1]
        for b in bits:
            comps[b] = GaussianPoly.gaussian(
                2, rng.uniform(0.6, 1.0), center=rng.normal(scale=0.3, size=2),
                amp=complex(*rng.normal(size=2))).to_grid(8.0, 64)
        return SuperFunction(2, 1, comps)

    worst_tr, worst_cj = 0.0, 0.0
    for i in range(20):
        f1 = rand_fun(homog=i % 2)
        f2 = rand_fun(homog=(i // 2) % 2)
        rep = tracial_check(p, f1, f2)
        worst_tr = max(worst_tr, rep["trace_residual"])
        worst_cj = max(worst_cj, rep["conjugation_residual"] or 0.0)
    dt = time.time() - t0
    _report("tracial property + graded conjugation (20 pairs)",
            worst_tr < 1e-8 and worst_cj < 1e-8 and dt < 60.0,
            f"trace {worst_tr:.3e}, conj {worst_cj:.3e} (tol 1e-8), "
            f"runtime {dt:.1f}s (limit 60s)")


# ---------------------------------------------------------------- 4
def test_04_commutative_limit_rates():
    from superstar.coeffs import PlaneWaveSum
    from superstar.starprod import commutative_limit_check
    from superstar.superfun import SuperFunction
    # probed on the even sector (n = 0), where the bracket reference
    # normalization applies
    p0 = DeformationParams(THETA, ALPHA, 2, 0)
    f1 = SuperFunction(2, 0, {0: PlaneWaveSum.wave((0.9, -0.4), 1.0)})
    f2 = SuperFunction(2, 0, {0: PlaneWaveSum.wave((-0.3, 0.7), 0.8 - 0.2j)})
    rep = commutative_limit_check(p0, f1, f2, np.geomspace(0.02, 0.4, 6))
    pr, br = rep["product_rate"], rep["bracket_rate"]
    _report("commutative limit rates",
            abs(pr - 1) < 0.1 and abs(br - 2) < 0.1,
            f"product rate {pr:.4f} (target 1 +- 10%), "
            f"bracket rate {br:.4f} (target 2 +- 10%)")


# ---------------------------------------------------------------- 5
def test_05_sigma_closure():
    from superstar.quantization import TruncatedBasis
    from superstar.supercstar import sigma_adjoint_check
    p = DeformationParams(THETA, ALPHA, 2, 1)
    t0 = time.time()
    rep = sigma_adjoint_check(p, TruncatedBasis(2, 1, 32, THETA))
    dt = time.time() - t0
    sq, au = rep["square_residual"], rep["almost_unitary_residual"]
    _report("Sigma closure on 32 Hermite levels "
            "(Sigma^2 = r, Sigma^dag = r Sigma^inv)",
            sq < 1e-9 and au < 1e-9 and dt < 30.0,
            f"square {sq:.3e}, adjoint-closure {au:.3e} (tol 1e-9), "
            f"runtime {dt:.1f}s (limit 30s)")


# ---------------------------------------------------------------- 6
def test_06_representation_property_and_unitarity():
    from superstar.quantization import (GroupElement, TruncatedBasis,
                                        rep_property_check, unitarity_check)
    rng = np.random.default_rng(11)
    p = DeformationParams(THETA, ALPHA, 2, 1)
    basis = TruncatedBasis(2, 1, 32, THETA)
    t0 = time.time()
    ok = True
    worst_rep, worst_uni = 0.0, 0.0
    for _ in range(4):
        z = rng.normal(size=3)
        x1 = z[:2] / max(np.linalg.norm(z[:2]), 1.0)   # ||(x, w)|| <= 1
        g1 = GroupElement.general(p, x1, z[2:].reshape(1, 1) * 0.5)
        z2 = rng.normal(size=3)
        x2 = z2[:2] / max(np.linalg.norm(z2[:2]), 1.0)
        g2 = GroupElement.general(p, x2, z2[2:].reshape(1, 1) * 0.5)
        rep = rep_property_check(p, basis, g1, g2)
        uni = unitarity_check(p, basis, g1)
        ok = ok and rep["ok"] and uni["ok"]
        worst_rep = max(worst_rep, rep["projected_residual"])
        worst_uni = max(worst_uni, uni["projected_residual"])
    dt = time.time() - t0
    _report("representation property + superhermitian unitarity",
            ok and dt < 120.0,
            f"rep residual {worst_rep:.3e}, unitarity residual "
            f"{worst_uni:.3e} (both below leakage bound), "
            f"runtime {dt:.1f}s (limit 120s)")


# ---------------------------------------------------------------- 7
def test_07_quantization_homomorphism_sweep():
    from superstar.coeffs import GaussianPoly
    from superstar.quantization import (TruncatedBasis, omega_map,
                                        projected_residual)
    from superstar.starprod import star_fast
    from superstar.superfun import SuperFunction
    p = DeformationParams(THETA, ALPHA, 2, 1)
    t0 = time.time()

    def gg(a, amp, c):
        return GaussianPoly.gaussian(2, a, center=c, amp=amp).to_grid(9.0, 96)

    # Gaussian tensor (1 + xi) symbols, displaced so truncation bites
    f1 = SuperFunction(2, 1, {0: gg(0.5, 1.0, (2.5, -2.0)),
                              1: gg(0.5, 0.5, (2.5, -2.0))})
    f2 = SuperFunction(2, 1, {0: gg(0.6, 0.8, (-1.5, 2.2)),
                              1: gg(0.6, -0.3, (-1.5, 2.2))})
    f12 = star_fast(p, f1, f2)
    res = {}
    for lv in (16, 32, 48):
        basis = TruncatedBasis(2, 1, lv, THETA)
        prod = omega_map(p, basis, f1).compose(omega_map(p, basis, f2))
        diff = prod - omega_map(p, basis, f12)
        scale = max(np.abs(m).max() for m in prod.comps.values())
        res[lv] = max(projected_residual(basis, m, 8)
                      for m in diff.comps.values()) / scale
    dt = time.time() - t0
    floor = 1e-10   # double-precision floor of the mode sums
    decreasing = (res[32] < res[16]
                  and res[48] <= max(5.0 * res[32], floor))
    _report("Omega(f1 * f2) = Omega(f1) Omega(f2), 16 -> 32 -> 48 levels",
            decreasing and res[48] < 1e-4 and dt < 600.0,
            f"residuals {res[16]:.3e} -> {res[32]:.3e} -> {res[48]:.3e} "
            f"(final tol 1e-4), runtime {dt:.1f}s (limit 600s)")


# ---------------------------------------------------------------- 8
def test_08_weyl_relations_hopf_and_xi():
    from superstar.udf import (TorusElement, comodule_check,
                               hopf_axiom_check, theta_form,
                               translation_action, xi_multiplicativity)
    p = DeformationParams(THETA, ALPHA, 2, 1)
    act = translation_action(p)
    t0 = time.time()

    def wrap(x):
        return (x + np.pi) % (2 * np.pi) - np.pi

    # Theta antisymmetric and bilinear (mod 2 pi) on a phase table
    ks = [(1, 0), (0, 1), (1, -1), (2, 1), (-1, 2)]
    worst_phase = 0.0
    for k in ks:
        for l in ks:
            t_kl = theta_form(p, act, k, l)
            worst_phase = max(
                worst_phase,
                abs(wrap(t_kl + theta_form(p, act, l, k))),
                abs(wrap(t_kl - THETA * (k[0] * l[1] - k[1] * l[0]))))
    # Hopf and comodule axioms, exact on spans
    hopf = hopf_axiom_check(2, 1)
    hopf_worst = max(hopf[k] for k in ("coassoc", "counit", "antipode",
                                       "eps_morphism"))
    com = comodule_check(p, act, samples=2,
                         rng=np.random.default_rng(3))
    com_worst = max(v for k, v in com.items() if k != "passed")
    # Xi multiplicativity under a truncation sweep
    a = TorusElement.basis(2, 1, (1, 0)) \
        + TorusElement.basis(2, 1, (0, 0), 1, 0.5)
    b = TorusElement.basis(2, 1, (0, 1), 0, 0.8) \
        + TorusElement.basis(2, 1, (1, -1), 1, -0.3j)
    xi = xi_multiplicativity(p, act, a, b, levels=16, m_cyc=4)
    xi_final = xi["residuals"][32]
    dt = time.time() - t0
    _report("Weyl phase table + Hopf/comodule axioms + Xi multiplicativity",
            worst_phase < 1e-12 and hopf_worst == 0.0 and com_worst < 1e-9
            and xi_final < 1e-4,
            f"phase {worst_phase:.3e}, hopf {hopf_worst:.3e}, "
            f"comodule {com_worst:.3e}, xi {xi_final:.3e} (tol 1e-4), "
            f"runtime {dt:.1f}s")


# ---------------------------------------------------------------- 9
def test_09_superadjoint_laws():
    from superstar.quantization import SuperOperator, TruncatedBasis
    from superstar.supercstar import make_hilbert_super, superadjoint
    rng = np.random.default_rng(5)
    t0 = time.time()
    h = make_hilbert_super(TruncatedBasis(2, 1, 32, THETA))   # dim 64
    assert h.dimension <= 64

    def rand_op(deg):
        g = h.grading
        mask = ((g[:, None] + g[None, :]) % 2 == deg)
        mat = (rng.normal(size=(h.dimension,) * 2)
               + 1j * rng.normal(size=(h.dimension,) * 2)) * mask
        return SuperOperator.from_matrix(h.basis, mat), deg

    worst = 0.0
    for ds in (0, 1):
        for dt_ in (0, 1):
            s, _ = rand_op(ds)
            t, _ = rand_op(dt_)
            invol = np.abs(superadjoint(h, superadjoint(h, t)).body()
                           - t.body()).max()
            lhs = superadjoint(h, s.compose(t)).body()
            sign = -1.0 if (ds * dt_) % 2 else 1.0
            rhs = sign * superadjoint(h, t).compose(
                superadjoint(h, s)).body()
            scale = max(np.abs(lhs).max(), 1.0)
            worst = max(worst, invol / scale, np.abs(lhs - rhs).max() / scale)
    dt = time.time() - t0
    _report("superadjoint laws ((T+)+ = T, (ST)+ = (-1)^{|S||T|} T+ S+)",
            worst < 1e-12 and dt < 5.0,
            f"worst residual {worst:.3e} (tol 1e-12), dim {h.dimension}, "
            f"runtime {dt:.1f}s (limit 5s)")


# ---------------------------------------------------------------- 10
def test_10_superfield_identity_sweep():
    from superstar.qft import parameter_sweep
    t0 = time.time()
    rep = parameter_sweep()
    dt = time.time() - t0
    _report("superfield-origin identity (27-point sweep, 128^2 grid)",
            rep["worst_residual"] < 1e-6 and dt < 300.0,
            f"worst residual {rep['worst_residual']:.3e} (tol 1e-6), "
            f"{len(rep['points'])} points, runtime {dt:.1f}s (limit 300s)")


# ---------------------------------------------------------------- 11
def test_11_oscillatory_integral_stability():
    from superstar.oscint import benchmark_gaussian_free
    t0 = time.time()
    rep = benchmark_gaussian_free(1.0)
    dt = time.time() - t0
    _report("oscillatory-integral regularization",
            rep["k_spread"] < 1e-6 and rep["quad_spread"] < 1e-8
            and rep["abs_error"] < 1e-4,
            f"k-spread {rep['k_spread']:.3e} (tol 1e-6), quad "
            f"{rep['quad_spread']:.3e} (tol 1e-8), 2pi error "
            f"{rep['abs_error']:.3e} (tol 1e-4), runtime {dt:.1f}s")
