"""Superfield origin of the harmonic (oscillator-regularized) action.

On R^{2|1}, the flat action of the superfield Phi = (1+b xi) phi, written
with the deformed product and the supertrace Tr f = int d^m x f(x, 0),
collapses to the harmonic action of the even field phi with

    Omega  = alpha theta b^2 / (1+alpha)^2,
    lambda = Lambda (1 + Omega^2).

Both actions are evaluated independently on grid fields and compared term
by term: kinetic+harmonic, mass, and quartic.  The modulus |X|^2 in the
superfield action is the pointwise graded conj(X) X evaluated at xi = 0;
the derivation of each term goes through the graded star-commutators with
the Clifford scalar taken from the exact odd structure constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .coeffs import GridFn
from .params import DeformationParams
from .starprod import odd_star_table, star_fast
from .superfun import SuperFunction


@dataclass(frozen=True)
class QftParams:
    """theta > 0, alpha not in {0, -1}; b is the superfield slope, nu the
    mass, lam the superfield coupling Lambda."""

    theta: float
    alpha: float
    b: float
    nu: float = 1.0
    lam: float = 0.5

    def __post_init__(self):
        if self.theta <= 0:
            raise ValueError("theta must be positive")
        if self.alpha in (0.0, -1.0):
            raise ValueError("alpha must differ from 0 and -1")

    @property
    def omega_pred(self) -> float:
        return self.alpha * self.theta * self.b ** 2 / (1 + self.alpha) ** 2

    @property
    def lambda_pred(self) -> float:
        return self.lam * (1 + self.omega_pred ** 2)

    def deformation(self, n: int = 0) -> DeformationParams:
        return DeformationParams(self.theta, self.alpha, 2, n)

    @property
    def clifford_scalar(self) -> complex:
        """xi star xi from the exact odd structure constants."""
        return complex(odd_star_table(self.deformation(1)).product(1, 1).coeff(0))


@dataclass
class FieldConfig:
    """Real even test field on a periodic box, decaying at the boundary."""

    phi: GridFn

    def __post_init__(self):
        edge = max(np.abs(self.phi.values[0, :]).max(),
                   np.abs(self.phi.values[:, 0]).max())
        if edge > 1e-10:
            raise ValueError(f"field does not decay at the box edge ({edge:.2e})")

    @classmethod
    def gaussian(cls, box: float, samples: int, width: float = 1.0,
                 center=(0.0, 0.0), amp: float = 1.0):
        x = -box + 2.0 * box * np.arange(samples) / samples
        xx, ww = np.meshgrid(x, x, indexing="ij")
        r2 = (xx - center[0]) ** 2 + (ww - center[1]) ** 2
        return cls(GridFn.from_samples(box, amp * np.exp(-r2 / (2 * width ** 2))))


def _node_grids(g: GridFn):
    x = g.nodes_1d()
    return np.meshgrid(x, x, indexing="ij")


def xtilde(theta: float, g: GridFn):
    """x~_mu = (2/theta) omega0_{mu nu} x_nu: (x~_1, x~_2) =
    (2w/theta, -2x/theta), divergence-free, with constant gradients."""
    xx, ww = _node_grids(g)
    x1 = GridFn.from_samples(g.box, 2.0 * ww / theta)
    x2 = GridFn.from_samples(g.box, -2.0 * xx / theta)
    grads = [(0.0, 2.0 / theta), (-2.0 / theta, 0.0)]
    return (x1, x2), grads


def _lin_star(theta: float, lin: GridFn, grad, f: GridFn, order: str) -> GridFn:
    """Exact star of a linear function with a smooth field: the plane-wave
    phase truncates at first order, f star g = fg - (i theta/2)
    (d_x f d_w g - d_w f d_x g)."""
    fx, fw = f.deriv(0), f.deriv(1)
    cross = fw.scale(grad[0]).add(fx.scale(-grad[1]))
    if order == "left":       # lin star f
        return lin.mul(f).add(cross.scale(-0.5j * theta))
    return lin.mul(f).add(cross.scale(0.5j * theta))   # f star lin


def lin_commutator(theta: float, lin: GridFn, grad, f: GridFn) -> GridFn:
    return (_lin_star(theta, lin, grad, f, "left")
            .add(_lin_star(theta, lin, grad, f, "right").scale(-1.0)))


def lin_anticommutator(theta: float, lin: GridFn, grad, f: GridFn) -> GridFn:
    return (_lin_star(theta, lin, grad, f, "left")
            .add(_lin_star(theta, lin, grad, f, "right")))


def _star2(q: QftParams, f: GridFn, g: GridFn, cache: dict = None) -> GridFn:
    key = (q.theta, id(f.values), id(g.values))
    if cache is not None and key in cache:
        return cache[key]
    p0 = q.deformation(0)
    sf = star_fast(p0, SuperFunction.from_even(0, f), SuperFunction.from_even(0, g))
    out = sf.component(0)
    if cache is not None:
        cache[key] = out
    return out


def action_harmonic(q: QftParams, omega: float, lam: float,
                    field: FieldConfig, star_cache: dict = None) -> dict:
    """1/2 sum_mu ([-(i/2) x~_mu, phi]_star)^2 + (omega^2/2) x~^2 phi^2
    + (nu^2/2) phi^2 + lam phi*phi*phi*phi, integrated over the box."""
    phi = field.phi
    (x1, x2), grads = xtilde(q.theta, phi)
    kin = 0.0
    for lin, grad in zip((x1, x2), grads):
        d = lin_commutator(q.theta, lin, grad, phi).scale(-0.5j)
        kin += 0.5 * d.mul(d).integral().real
    xt2 = x1.mul(x1).add(x2.mul(x2))
    harm = 0.5 * omega ** 2 * xt2.mul(phi).mul(phi).integral().real
    mass = 0.5 * q.nu ** 2 * phi.mul(phi).integral().real
    if lam:
        psi = _star2(q, phi, phi, star_cache)
        quartic = lam * _star2(q, psi, psi, star_cache).integral().real
        quartic_tracial = lam * psi.mul(psi).integral().real
    else:
        quartic = quartic_tracial = 0.0
    total = kin + harm + mass + quartic
    return {"kinetic": kin, "harmonic": harm, "mass": mass,
            "quartic": quartic, "quartic_tracial": quartic_tracial,
            "total": total}


def action_superfield(q: QftParams, field: FieldConfig,
                      star_cache: dict = None) -> dict:
    """The flat action of Phi = (1+b xi) phi: graded star-commutators with
    X~ = (1+b xi) x~, pointwise graded modulus, supertrace at xi = 0.

    An n=1 element splits as E + xi O with even coefficient functions; the
    graded products reduce to even stars times Clifford scalars, so every
    term is assembled from exact pieces."""
    phi = field.phi
    b, c = q.b, q.clifford_scalar
    (x1, x2), grads = xtilde(q.theta, phi)

    kin = 0.0
    for lin, grad in zip((x1, x2), grads):
        comm = lin_commutator(q.theta, lin, grad, phi)
        anti = lin_anticommutator(q.theta, lin, grad, phi)
        # [X~, Phi] = [x~, phi] (1 + 2 b xi) + b^2 c {x~, phi}
        d_even = comm.add(anti.scale(b * b * c)).scale(-0.5j)
        d_odd = comm.scale(-0.5j * 2 * b)
        # pointwise |D|^2 at xi = 0: the odd part multiplies xi^2 = 0
        kin += 0.5 * d_even.conj().mul(d_even).integral().real
        del d_odd
    mass = 0.5 * q.nu ** 2 * phi.conj().mul(phi).integral().real
    # Phi star Phi = (1 + c b^2) phi*phi + 2 b xi (phi*phi)
    psi = _star2(q, phi, phi, star_cache)
    psi_even = psi.scale(1.0 + c * b * b)
    quartic = q.lam * psi_even.conj().mul(psi_even).integral().real
    total = kin + mass + quartic
    return {"kinetic": kin, "mass": mass, "quartic": quartic, "total": total}


def identity_check(q: QftParams, field: FieldConfig,
                   star_cache: dict = None) -> dict:
    """Per-term comparison of the superfield action with the harmonic
    action at the predicted (Omega, lambda)."""
    sf = action_superfield(q, field, star_cache)
    harm = action_harmonic(q, q.omega_pred, q.lambda_pred, field, star_cache)
    scale = max(abs(harm["total"]), 1e-300)
    per_term = {
        "kinetic": abs(sf["kinetic"] - harm["kinetic"] - harm["harmonic"]),
        "mass": abs(sf["mass"] - harm["mass"]),
        "quartic": abs(sf["quartic"] - harm["quartic"]),
    }
    # empirical couplings, fitted rather than assumed
    free = action_harmonic(q, 0.0, 0.0, field, star_cache)
    xt_w = harm["harmonic"] / max(q.omega_pred ** 2, 1e-300) \
        if q.omega_pred else None
    omega2_fit = ((sf["kinetic"] - free["kinetic"]) / xt_w
                  if xt_w else 0.0)
    lambda_fit = sf["quartic"] * q.lambda_pred / max(harm["quartic"], 1e-300)
    return {"superfield": sf, "harmonic": harm,
            "per_term": per_term,
            "residual": abs(sf["total"] - harm["total"]) / scale,
            "per_term_relative": {k: v / scale for k, v in per_term.items()},
            "omega_pred": q.omega_pred, "omega2_fit": float(omega2_fit),
            "lambda_pred": q.lambda_pred, "lambda_fit": float(lambda_fit)}


def parameter_sweep(nu: float = 1.0, lam: float = 0.5, box: float = 9.0,
                    samples: int = 128,
                    thetas=(0.5, 1.0, 2.0), alphas=(-0.5, 0.3, 1.0),
                    bs=(0.0, 0.7, 1.3)) -> dict:
    """The 27-point sweep with two Gaussian fields; worst relative
    residual per point recorded."""
    fields = [FieldConfig.gaussian(box, samples, width=0.9),
              FieldConfig.gaussian(box, samples, width=1.2,
                                   center=(0.4, -0.3), amp=0.8)]
    rows = []
    worst = 0.0
    cache: dict = {}
    for th, al, b in product(thetas, alphas, bs):
        q = QftParams(th, al, b, nu, lam)
        res = max(identity_check(q, f, cache)["residual"] for f in fields)
        worst = max(worst, res)
        rows.append({"theta": th, "alpha": al, "b": b,
                     "omega_pred": q.omega_pred,
                     "lambda_pred": q.lambda_pred, "residual": res})
    return {"points": rows, "worst_residual": worst,
            "passed": bool(worst < 1e-6)}
