"""Berezin-Lebesgue integration, the Hodge operation, scalar products, norms."""

from __future__ import annotations

from enum import Enum

from .coeffs import PlaneWaveSum
from .grassmann import parity, sign_eps
from .superfun import SuperFunction


class ScalarProductKind(Enum):
    SUPERHERMITIAN = "superhermitian"
    HERMITIAN_POSITIVE = "hermitian_positive"


def berezin_integrate(f: SuperFunction, box_half_width: float = None) -> complex:
    """int dz f = int dx f_{1..n}(x); the even integral follows the backend
    convention (GridFn: its own box; PlaneWaveSum: V delta_{k,0})."""
    top = (1 << f.n) - 1
    c = f.component(top)
    if c is None:
        return 0j
    return complex(c.integral(box_half_width))


def hodge(f: SuperFunction) -> SuperFunction:
    """(*f)_{complement I} = eps(I, complement I) f_I."""
    top = (1 << f.n) - 1
    comps = {}
    for b, c in f.comps.items():
        s = sign_eps(b, top ^ b)
        comps[top ^ b] = c.scale(float(s))
    return SuperFunction(f.m, f.n, comps)


def hodge_square_sign(n: int, bits: int) -> int:
    """Sign of ** on the monomial xi^I, derived (no closed formula assumed)."""
    top = (1 << n) - 1
    return sign_eps(bits, top ^ bits) * sign_eps(top ^ bits, bits)


def scalar_product(kind: ScalarProductKind, f: SuperFunction, g: SuperFunction,
                   box_half_width: float = None) -> complex:
    """<f,g> = sum_I eps(I, cI) int conj(f_I) g_{cI};  (f,g) = sum_I int conj(f_I) g_I."""
    top = (1 << f.n) - 1
    out = 0j
    for b, fc in f.comps.items():
        if kind is ScalarProductKind.SUPERHERMITIAN:
            gc = g.component(top ^ b)
            s = sign_eps(b, top ^ b)
        else:
            gc = g.component(b)
            s = 1
        if gc is None or s == 0:
            continue
        out += s * fc.conj().mul(gc).integral(box_half_width)
    return out


def l2_norm(f: SuperFunction, box_half_width: float = None) -> float:
    v = scalar_product(ScalarProductKind.HERMITIAN_POSITIVE, f, f, box_half_width)
    return float(max(v.real, 0.0)) ** 0.5


def sup_norm(f: SuperFunction) -> float:
    """||f|| = sum_I ||f_I||_inf (plane-wave sums: l1 bound, exact for a
    single wave; see PlaneWaveSum.sup_norm)."""
    return float(sum(c.sup_norm() for c in f.comps.values()))


def graded_degree(f: SuperFunction):
    return f.degree


def parity_of_index(bits: int) -> int:
    return parity(bits)
