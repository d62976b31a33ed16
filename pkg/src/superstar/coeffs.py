"""Coefficient-function backends for the even variables.

Three interchangeable models of a smooth function on R^m:

* PlaneWaveSum  -- finite sums  sum_j a_j e^{i k_j . x}  (exact arithmetic).
* GaussianPoly  -- P(x - x0) exp(-(x-x0)^T A (x-x0)) e^{i k . x}; Re(A) > 0.
* GridFn       -- periodic samples on the box [-L, L)^m, spectral arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class BackendMismatch(TypeError):
    pass


class AliasingError(ValueError):
    pass


_KEY_DECIMALS = 12


def _kkey(k) -> tuple:
    return tuple(round(float(x), _KEY_DECIMALS) for x in k)


@dataclass(frozen=True)
class PlaneWaveSum:
    """sum_j amp_j exp(i k_j . x) with distinct wavevectors."""

    dim: int
    terms: dict = field(default_factory=dict)  # k-tuple -> complex amp

    @classmethod
    def wave(cls, k, amp=1.0):
        k = tuple(float(x) for x in k)
        return cls(len(k), {_kkey(k): complex(amp)})

    @classmethod
    def const(cls, dim, amp=1.0):
        return cls(dim, {(0.0,) * dim: complex(amp)})

    def eval(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        out = np.zeros(pts.shape[0], dtype=complex)
        for k, a in self.terms.items():
            out += a * np.exp(1j * pts @ np.asarray(k))
        return out

    def add(self, other):
        _check(self, other)
        terms = dict(self.terms)
        for k, a in other.terms.items():
            terms[k] = terms.get(k, 0j) + a
        return PlaneWaveSum(self.dim, {k: a for k, a in terms.items() if a != 0})

    def scale(self, c):
        return PlaneWaveSum(self.dim, {k: c * a for k, a in self.terms.items()})

    def mul(self, other):
        _check(self, other)
        terms: dict = {}
        for k1, a1 in self.terms.items():
            for k2, a2 in other.terms.items():
                k = _kkey(np.add(k1, k2))
                terms[k] = terms.get(k, 0j) + a1 * a2
        return PlaneWaveSum(self.dim, {k: a for k, a in terms.items() if a != 0})

    def conj(self):
        return PlaneWaveSum(
            self.dim, {_kkey(np.negative(k)): a.conjugate() for k, a in self.terms.items()}
        )

    def deriv(self, axis):
        return PlaneWaveSum(self.dim, {k: 1j * k[axis] * a for k, a in self.terms.items()})

    def integral(self, box_half_width):
        """Periodic-box convention: int e^{ikx} dx = V * delta_{k,0}."""
        vol = (2.0 * box_half_width) ** self.dim
        out = 0j
        for k, a in self.terms.items():
            if all(abs(x) < 1e-12 for x in k):
                out += vol * a
        return out

    def sup_norm(self):
        """Exact when a single term; otherwise the l1 upper bound (tight for
        commensurate wavevectors, flagged by callers that need exactness)."""
        return float(sum(abs(a) for a in self.terms.values()))

    def is_zero(self, tol=0.0):
        return all(abs(a) <= tol for a in self.terms.values())

    def to_grid(self, box, samples):
        return grid_from_callable(self.dim, box, samples, self.eval,
                                  max_wavenumber=self.max_wavenumber())

    def max_wavenumber(self):
        if not self.terms:
            return 0.0
        return max(max(abs(x) for x in k) for k in self.terms)


@dataclass(frozen=True)
class GaussianPoly:
    """P(x - x0) exp(-(x-x0)^T A (x-x0)) exp(i k . x).

    ``poly`` maps exponent tuples to complex coefficients; A is a symmetric
    matrix with positive-definite real part.
    """

    dim: int
    poly: dict
    quad: np.ndarray
    center: np.ndarray
    osc_k: np.ndarray

    @classmethod
    def gaussian(cls, dim, a=0.5, center=None, k=None, amp=1.0):
        """amp * exp(-a |x - center|^2) * e^{i k.x}"""
        center = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
        k = np.zeros(dim) if k is None else np.asarray(k, dtype=float)
        return cls(dim, {(0,) * dim: complex(amp)}, np.eye(dim) * a, center, k)

    def eval(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        u = pts - self.center
        out = np.zeros(pts.shape[0], dtype=complex)
        for expo, c in self.poly.items():
            mono = np.ones(pts.shape[0], dtype=complex)
            for ax, e in enumerate(expo):
                if e:
                    mono *= u[:, ax] ** e
            out += c * mono
        out *= np.exp(-np.einsum("pi,ij,pj->p", u, self.quad, u))
        out *= np.exp(1j * pts @ self.osc_k)
        return out

    def scale(self, c):
        return GaussianPoly(self.dim, {e: c * v for e, v in self.poly.items()},
                            self.quad, self.center, self.osc_k)

    def add(self, other):
        _check(self, other)
        if (np.allclose(self.quad, other.quad) and np.allclose(self.center, other.center)
                and np.allclose(self.osc_k, other.osc_k)):
            poly = dict(self.poly)
            for e, v in other.poly.items():
                poly[e] = poly.get(e, 0j) + v
            return GaussianPoly(self.dim, poly, self.quad, self.center, self.osc_k)
        raise BackendMismatch("GaussianPoly addition needs matching envelopes; "
                              "convert to GridFn for general sums")

    def mul(self, other):
        _check(self, other)
        if not np.allclose(self.center, other.center):
            raise BackendMismatch("GaussianPoly product needs a common center; "
                                  "convert to GridFn instead")
        poly: dict = {}
        for e1, c1 in self.poly.items():
            for e2, c2 in other.poly.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                poly[e] = poly.get(e, 0j) + c1 * c2
        return GaussianPoly(self.dim, poly, self.quad + other.quad, self.center,
                            self.osc_k + other.osc_k)

    def conj(self):
        return GaussianPoly(self.dim, {e: v.conjugate() for e, v in self.poly.items()},
                            self.quad.conjugate(), self.center, -self.osc_k)

    def deriv(self, axis):
        poly: dict = {}

        def acc(e, v):
            if v != 0:
                poly[e] = poly.get(e, 0j) + v

        for e, c in self.poly.items():
            # d/dx of the monomial
            if e[axis]:
                e_dn = tuple(v - 1 if ax == axis else v for ax, v in enumerate(e))
                acc(e_dn, c * e[axis])
            # envelope: -2 (A u)_axis, one poly degree up per column
            for ax2 in range(self.dim):
                e_up = tuple(v + 1 if ax == ax2 else v for ax, v in enumerate(e))
                acc(e_up, -2.0 * c * self.quad[axis, ax2])
            # oscillation
            acc(e, 1j * self.osc_k[axis] * c)
        return GaussianPoly(self.dim, poly, self.quad, self.center, self.osc_k)

    def integral(self, box_half_width=None):
        """Integral over R^m by Gauss-Legendre quadrature on a decay box."""
        hw = self._decay_half_width() if box_half_width is None else box_half_width
        nodes = 160
        return quad_box(self.eval, self.dim, self.center, hw, nodes)

    def _decay_half_width(self):
        lam = float(np.linalg.eigvalsh(self.quad.real).min())
        deg = max((sum(e) for e in self.poly), default=0)
        return np.sqrt((40.0 + 6.0 * deg) / max(lam, 1e-12))

    def sup_norm(self, samples_per_axis=201):
        hw = self._decay_half_width()
        axes = [np.linspace(self.center[ax] - hw, self.center[ax] + hw, samples_per_axis)
                for ax in range(self.dim)]
        grids = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
        return float(np.abs(self.eval(pts)).max())

    def is_zero(self, tol=0.0):
        return all(abs(v) <= tol for v in self.poly.values())

    def to_grid(self, box, samples):
        return grid_from_callable(self.dim, box, samples, self.eval,
                                  max_wavenumber=float(np.abs(self.osc_k).max(initial=0.0)))


@dataclass(frozen=True)
class GridFn:
    """Periodic samples on [-L, L)^m; spectral differentiation and products."""

    dim: int
    box: float
    values: np.ndarray

    @classmethod
    def from_samples(cls, box, values):
        values = np.asarray(values, dtype=complex)
        return cls(values.ndim, float(box), values)

    @property
    def n_samples(self):
        return self.values.shape[0]

    def nodes_1d(self):
        n = self.n_samples
        return -self.box + 2.0 * self.box * np.arange(n) / n

    def mode_wavenumbers(self):
        n = self.n_samples
        return np.fft.fftfreq(n, d=2.0 * self.box / n) * 2.0 * np.pi

    def _twist(self):
        # nodes start at -L, fftn assumes the origin at sample 0: true
        # plane-wave amplitudes differ by exp(+i k L) = (-1)^{n_k} per axis
        n = self.n_samples
        nk = np.rint(np.fft.fftfreq(n) * n).astype(int)
        s1 = np.where(nk % 2 == 0, 1.0, -1.0)
        out = np.ones((n,) * self.dim)
        for ax in range(self.dim):
            shape = [1] * self.dim
            shape[ax] = -1
            out = out * s1.reshape(shape)
        return out

    def modes(self):
        return np.fft.fftn(self.values) / self.values.size * self._twist()

    @classmethod
    def from_modes(cls, box, modes):
        tmp = cls(modes.ndim, float(box), np.asarray(modes, dtype=complex))
        vals = np.fft.ifftn(modes * tmp._twist() * modes.size)
        return cls(modes.ndim, float(box), vals)

    def eval(self, pts):
        """Trigonometric interpolation at arbitrary points (exact at nodes)."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        md = self.modes()
        ks = self.mode_wavenumbers()
        sig = np.abs(md) > 1e-16 * max(1.0, np.abs(md).max())
        idx = np.argwhere(sig)
        amps = md[sig]
        kvecs = ks[idx]  # (S, dim)
        out = np.zeros(pts.shape[0], dtype=complex)
        chunk = max(1, 2_000_000 // max(1, len(amps)))
        for lo in range(0, pts.shape[0], chunk):
            out[lo:lo + chunk] = np.exp(1j * pts[lo:lo + chunk] @ kvecs.T) @ amps
        return out

    def add(self, other):
        self._compat(other)
        return GridFn(self.dim, self.box, self.values + other.values)

    def scale(self, c):
        return GridFn(self.dim, self.box, c * self.values)

    def mul(self, other):
        self._compat(other)
        return GridFn(self.dim, self.box, self.values * other.values)

    def conj(self):
        return GridFn(self.dim, self.box, self.values.conjugate())

    def deriv(self, axis):
        md = self.modes()
        ks = self.mode_wavenumbers()
        shape = [1] * self.dim
        shape[axis] = -1
        md = md * (1j * ks.reshape(shape))
        return GridFn.from_modes(self.box, md)

    def integral(self, box_half_width=None):
        h = (2.0 * self.box / self.n_samples) ** self.dim
        return complex(self.values.sum() * h)

    def sup_norm(self):
        return float(np.abs(self.values).max())

    def is_zero(self, tol=0.0):
        return bool(np.all(np.abs(self.values) <= tol))

    def to_grid(self, box, samples):
        if abs(box - self.box) < 1e-12 and samples == self.n_samples:
            return self
        axes = [np.linspace(-box, box, samples, endpoint=False)] * self.dim
        grids = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
        vals = self.eval(pts).reshape((samples,) * self.dim)
        return GridFn(self.dim, box, vals)

    def _compat(self, other):
        _check(self, other)
        if abs(self.box - other.box) > 1e-12 or self.values.shape != other.values.shape:
            raise BackendMismatch("GridFn boxes/sampling differ")


def _check(a, b):
    if type(a) is not type(b):
        raise BackendMismatch(f"backend mismatch: {type(a).__name__} vs {type(b).__name__}")
    if a.dim != b.dim:
        raise BackendMismatch("dimension mismatch")


def grid_from_callable(dim, box, samples, fn, max_wavenumber=0.0):
    """Sample an analytic function onto a periodic grid.

    Rejects conversions whose oscillation would alias: we require
    |k| < pi * N / (2 L), half the sampling bandwidth.
    """
    kmax_grid = np.pi * samples / (2.0 * box)
    if max_wavenumber >= kmax_grid:
        raise AliasingError(
            f"wavenumber {max_wavenumber:.3g} >= pi*N/(2L) = {kmax_grid:.3g}")
    axes = [np.linspace(-box, box, samples, endpoint=False)] * dim
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    vals = fn(pts).reshape((samples,) * dim)
    return GridFn(dim, float(box), vals)


def quad_box(fn, dim, center, half_width, nodes):
    """Tensor Gauss-Legendre quadrature of ``fn`` over center +- half_width."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    axes = [center[ax] + half_width * x for ax in range(dim)]
    weights = [half_width * w for _ in range(dim)]
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    wg = np.meshgrid(*weights, indexing="ij")
    wtot = np.ones(pts.shape[0])
    for g in wg:
        wtot = wtot * g.ravel()
    return complex(np.sum(fn(pts) * wtot))


def coeff_zero_like(c):
    if isinstance(c, PlaneWaveSum):
        return PlaneWaveSum(c.dim, {})
    if isinstance(c, GaussianPoly):
        return c.scale(0.0)
    if isinstance(c, GridFn):
        return GridFn(c.dim, c.box, np.zeros_like(c.values))
    raise TypeError(type(c))
