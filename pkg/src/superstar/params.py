"""Deformation parameters and the derived constants of the graded star-product."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DeformationParams:
    """theta > 0, alpha not in {0, -1}, m even, n >= 0.

    Principal branches are used for (pi theta)^{m/2} and (i theta)^n; theta
    is restricted to positive values to keep them unambiguous.
    """

    theta: float
    alpha: float
    m: int
    n: int

    def __post_init__(self):
        if self.theta <= 0:
            raise ValueError("theta must be positive")
        if self.alpha in (0.0, -1.0):
            raise ValueError("alpha must differ from 0 and -1")
        if self.m % 2 or self.m < 0:
            raise ValueError("m must be even and nonnegative")
        if self.n < 0:
            raise ValueError("n must be nonnegative")

    # ---- constants of the Sigma operator and the star-product kernel ----

    @property
    def gamma(self) -> complex:
        t, a, m, n = self.theta, self.alpha, self.m, self.n
        return ((-1) ** (n * (n + 1) // 2) * (1j * t) ** n
                / ((np.pi * t) ** (m / 2) * (1 + a) ** n))

    @property
    def r(self) -> complex:
        t, a, m, n = self.theta, self.alpha, self.m, self.n
        return (-1) ** n * a ** n / ((np.pi * t) ** (m / 2) * (1 + a) ** n) * self.gamma

    @property
    def kappa(self) -> complex:
        t, a, m, n = self.theta, self.alpha, self.m, self.n
        return ((1j * t) ** n * (-1) ** (n * (n + 1) // 2) * a ** n
                / ((np.pi * t) ** m * (1 + a) ** (2 * n)))

    @property
    def kappa_odd(self) -> complex:
        """Odd-sector prefactor: kappa with the (pi theta)^{-m} even factor split off."""
        t, a, n = self.theta, self.alpha, self.n
        return (1j * t) ** n * (-1) ** (n * (n + 1) // 2) * a ** n / (1 + a) ** (2 * n)

    @property
    def odd_kernel_coupling(self) -> float:
        """(1+alpha)^2 / (alpha theta), the coefficient in the odd kernel phase."""
        return (1 + self.alpha) ** 2 / (self.alpha * self.theta)

    @property
    def clifford_scalar(self) -> complex:
        """xi^i star xi^i, the diagonal Clifford constant i theta alpha/(1+alpha)^2."""
        return 1j * self.theta * self.alpha / (1 + self.alpha) ** 2

    # ---- symplectic data ----

    @property
    def omega0(self) -> np.ndarray:
        """Standard symplectic matrix on R^m in the (x, w) block splitting."""
        h = self.m // 2
        top = np.hstack([np.zeros((h, h)), np.eye(h)])
        bot = np.hstack([-np.eye(h), np.zeros((h, h))])
        return np.vstack([top, bot])

    @property
    def omega_tilde(self) -> np.ndarray:
        """Rescaled even+odd form: omega0 on the even block,
        (1+alpha)^2/(2 alpha) on the odd block."""
        out = np.zeros((self.m + self.n, self.m + self.n))
        out[: self.m, : self.m] = self.omega0
        odd = (1 + self.alpha) ** 2 / (2 * self.alpha)
        for i in range(self.n):
            out[self.m + i, self.m + i] = odd
        return out

    def omega0_pair(self, k, l) -> float:
        """omega0(k, l) with the (x, w) splitting of R^m wavevectors."""
        k = np.asarray(k, dtype=float)
        l = np.asarray(l, dtype=float)
        h = self.m // 2
        return float(k[:h] @ l[h:] - k[h:] @ l[:h])

    def moyal_phase(self, k, l) -> complex:
        """Phase of e_k star e_l = phase * e_{k+l} on the even sector.

        The sign was pinned against the direct-integration oracle; see the
        derived-constants report.
        """
        return np.exp(0.5j * self.theta * self.omega0_pair(k, l))

    def derived_constants(self) -> dict:
        return {
            "theta": self.theta, "alpha": self.alpha, "m": self.m, "n": self.n,
            "gamma": _c(self.gamma), "r": _c(self.r), "kappa": _c(self.kappa),
            "kappa_odd": _c(self.kappa_odd),
            "clifford_scalar": _c(self.clifford_scalar),
            "odd_kernel_coupling": self.odd_kernel_coupling,
            "weyl_phase_convention": "e_k * e_l = exp(+i theta omega0(k,l)/2) e_{k+l}",
            "berezin_double_convention":
                "int d z1 d z2 iterates the z2 odd block before the z1 block",
        }


def _c(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]
