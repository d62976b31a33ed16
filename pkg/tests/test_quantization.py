"""The induced representation, the Sigma operator, and Weyl quantization on
truncated Hermite bases.  Frozen matrices are at (theta, alpha) = (1.3, 0.4)."""

import numpy as np
import pytest

from superstar.coeffs import PlaneWaveSum
from superstar.params import DeformationParams
from superstar.quantization import (GroupElement, TruncatedBasis,
                                    displacement_matrix,
                                    odd_quantization_matrices, omega_map,
                                    projected_residual, rep_property_check,
                                    rep_U, sigma_op, unitarity_check)
from superstar.superfun import SuperFunction


@pytest.fixture
def basis(p11):
    return TruncatedBasis(2, 1, 32, p11.theta)


def test_frozen_derived_scalars(p11):
    assert p11.gamma == pytest.approx(-0.22736420441699337j, abs=1e-14)
    assert p11.r == pytest.approx(0.015905994292360722j, abs=1e-14)
    assert p11.kappa_odd == pytest.approx(-0.2653061224489796j, abs=1e-14)


def test_frozen_odd_quantization_matrices(p11):
    # O_0 = id,  O_1 = [[0, -i theta/(1+alpha)], [-alpha/(1+alpha), 0]]
    om = odd_quantization_matrices(p11)
    assert np.allclose(om[0], np.eye(2), atol=1e-12)
    expect = np.array([[0.0, -1.3j / 1.4], [-0.4 / 1.4, 0.0]])
    assert np.allclose(om[1], expect, atol=1e-12)


def test_hermite_basis_orthonormal(basis):
    xs, ws = basis.quad_rule()
    h = basis.hermite_values(xs)
    gram = (h * ws[None, :]) @ h.T
    assert np.abs(gram - np.eye(basis.levels)).max() < 1e-12


def test_sigma_squares_to_r(p11, basis):
    sig = sigma_op(p11, basis).body()
    res = np.abs(sig @ sig - p11.r * np.eye(basis.size)).max() / abs(p11.r)
    assert res < 1e-12


def test_omega_of_unit_is_identity(p11, basis):
    f = SuperFunction(2, 1, {0: PlaneWaveSum.const(2, 1.0)})
    op = omega_map(p11, basis, f)
    assert np.abs(op.body() - np.eye(basis.size)).max() < 1e-12


def test_omega_of_odd_generator(p11, basis):
    # Omega(xi) = O_1 tensor id on the even factor
    f = SuperFunction(2, 1, {1: PlaneWaveSum.const(2, 1.0)})
    op = omega_map(p11, basis, f)
    om = odd_quantization_matrices(p11)
    expect = np.kron(om[1], np.eye(basis.even_size))
    assert np.abs(op.body() - expect).max() < 1e-12


def test_displacement_group_law_low_band(p11, basis):
    k, l = np.array([1.1, 0.5]), np.array([-0.7, 0.3])
    dk = displacement_matrix(p11, basis, k)
    dl = displacement_matrix(p11, basis, l)
    dkl = displacement_matrix(p11, basis, k + l)
    ph = np.exp(0.5j * p11.theta * (k[0] * l[1] - k[1] * l[0]))
    d = dk @ dl - ph * dkl
    keep = basis.levels // 2
    assert np.abs(d[:keep, :keep]).max() < 1e-10


def test_rep_property_and_unitarity(p11, basis, rng):
    for _ in range(3):
        z = rng.normal(size=3)
        x1 = z[:2] / max(np.linalg.norm(z[:2]), 1.0)   # ||(x, w)|| <= 1
        g1 = GroupElement.general(p11, x1, z[2:].reshape(1, 1) * 0.5)
        z2 = rng.normal(size=3)
        x2 = z2[:2] / max(np.linalg.norm(z2[:2]), 1.0)
        g2 = GroupElement.general(p11, x2, z2[2:].reshape(1, 1) * 0.5)
        rep = rep_property_check(p11, basis, g1, g2)
        assert rep["ok"], rep
        uni = unitarity_check(p11, basis, g1)
        assert uni["ok"], uni


def test_rep_of_identity_element(p11, basis):
    g = GroupElement.even(p11, np.zeros(2))
    u = rep_U(p11, basis, g)
    assert np.abs(u.body() - np.eye(basis.size)).max() < 1e-12


def test_quantization_homomorphism_quick(p11):
    # plane-wave symbols compose exactly up to truncation leakage
    from superstar.starprod import star_fast
    f1 = SuperFunction(2, 1, {0: PlaneWaveSum.wave((0.8, -0.3), 1.0),
                              1: PlaneWaveSum.wave((0.8, -0.3), 0.4)})
    f2 = SuperFunction(2, 1, {0: PlaneWaveSum.wave((-0.2, 0.6), 0.7),
                              1: PlaneWaveSum.wave((-0.2, 0.6), -0.2)})
    f12 = star_fast(p11, f1, f2)
    basis = TruncatedBasis(2, 1, 24, p11.theta)
    prod = omega_map(p11, basis, f1).compose(omega_map(p11, basis, f2))
    diff = prod - omega_map(p11, basis, f12)
    scale = max(np.abs(m).max() for m in prod.comps.values())
    res = max(projected_residual(basis, m, basis.levels // 2)
              for m in diff.comps.values()) / scale
    assert res < 1e-8
