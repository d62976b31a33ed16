"""Coefficient backends: plane-wave sums, Gaussian-polynomial closed forms,
periodic grids.  Oracles are closed-form integrals and pointwise samples."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superstar.coeffs import (AliasingError, BackendMismatch, GaussianPoly,
                              GridFn, PlaneWaveSum, grid_from_callable,
                              quad_box)


def test_plane_wave_eval_and_mul():
    k1, k2 = (0.5, -0.3), (1.1, 0.7)
    w1 = PlaneWaveSum.wave(k1, 2.0 - 1.0j)
    w2 = PlaneWaveSum.wave(k2, 0.5j)
    pts = np.array([[0.2, -1.4], [3.0, 0.1]])
    direct = ((2.0 - 1.0j) * np.exp(1j * pts @ np.array(k1)))
    assert np.allclose(w1.eval(pts), direct, atol=1e-14)
    prod = w1.mul(w2)
    expect = (2.0 - 1.0j) * 0.5j * np.exp(1j * pts @ (np.array(k1) + np.array(k2)))
    assert np.allclose(prod.eval(pts), expect, atol=1e-14)


def test_plane_wave_box_integral():
    box = 4.0
    assert PlaneWaveSum.const(2, 2.0).integral(box) == (2 * box) ** 2 * 2.0
    assert PlaneWaveSum.wave((0.5, -0.3)).integral(box) == 0.0


def test_plane_wave_deriv():
    k = np.array([0.7, -1.2])
    w = PlaneWaveSum.wave(k, 1.5)
    pts = np.array([[0.3, 0.9]])
    for ax in range(2):
        assert np.allclose(w.deriv(ax).eval(pts),
                           1j * k[ax] * w.eval(pts), atol=1e-14)


def test_gaussian_integral_closed_form():
    a, amp = 0.8, 1.5
    g = GaussianPoly.gaussian(2, a, amp=amp)
    assert abs(g.integral() - amp * np.pi / a) < 1e-12


def test_gaussian_deriv_matches_finite_difference():
    g = GaussianPoly.gaussian(2, 0.6, center=(0.4, -0.2), k=(0.3, -0.7),
                              amp=1.2 - 0.5j)
    pts = np.array([[0.5, 0.1], [-1.0, 0.8]])
    h = 1e-6
    for ax in range(2):
        shift = np.zeros(2)
        shift[ax] = h
        fd = (g.eval(pts + shift) - g.eval(pts - shift)) / (2 * h)
        assert np.allclose(g.deriv(ax).eval(pts), fd, atol=1e-8)


def test_gaussian_mul_pointwise():
    # products close only over a common center; different centers must
    # be converted to grids first
    g1 = GaussianPoly.gaussian(2, 0.7, center=(0.2, 0.0))
    g2 = GaussianPoly.gaussian(2, 1.1, center=(0.2, 0.0), amp=2.0)
    pts = np.array([[0.1, -0.6], [1.2, 0.3]])
    assert np.allclose(g1.mul(g2).eval(pts), g1.eval(pts) * g2.eval(pts),
                       atol=1e-12)
    g3 = GaussianPoly.gaussian(2, 1.1, center=(-0.3, 0.4))
    with pytest.raises(BackendMismatch):
        g1.mul(g3)


def test_grid_roundtrip_and_integral():
    g = GaussianPoly.gaussian(2, 0.8, center=(0.3, -0.1), amp=1.5)
    gr = g.to_grid(8.0, 64)
    pts = np.array([[0.25, -0.75], [1.5, 2.0]])
    assert np.allclose(gr.eval(pts), g.eval(pts), atol=1e-10)
    assert abs(gr.integral() - g.integral()) < 1e-10


def test_grid_spectral_derivative():
    g = GaussianPoly.gaussian(2, 0.8, center=(0.3, -0.1))
    gr = g.to_grid(8.0, 64)
    pts = np.array([[0.2, 0.5]])
    for ax in range(2):
        assert np.allclose(gr.deriv(ax).eval(pts), g.deriv(ax).eval(pts),
                           atol=1e-9)


def test_grid_mul_is_pointwise():
    g1 = GaussianPoly.gaussian(2, 0.7).to_grid(8.0, 32)
    g2 = GaussianPoly.gaussian(2, 0.9, amp=0.5).to_grid(8.0, 32)
    assert np.allclose(g1.mul(g2).values, g1.values * g2.values, atol=1e-14)


def test_backend_mismatch_raises():
    g = GaussianPoly.gaussian(2, 0.8)
    w = PlaneWaveSum.wave((0.5, -0.3))
    with pytest.raises(BackendMismatch):
        g.mul(w)


def test_grid_from_callable_and_quad_box():
    fn = lambda pts: np.exp(-0.5 * (pts ** 2).sum(axis=-1))
    gr = grid_from_callable(2, 8.0, 64, fn)
    assert abs(gr.integral() - 2 * np.pi) < 1e-10
    val = quad_box(fn, 2, np.zeros(2), 8.0, 80)
    assert abs(val - 2 * np.pi) < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.floats(-2, 2, allow_nan=False), st.floats(-2, 2, allow_nan=False))
def test_grid_linearity(a, b):
    g1 = GaussianPoly.gaussian(2, 0.7).to_grid(6.0, 16)
    g2 = GaussianPoly.gaussian(2, 1.0, amp=0.5).to_grid(6.0, 16)
    lhs = g1.scale(a).add(g2.scale(b))
    assert np.allclose(lhs.values, a * g1.values + b * g2.values, atol=1e-12)
