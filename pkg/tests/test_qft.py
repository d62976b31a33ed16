"""The superfield origin of the harmonic term: closed-form Gaussian action
oracles and the single-point identity, with fitted couplings."""

import numpy as np
import pytest

from superstar.qft import FieldConfig, QftParams, action_harmonic, identity_check


def test_omega_prediction_formula():
    q = QftParams(1.3, 0.4, 0.7)
    assert q.omega_pred == pytest.approx(0.4 * 1.3 * 0.49 / 1.96, rel=1e-14)
    assert q.lambda_pred == pytest.approx(0.5 * (1 + q.omega_pred ** 2),
                                          rel=1e-14)


def test_invalid_parameters_rejected():
    with pytest.raises(ValueError):
        QftParams(-1.0, 0.4, 0.7)
    with pytest.raises(ValueError):
        QftParams(1.0, 0.0, 0.7)


def test_field_must_decay():
    with pytest.raises(ValueError):
        FieldConfig.gaussian(3.0, 32, width=2.0)


def test_free_action_gaussian_oracle():
    # phi = A exp(-r^2 / (2 w^2)):
    #   kinetic = A^2 pi / 2           (width-independent)
    #   mass    = nu^2 A^2 pi w^2 / 2
    #   harmonic= 2 omega^2 A^2 pi w^4 / theta^2
    amp, width, nu, omega = 1.3, 0.9, 1.1, 0.45
    q = QftParams(1.3, 0.4, 0.0, nu=nu, lam=0.0)
    field = FieldConfig.gaussian(9.0, 128, width=width, amp=amp)
    act = action_harmonic(q, omega, 0.0, field)
    assert act["kinetic"] == pytest.approx(amp ** 2 * np.pi / 2, rel=1e-8)
    assert act["mass"] == pytest.approx(
        0.5 * nu ** 2 * amp ** 2 * np.pi * width ** 2, rel=1e-8)
    assert act["harmonic"] == pytest.approx(
        2 * omega ** 2 * amp ** 2 * np.pi * width ** 4 / q.theta ** 2,
        rel=1e-8)
    assert act["quartic"] == 0.0


def test_identity_single_point():
    q = QftParams(1.3, 0.4, 0.7)
    field = FieldConfig.gaussian(9.0, 128, width=0.9)
    rep = identity_check(q, field)
    assert rep["residual"] < 1e-6
    for term, val in rep["per_term_relative"].items():
        assert val < 1e-6, (term, val)
    assert rep["omega2_fit"] == pytest.approx(q.omega_pred ** 2, abs=1e-10)
    assert rep["lambda_fit"] == pytest.approx(q.lambda_pred, rel=1e-10)


def test_identity_b_zero_reduces_to_free():
    # b = 0: no harmonic term, lambda_fit collapses to the bare coupling
    q = QftParams(1.3, 0.4, 0.0)
    field = FieldConfig.gaussian(9.0, 128, width=0.9)
    rep = identity_check(q, field)
    assert rep["residual"] < 1e-12
    assert rep["omega_pred"] == 0.0
    assert rep["lambda_fit"] == pytest.approx(0.5, rel=1e-12)


def test_quartic_traciality():
    # int (phi*phi)*(phi*phi) = int (phi*phi)^2: the outer star drops
    # under the integral
    q = QftParams(1.3, 0.4, 0.7)
    field = FieldConfig.gaussian(9.0, 128, width=0.9)
    act = action_harmonic(q, q.omega_pred, q.lambda_pred, field)
    assert act["quartic"] > 0
    assert act["quartic"] == pytest.approx(act["quartic_tracial"], rel=1e-12)
