import math

import numpy as np
import pytest

from analytic.closed_form import (
    access_coverage_approx, access_coverage_rayleigh, approx_hyper_term, constant_A,
    distributed_mode_fraction, hyper_term, user_coverage_perfect_backhaul
)
from analytic.optimize import balance_root, q_balance, q_star
from network.model import derive_model
from network.params import Mode, NetworkParams
from utils.errors import AssumptionError, DomainError

from tests.conftest import replace_model


def test_hyper_terms_at_beta_four():
    assert np.isclose(hyper_term(1.0, 4.0), math.pi / 4.0, rtol=1e-12)
    assert np.isclose(hyper_term(3.0, 4.0), math.sqrt(3.0) * math.atan(math.sqrt(3.0)), rtol=1e-12)
    assert approx_hyper_term(1.0, 4.0) == 1.0
    assert hyper_term(0.0, 4.0) == 0.0


def test_classical_rayleigh_coverage(rayleigh, rayleigh_model):
    # no CN interference and every SBS an IBFD interferer: 1 / (1 + pi/4)
    d = replace_model(rayleigh_model, lambda_c=1e-12, lambda_bar_sI=rayleigh_model.lambda_s)
    value = access_coverage_rayleigh(d, rayleigh, Mode.IBFD)
    assert np.isclose(value, 1.0 / (1.0 + math.pi / 4.0), atol=1e-9)
    assert np.isclose(value, 0.560099, atol=1e-6)


def test_closed_forms_need_rayleigh_fading(defaults):
    d = derive_model(defaults)
    with pytest.raises(AssumptionError) as info:
        access_coverage_rayleigh(d, defaults, Mode.OBFD)
    assert info.value.details['field'] == 'k_user'
    noisy = NetworkParams.from_defaults(k_user=1.0, N0=1e-3)
    with pytest.raises(AssumptionError):
        user_coverage_perfect_backhaul(0.5, derive_model(noisy), noisy)


def test_approx_forms_accept_any_fading(defaults):
    d = derive_model(defaults)
    c_I = access_coverage_approx(d, defaults, Mode.IBFD)
    c_O = access_coverage_approx(d, defaults, Mode.OBFD)
    assert 0.0 < c_I < 1.0 and 0.0 < c_O < 1.0


def test_constant_A_scales_with_cn_density(rayleigh, rayleigh_model):
    doubled = replace_model(rayleigh_model, lambda_c=2.0 * rayleigh_model.lambda_c)
    assert np.isclose(constant_A(doubled, rayleigh), 2.0 * constant_A(rayleigh_model, rayleigh), rtol=1e-14)


def test_user_coverage_perfect_backhaul_endpoints(rayleigh, rayleigh_model):
    d = rayleigh_model
    served = d.served_intensity
    all_obfd = replace_model(d, lambda_bar_sI=0.0, lambda_bar_sO=served)
    assert np.isclose(user_coverage_perfect_backhaul(0.0, d, rayleigh),
                      access_coverage_rayleigh(all_obfd, rayleigh, Mode.OBFD), rtol=1e-12)
    all_ibfd = replace_model(d, lambda_bar_sI=served, lambda_bar_sO=0.0)
    assert np.isclose(user_coverage_perfect_backhaul(1.0, d, rayleigh),
                      access_coverage_rayleigh(all_ibfd, rayleigh, Mode.IBFD), rtol=1e-12)
    grid = user_coverage_perfect_backhaul(np.linspace(0.0, 1.0, 11), d, rayleigh)
    assert grid.shape == (11,)


def test_q_balance_exact_rayleigh(rayleigh, rayleigh_model):
    fraction = q_balance(rayleigh_model, rayleigh)
    assert np.isclose(fraction.value, 0.3929, atol=5e-4)
    assert not fraction.clamped


def test_q_balance_approx_without_cn_interference(defaults):
    d = replace_model(derive_model(defaults), lambda_c=0.0)
    # gamma_aO / (gamma_aI + gamma_aO)
    assert q_balance(d, defaults, approx=True).value == pytest.approx(0.75, abs=1e-15)


def test_q_balance_approx_at_defaults(defaults):
    assert np.isclose(q_balance(derive_model(defaults), defaults, approx=True).value, 0.4697, atol=5e-4)


def test_q_balance_equalises_the_closed_forms(rayleigh, rayleigh_model):
    q = q_balance(rayleigh_model, rayleigh).value
    d = replace_model(rayleigh_model, lambda_bar_sI=q * rayleigh_model.served_intensity,
                      lambda_bar_sO=(1.0 - q) * rayleigh_model.served_intensity)
    assert np.isclose(access_coverage_rayleigh(d, rayleigh, Mode.IBFD),
                      access_coverage_rayleigh(d, rayleigh, Mode.OBFD), rtol=1e-10)


def test_q_balance_clamps(rayleigh, rayleigh_model):
    # a very dense CN layer pushes the raw fraction below zero
    d = replace_model(rayleigh_model, lambda_c=100.0 * rayleigh_model.lambda_c)
    fraction = q_balance(d, rayleigh)
    assert fraction.value == 0.0 and fraction.clamped and fraction.raw < 0.0


def test_q_star_symmetric_case(defaults):
    d = replace_model(derive_model(defaults), lambda_c=0.0)
    d = replace_model(d, gamma_aO=d.gamma_aI)
    assert np.isclose(q_star(d, defaults, approx=True).value, 0.5, atol=1e-12)


def test_q_star_maximises_user_coverage(rayleigh, rayleigh_model):
    best = q_star(rayleigh_model, rayleigh)
    grid = np.linspace(0.0, 1.0, 1001)
    values = user_coverage_perfect_backhaul(grid, rayleigh_model, rayleigh)
    at_star = user_coverage_perfect_backhaul(best.value, rayleigh_model, rayleigh)
    assert at_star >= values.max() - 1e-9
    assert abs(best.value - grid[np.argmax(values)]) <= 1e-3 + 1e-12


def test_q_star_approx_maximises_the_approximate_curve(defaults):
    d = derive_model(defaults)
    best = q_star(d, defaults, approx=True)
    values = user_coverage_perfect_backhaul(np.linspace(0.0, 1.0, 1001), d, defaults, approx=True)
    assert user_coverage_perfect_backhaul(best.value, d, defaults, approx=True) >= values.max() - 1e-9


def test_balance_root_matches_q_balance(rayleigh, rayleigh_model):
    root = balance_root(rayleigh, variant='rayleigh', perfect_backhaul=True, xtol=1e-8)
    assert root is not None
    assert abs(root - q_balance(rayleigh_model, rayleigh).value) < 1e-6


def test_balance_root_without_sign_change(rayleigh):
    dense = NetworkParams.from_defaults(k_user=1.0, N0=0.0, lambda_c_raw=50.0, lambda_s_raw=50.0)
    # one SBS per CN: CN interference alone keeps c_I below c_O for every q
    assert balance_root(dense, variant='rayleigh', perfect_backhaul=True) is None


def test_distributed_mode_fraction(defaults):
    d = derive_model(defaults)
    assert np.isclose(distributed_mode_fraction(1.0, d, defaults), 0.690983, atol=1e-6)
    assert distributed_mode_fraction(10.0, d, defaults) < distributed_mode_fraction(0.1, d, defaults)
    displaced = NetworkParams.from_defaults(mode_selection_raw_intensities=False)
    # the displacement factor cancels in the ratio
    assert np.isclose(distributed_mode_fraction(1.0, derive_model(displaced), displaced),
                      distributed_mode_fraction(1.0, d, defaults), rtol=1e-14)
    with pytest.raises(DomainError):
        distributed_mode_fraction(0.0, d, defaults)
