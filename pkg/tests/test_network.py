import math

import numpy as np
import pytest

from network.load import SHAPE_B, load_distribution, load_pmf
from network.model import (
    backhaul_access_prob, backhaul_threshold, combinatorial_access_prob, derive_model,
    lognormal_fractional_moment, pilot_contamination_intensity
)
from network.params import MitigationConfig, Mode, NetworkParams, Scheme, with_overrides
from utils.errors import DomainError, RegimeError


def test_defaults_match_config(defaults):
    assert defaults.beta == 4.0 and defaults.M == 500 and defaults.S_max == 50
    assert defaults.xi_linear == pytest.approx(1e12)
    assert defaults.delta == 0.5


def test_displacement_moment():
    # exp(2 mu / beta + (2 sigma / beta)^2 / 2) = e at the baseline
    assert np.isclose(lognormal_fractional_moment(1.0, 2.0, 4.0), math.e, rtol=1e-14)
    assert lognormal_fractional_moment(0.0, 0.0, 3.0) == 1.0


def test_derived_model_at_defaults(defaults):
    d = derive_model(defaults)
    assert np.isclose(d.lambda_c, 10.0 * math.e, rtol=1e-14)
    assert np.isclose(d.lambda_s, 50.0 * math.e, rtol=1e-14)
    assert np.isclose(d.mean_load, 5.0, rtol=1e-14)
    assert np.isclose(d.lambda_bar_sI, 25.0 * math.e, rtol=1e-14)
    assert np.isclose(d.lambda_bar_sI, 67.957, atol=1e-3)
    assert np.isclose(d.I_SI, 2e-12, rtol=1e-12)
    assert d.gamma_aI == 1.0 and d.gamma_aO == 3.0
    assert d.served_intensity == pytest.approx(d.lambda_s)


def test_derived_model_is_reproducible(defaults):
    assert derive_model(defaults).lambda_bar_sO == derive_model(defaults).lambda_bar_sO


def test_served_intensity_caps_at_s_max():
    p = NetworkParams.from_defaults(lambda_s_raw=1000.0, S_max=20)
    d = derive_model(p)
    assert np.isclose(d.served_intensity, 20.0 * d.lambda_c, rtol=1e-14)


def test_load_pmf_at_zero():
    b = SHAPE_B
    assert np.isclose(load_pmf(5.0, 0), (b / (b + 5.0)) ** b, rtol=1e-12)
    assert np.isclose(load_pmf(5.0, 0), 0.0438, atol=1e-4)


def test_load_distribution_normalisation_and_mean():
    load = load_distribution(5.0)
    assert load.total_mass >= 1.0 - 1e-6
    assert abs(load.mean - 5.0) < 1e-3
    served = load.conditioned_on_served()
    assert served.pmf[0] == 0.0
    assert np.isclose(served.total_mass, 1.0, rtol=1e-12)


def test_load_distribution_small_mean():
    load = load_distribution(0.05)
    assert load.n_max >= 1
    assert load.pmf[0] > 0.9


def test_backhaul_access():
    assert backhaul_access_prob(10, 50) == 1.0
    assert backhaul_access_prob(100, 50) == 0.5
    assert np.allclose(backhaul_access_prob(np.array([1, 50, 200]), 50), [1.0, 1.0, 0.25])
    for n in range(1, 150):
        assert combinatorial_access_prob(n, 50) == backhaul_access_prob(n, 50), f"n={n}"
    with pytest.raises(DomainError):
        backhaul_access_prob(0, 50)


def test_backhaul_thresholds(defaults):
    assert np.isclose(backhaul_threshold(50, defaults, Mode.IBFD), 50.0 / 451.0, rtol=1e-12)
    assert np.isclose(backhaul_threshold(50, defaults, Mode.IBFD), 0.110865, atol=1e-6)
    assert np.isclose(backhaul_threshold(50, defaults, Mode.OBFD), 0.332594, atol=1e-6)
    # beyond S_max the rate target is divided by alpha = 1/2
    assert np.isclose(backhaul_threshold(100, defaults, Mode.IBFD), 50.0 / 451.0 * 3.0, rtol=1e-12)
    values = backhaul_threshold(np.arange(1, 6), defaults, Mode.OBFD)
    assert np.all(np.diff(values) > 0.0)


def test_backhaul_threshold_regime_violation():
    p = NetworkParams.from_defaults(M=50)
    with pytest.raises(RegimeError):
        backhaul_threshold(60, p, Mode.IBFD)


def test_pilot_contamination_intensity(defaults):
    d = derive_model(defaults)
    # roughly E[N_s] / S_max of the CNs share a given pilot
    assert np.isclose(pilot_contamination_intensity(d, d.load, defaults.S_max), 0.1 * d.lambda_c, rtol=1e-3)


@pytest.mark.parametrize("field,value", [
    ('beta', 2.0), ('q', 1.5), ('M', 0), ('S_max', 0), ('lambda_s_raw', 0.0),
    ('P_c', -1.0), ('N0', -1e-3), ('shadow_sigma', -0.1), ('R_th', 0.0),
])
def test_params_validation(field, value):
    with pytest.raises(DomainError) as info:
        NetworkParams.from_defaults(**{field: value})
    assert info.value.details['field'] == field


def test_with_overrides(defaults):
    p = with_overrides(defaults, M=399.6, q=0.25)
    assert p.M == 400 and isinstance(p.M, int)
    assert p.q == 0.25 and defaults.q == 0.5
    with pytest.raises(DomainError):
        with_overrides(defaults, tau=3.0)


def test_mitigation_config():
    assert MitigationConfig(scheme="interference-rejection").scheme is Scheme.IR
    assert Scheme.BIA_ALL.uses_bia and not Scheme.IR.uses_bia
    assert MitigationConfig(scheme=Scheme.DISTRIBUTED, tau=10.0).tau == 10.0
    with pytest.raises(DomainError):
        MitigationConfig(scheme=Scheme.DISTRIBUTED)
    with pytest.raises(DomainError):
        MitigationConfig(scheme="zero-forcing")
