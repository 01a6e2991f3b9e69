import math

import numpy as np
import pytest

from analytic.closed_form import access_coverage_rayleigh, distributed_mode_fraction, user_coverage_perfect_backhaul
from analytic.coverage import (
    _rayleigh_average, access_coverage, backhaul_coverage, backhaul_coverage_by_load, rate_coverage
)
from analytic.optimize import balance_root
from analytic.report import CoverageReport
from network.model import derive_model
from network.params import MitigationConfig, Mode, NetworkParams, Scheme
from numerics.quadrature import QuadratureSettings
from simulation.estimator import estimate_coverage
from utils.errors import AssumptionError, DomainError

# looser settings keep the nested Gil-Pelaez integrals quick
FAST = QuadratureSettings(rtol=1e-5, atol=1e-8)
LOOSE = QuadratureSettings(rtol=1e-4, atol=1e-6)


@pytest.mark.parametrize("scheme", [Scheme.BIA_SERVING, Scheme.BIA_ALL])
def test_bia_has_no_analytic_model(defaults, scheme):
    with pytest.raises(AssumptionError):
        rate_coverage(derive_model(defaults), defaults, mitigation=MitigationConfig(scheme=scheme),
                      variant='approx', perfect_backhaul=True)


def test_pilot_contamination_has_no_analytic_model(defaults):
    with pytest.raises(AssumptionError) as info:
        rate_coverage(derive_model(defaults), defaults, mitigation=MitigationConfig(pilot_contamination=True),
                      variant='approx', perfect_backhaul=True)
    assert info.value.details['field'] == 'pilot_contamination'


def test_rejection_needs_the_exact_variant(rayleigh, rayleigh_model):
    with pytest.raises(AssumptionError):
        rate_coverage(rayleigh_model, rayleigh, mitigation=MitigationConfig(scheme=Scheme.IR),
                      variant='rayleigh', perfect_backhaul=True)


def test_unknown_variant(defaults):
    with pytest.raises(DomainError):
        rate_coverage(derive_model(defaults), defaults, variant='closed')


def test_rayleigh_report_with_perfect_backhaul(rayleigh, rayleigh_model):
    report = rate_coverage(rayleigh_model, rayleigh, variant='rayleigh', perfect_backhaul=True)
    assert isinstance(report, CoverageReport)
    assert report.method == 'analytic-rayleigh'
    assert report.c_backhaul_I == 1.0 and report.c_backhaul_O == 1.0
    assert "perfect_backhaul" in report.flags
    assert np.isclose(report.c_u, user_coverage_perfect_backhaul(rayleigh.q, rayleigh_model, rayleigh), rtol=1e-12)
    assert np.isclose(report.c_I, access_coverage_rayleigh(rayleigh_model, rayleigh, Mode.IBFD), rtol=1e-14)


def test_distributed_scheme_sets_the_fraction(rayleigh, rayleigh_model):
    report = rate_coverage(rayleigh_model, rayleigh, mitigation=MitigationConfig(scheme=Scheme.DISTRIBUTED, tau=1.0),
                           variant='rayleigh', perfect_backhaul=True)
    assert np.isclose(report.q, distributed_mode_fraction(1.0, rayleigh_model, rayleigh), rtol=1e-14)
    assert any(flag.startswith("q_from_tau=") for flag in report.flags)


def test_report_rejects_non_probabilities():
    with pytest.raises(DomainError):
        CoverageReport.compose(1.2, 0.5, 1.0, 1.0, 0.5, method='analytic-approx')
    with pytest.raises(DomainError):
        CoverageReport.compose(0.5, 0.5, 1.0, 1.0, 0.5, method='simulated')


def test_report_composition():
    report = CoverageReport.compose(0.8, 0.6, 0.5, 1.0, 0.25, method='analytic-exact')
    assert report.c_I == pytest.approx(0.4)
    assert report.c_O == pytest.approx(0.6)
    assert report.c_u == pytest.approx(0.25 * 0.4 + 0.75 * 0.6)
    assert set(report.probabilities()) == {'c_access_I', 'c_access_O', 'c_backhaul_I', 'c_backhaul_O',
                                           'c_I', 'c_O', 'c_u'}



def test_rayleigh_average_takes_whole_node_arrays():
    seen = []

    def conditional(r):
        seen.append(r.shape)
        # E[exp(-pi lam r^2)] = 1/2 for the nearest point
        return np.exp(-math.pi * 2.0 * r ** 2), 1e-12

    value, error = _rayleigh_average(conditional, 2.0, FAST)
    assert value == pytest.approx(0.5, abs=1e-7)
    assert error >= 1e-12
    assert all(shape == (3 * FAST.order,) for shape in seen)

@pytest.mark.parametrize("mode", [Mode.IBFD, Mode.OBFD])
def test_backhaul_coverage_falls_with_load(defaults, mode):
    loads = [1, 5, 20, 60]
    values = backhaul_coverage_by_load(mode, derive_model(defaults), defaults, loads, settings=LOOSE)
    assert values.shape == (len(loads),)
    assert np.all(np.isfinite(values))
    assert np.all((values >= 0.0) & (values <= 1.0))
    assert np.all(np.diff(values) <= 1e-6), values


def test_backhaul_coverage_at_defaults(defaults):
    d = derive_model(defaults)
    c_I = backhaul_coverage(Mode.IBFD, d, defaults, settings=LOOSE)
    c_O = backhaul_coverage(Mode.OBFD, d, defaults, settings=LOOSE)
    assert 0.5 < c_I <= 1.0
    assert 0.5 < c_O <= 1.0

@pytest.mark.slow
@pytest.mark.parametrize("mode", [Mode.IBFD, Mode.OBFD])
def test_gil_pelaez_access_matches_rayleigh_closed_form(rayleigh, rayleigh_model, mode):
    value = access_coverage(mode, rayleigh_model, rayleigh, FAST)
    assert abs(value - access_coverage_rayleigh(rayleigh_model, rayleigh, mode)) < 1e-3


@pytest.mark.slow
def test_rejection_improves_ibfd_access(defaults):
    d = derive_model(defaults)
    plain = access_coverage(Mode.IBFD, d, defaults, FAST)
    rejected = access_coverage(Mode.IBFD, d, defaults, FAST, rejection=True)
    assert rejected >= plain - 1e-4


@pytest.mark.slow
def test_backhaul_coverage_improves_with_cancellation():
    weak = NetworkParams.from_defaults(xi_db=90.0)
    strong = NetworkParams.from_defaults(xi_db=140.0)
    c_weak = backhaul_coverage(Mode.IBFD, derive_model(weak), weak, settings=FAST)
    c_strong = backhaul_coverage(Mode.IBFD, derive_model(strong), strong, settings=FAST)
    assert 0.0 <= c_weak <= c_strong + 1e-4 <= 1.0 + 1e-4


@pytest.mark.slow
def test_backhaul_coverage_falls_with_ibfd_fraction():
    sparse = NetworkParams.from_defaults(q=0.2)
    dense = NetworkParams.from_defaults(q=0.8)
    c_sparse = backhaul_coverage(Mode.IBFD, derive_model(sparse), sparse, settings=FAST)
    c_dense = backhaul_coverage(Mode.IBFD, derive_model(dense), dense, settings=FAST)
    assert c_sparse >= c_dense - 1e-4


# full model against Monte Carlo

@pytest.mark.slow
def test_rate_coverage_matches_monte_carlo(defaults):
    analytic = rate_coverage(derive_model(defaults), defaults, settings=FAST)
    simulated = estimate_coverage(defaults, drops=20_000, workers=4)
    for name in ('c_I', 'c_O', 'c_u', 'c_backhaul_I', 'c_backhaul_O'):
        gap = abs(getattr(analytic, name) - getattr(simulated, name))
        assert gap <= 0.03, f"{name}: analytic {getattr(analytic, name):.4f}, MC {getattr(simulated, name):.4f}"


@pytest.mark.slow
@pytest.mark.parametrize("lambda_s_raw,low,high", [(50.0, 0.35, 0.55), (100.0, 0.60, 0.80)])
def test_balance_root_of_the_full_model(lambda_s_raw, low, high):
    p = NetworkParams.from_defaults(lambda_s_raw=lambda_s_raw)
    root = balance_root(p, settings=FAST, xtol=1e-3)
    assert root is not None
    assert low <= root <= high
