import numpy as np
import pytest

from network.params import Scheme
from runner.config_file import RunConfig, load_run_config, parse_run_config
from utils.errors import ConfigError


def test_empty_file_is_the_baseline():
    run = parse_run_config("")
    assert run.params.q == 0.5 and run.params.M == 500
    assert run.method == 'analytic' and run.variant == 'exact'
    assert run.points() == [{}]
    assert run.mitigation.scheme is Scheme.NONE


def test_values_are_typed():
    run = parse_run_config(
        "[network-model]\n"
        "M = 256\n"
        "xi_db = 110  # dB\n"
        "\n"
        "[analytic-coverage]\n"
        "variant = Rayleigh\n"
        "assume_perfect_backhaul = yes\n"
        "rtol = 1e-5\n"
        "\n"
        "[cli]\n"
        "format = JSON\n"
        "no_timestamp = true\n"
    )
    assert run.params.M == 256 and isinstance(run.params.M, int)
    assert run.params.xi_db == 110.0
    assert run.variant == 'rayleigh' and run.assume_perfect_backhaul
    assert run.quadrature.rtol == 1e-5 and run.quadrature.order == 15
    assert run.format == 'json' and run.no_timestamp


def test_empty_value_names_field_and_line():
    with pytest.raises(ConfigError) as info:
        parse_run_config("[network-model]\nbeta =\n")
    assert info.value.field == 'beta'
    assert info.value.line == 2


def test_unknown_key_and_section():
    with pytest.raises(ConfigError) as info:
        parse_run_config("[network-model]\nq = 0.4\nbandwidth = 20\n")
    assert info.value.field == 'bandwidth' and info.value.line == 3
    with pytest.raises(ConfigError) as info:
        parse_run_config("[plots]\nstyle = dark\n")
    assert info.value.field == 'plots' and info.value.line == 1


def test_keys_are_case_sensitive():
    with pytest.raises(ConfigError) as info:
        parse_run_config("[network-model]\nBeta = 3.5\n")
    assert info.value.field == 'Beta'


def test_invalid_parameter_value():
    with pytest.raises(ConfigError) as info:
        parse_run_config("[network-model]\n\nbeta = 2\n")
    assert info.value.field == 'beta' and info.value.line == 3


def test_mistyped_values():
    with pytest.raises(ConfigError) as info:
        parse_run_config("[network-model]\nM = 12.5\n")
    assert info.value.field == 'M'
    with pytest.raises(ConfigError) as info:
        parse_run_config("[montecarlo-sim]\nsinr_gating = maybe\n")
    assert info.value.field == 'sinr_gating'


def test_linear_sweep():
    run = parse_run_config("[sweep]\nq = 0, 1, 21\n")
    points = run.points()
    assert len(points) == 21
    assert points[0] == {'q': 0.0} and points[-1] == {'q': 1.0}
    assert np.isclose(points[1]['q'], 0.05)


def test_log_sweep():
    run = parse_run_config("[sweep]\nlambda_s_raw = 10, 1000, 3, log\n")
    assert np.allclose([p['lambda_s_raw'] for p in run.points()], [10.0, 100.0, 1000.0])


def test_two_axes_are_row_major():
    run = parse_run_config("[sweep]\nq = 0, 1, 3\nM = 100, 300, 2\n")
    assert [(p['q'], p['M']) for p in run.points()] == [
        (0.0, 100.0), (0.0, 300.0), (0.5, 100.0), (0.5, 300.0), (1.0, 100.0), (1.0, 300.0),
    ]
    params, _ = run.at_point(run.points()[1])
    assert params.M == 300 and params.q == 0.0


@pytest.mark.parametrize("text,field", [
    ("[sweep]\nq = 1, 0, 5\n", 'q'),
    ("[sweep]\nq = 0, 1\n", 'q'),
    ("[sweep]\nq = 0, 1, 1\n", 'q'),
    ("[sweep]\nxi_db = 0, 1, 3, cubic\n", 'xi_db'),
    ("[sweep]\nP_c = 0, 10, 3, log\n", 'P_c'),
    ("[sweep]\nq = 0, 1, 3\nM = 100, 300, 2\nR_th = 1, 2, 2\n", 'sweep'),
    ("[sweep]\ntau = 0.1, 10, 5, log\n", 'tau'),
    ("[montecarlo-sim]\nscheme = distributed-mode-selection\ntau = 1\n[sweep]\nq = 0, 1, 3\n", 'q'),
    ("[montecarlo-sim]\nscheme = distributed-mode-selection\n", 'tau'),
    ("[cli]\nmethod = mc\n[montecarlo-sim]\ndrops = 50\n", 'drops'),
    ("[cli]\nmethod = exhaustive\n", 'method'),
    ("[cli]\nformat = xml\n", 'format'),
    ("[montecarlo-sim]\nscheme = zero-forcing\n", 'scheme'),
    ("[sweep]\nM = 0, 100, 3\n", 'M'),
])
def test_rejected_configurations(text, field):
    with pytest.raises(ConfigError) as info:
        parse_run_config(text)
    assert info.value.field == field


def test_method_alias():
    run = parse_run_config("[cli]\nmethod = mc\n[montecarlo-sim]\ndrops = 100\n")
    assert run.method == 'montecarlo'
    assert run.methods == ('montecarlo',)
    assert parse_run_config("[cli]\nmethod = both\n").methods == ('analytic', 'montecarlo')


def test_tau_sweep_updates_the_mitigation():
    run = parse_run_config(
        "[montecarlo-sim]\nscheme = distributed-mode-selection\ntau = 1\n"
        "[sweep]\ntau = 0.1, 10, 3, log\n"
    )
    _, mitigation = run.at_point(run.points()[-1])
    assert mitigation.scheme is Scheme.DISTRIBUTED
    assert np.isclose(mitigation.tau, 10.0)


def test_load_run_config(tmp_path):
    assert isinstance(load_run_config(), RunConfig)
    path = tmp_path / "run.ini"
    path.write_text("[network-model]\nq = 0.3\n", encoding='utf-8')
    run = load_run_config(str(path))
    assert run.params.q == 0.3 and run.source == str(path)
    with pytest.raises(ConfigError) as info:
        load_run_config(str(tmp_path / "missing.ini"))
    assert info.value.field == 'config'
