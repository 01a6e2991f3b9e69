import asyncio
import json
import logging

import pytest

from main import main
from tests.conftest import read_rows

RAYLEIGH = (
    "[network-model]\nk_user = 1\nN0 = 0\n"
    "[analytic-coverage]\nvariant = rayleigh\nassume_perfect_backhaul = true\n"
)


@pytest.fixture(autouse=True)
def _reset_logging():
    yield
    logging.getLogger().handlers.clear()


def _run(*argv):
    return asyncio.run(main([*argv, '--log-file', '', '--log-level', 'WARNING']))


def _config(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return str(path)


def _error(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


def test_validate_config(tmp_path, capsys):
    path = _config(tmp_path, "[sweep]\nq = 0, 1, 21\n")
    assert _run('validate-config', '--config', path) == 0
    document = json.loads(capsys.readouterr().out)
    assert document['status'] == 'ok'
    assert document['axes'] == ['q'] and document['points'] == 21


def test_config_error_exit_code(tmp_path, capsys):
    path = _config(tmp_path, "[network-model]\nbeta =\n")
    assert _run('validate-config', '--config', path) == 2
    record = _error(capsys)
    assert record['error'] == 'ConfigError'
    assert record['field'] == 'beta' and record['line'] == 2


def test_missing_config_file(tmp_path, capsys):
    assert _run('coverage', '--config', str(tmp_path / "nope.ini")) == 2
    assert _error(capsys)['field'] == 'config'


def test_solve_approx(capsys):
    assert _run('solve', '--variant', 'approx', '--assume-perfect-backhaul') == 0
    document = json.loads(capsys.readouterr().out)
    assert document['target'] == 'q_balance'
    assert 0.0 <= document['value'] <= 1.0
    assert abs(document['value'] - 0.4697) < 5e-4


def test_solve_exact_rayleigh(tmp_path, capsys):
    path = _config(tmp_path, "[network-model]\nk_user = 1\nN0 = 0\n")
    assert _run('solve', '--config', path, '--assume-perfect-backhaul') == 0
    document = json.loads(capsys.readouterr().out)
    assert 0.35 <= document['value'] <= 0.55
    assert document['verification']['c_I'] == pytest.approx(document['verification']['c_O'], rel=1e-9)


def test_solve_q_star_reports_the_grid(tmp_path, capsys):
    path = _config(tmp_path, "[network-model]\nk_user = 1\nN0 = 0\n")
    assert _run('solve', '--config', path, '--target', 'q_star', '--assume-perfect-backhaul') == 0
    document = json.loads(capsys.readouterr().out)
    verification = document['verification']
    assert verification['c_u'] >= verification['grid_max'] - 1e-9
    assert abs(verification['grid_argmax'] - document['value']) <= 1e-3 + 1e-12


def test_solve_needs_perfect_backhaul(capsys):
    assert _run('solve', '--variant', 'approx') == 1
    record = _error(capsys)
    assert record['error'] == 'AssumptionError'
    assert record['field'] == 'assume_perfect_backhaul'


def test_solve_exact_needs_rayleigh_fading(capsys):
    assert _run('solve', '--assume-perfect-backhaul') == 1
    assert _error(capsys)['error'] == 'AssumptionError'


def test_solve_full_matches_closed_form_under_rayleigh_fading(tmp_path, capsys):
    path = _config(tmp_path, RAYLEIGH)
    assert _run('solve', '--config', path) == 0
    closed = json.loads(capsys.readouterr().out)['value']

    assert _run('solve', '--config', path, '--variant', 'full') == 0
    document = json.loads(capsys.readouterr().out)
    assert document['status'] == 'ok' and document['variant'] == 'full'
    assert abs(document['value'] - closed) < 1e-3
    verification = document['verification']
    assert verification['c_I'] == pytest.approx(verification['c_O'], abs=1e-3)
    assert 0.0 <= verification['c_u'] <= 1.0


def test_solve_full_has_no_q_star(capsys):
    assert _run('solve', '--variant', 'full', '--target', 'q_star') == 2
    assert _error(capsys)['field'] == 'target'


def test_coverage_is_byte_identical_without_timestamp(tmp_path):
    path = _config(tmp_path, RAYLEIGH)
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert _run('coverage', '--config', path, '--no-timestamp', '--out', str(first)) == 0
    assert _run('coverage', '--config', path, '--no-timestamp', '--out', str(second)) == 0
    assert first.read_bytes() == second.read_bytes()
    rows = read_rows(first.read_text(encoding='utf-8'))
    assert len(rows) == 1 and rows[0]['method'] == 'analytic-rayleigh' and rows[0]['status'] == 'ok'


def test_q_sweep(tmp_path):
    path = _config(tmp_path, RAYLEIGH + "[sweep]\nq = 0, 1, 21\n")
    out = tmp_path / "sweep.csv"
    assert _run('sweep', '--config', path, '--out', str(out)) == 0
    rows = read_rows(out.read_text(encoding='utf-8'))
    assert len(rows) == 21
    assert all(row['status'] == 'ok' for row in rows)
    c_I = [float(row['c_I']) for row in rows]
    assert all(b <= a + 1e-12 for a, b in zip(c_I, c_I[1:]))
    assert float(rows[0]['q']) == 0.0 and float(rows[-1]['q']) == 1.0


def test_sweep_as_json(tmp_path):
    path = _config(tmp_path, RAYLEIGH + "[sweep]\nR_th = 0.5, 2, 4\n")
    out = tmp_path / "sweep.json"
    assert _run('sweep', '--config', path, '--format', 'json', '--out', str(out)) == 0
    document = json.loads(out.read_text(encoding='utf-8'))
    assert [row['R_th'] for row in document['rows']] == [0.5, 1.0, 1.5, 2.0]


def test_sweep_without_axes(tmp_path, capsys):
    assert _run('sweep', '--config', _config(tmp_path, RAYLEIGH)) == 2
    assert _error(capsys)['field'] == 'sweep'


def test_failed_rows_give_exit_code_one(tmp_path):
    path = _config(tmp_path, "[analytic-coverage]\nvariant = rayleigh\nassume_perfect_backhaul = true\n")
    out = tmp_path / "failed.csv"
    assert _run('coverage', '--config', path, '--out', str(out)) == 1
    rows = read_rows(out.read_text(encoding='utf-8'))
    assert rows[0]['status'] == 'failed'
    assert rows[0]['c_u'] == ''
    assert rows[0]['message'].startswith('AssumptionError')


def test_simulate(tmp_path):
    out = tmp_path / "mc.csv"
    assert _run('simulate', '--drops', '100', '--seed', '1', '--out', str(out)) == 0
    rows = read_rows(out.read_text(encoding='utf-8'))
    assert len(rows) == 1
    assert rows[0]['method'] == 'montecarlo' and rows[0]['status'] == 'ok'
    assert 0.0 <= float(rows[0]['c_u']) <= 1.0


def test_simulate_rejects_too_few_drops(capsys):
    assert _run('simulate', '--drops', '50') == 2
    assert _error(capsys)['field'] == 'drops'
