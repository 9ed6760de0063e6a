import csv
import json
import math

import numpy as np
import pytest

from src.models import PureState2Q
from src.models.tradeoff_models import CSV_HEADER
from src.services.tradeoff_service import tradeoff_service
from src.utils import qcore

PI8 = math.pi / 8


def _point(runner, cli, *args):
    result = runner.invoke(cli, ['point', *args])
    assert result.exit_code == 0, result.output
    return json.loads(result.stdout)


def _write_matrix(path, matrix):
    matrix = np.asarray(matrix, dtype=complex)
    path.write_text(json.dumps({'dim': 4, 're': matrix.real.tolist(), 'im': matrix.imag.tolist()}))
    return str(path)


class TestPoint:

    def test_sdp_full_maximally_entangled(self, runner, cli):
        data = _point(runner, cli, '--theta', '0.7853981633974483', '--delta', '0',
                      '--epsilon', '1', '--method', 'sdp-full')
        assert data['p10'] == pytest.approx(1 / 3, abs=1e-6)
        assert data['solver_status'] == 'Optimal'
        assert data['gap'] == pytest.approx(0.0, abs=1e-6)

    def test_analytic_eps1_product_state(self, runner, cli):
        data = _point(runner, cli, '--theta', '0', '--delta', '0.5', '--epsilon', '1',
                      '--method', 'analytic-eps1')
        assert data['p10'] == 0.0

    def test_sdp_reduced_pi8(self, runner, cli):
        data = _point(runner, cli, '--theta', '0.39269908', '--delta', '0.1', '--epsilon', '1',
                      '--method', 'sdp-reduced')
        assert data['p10'] == pytest.approx(0.0880354, abs=1e-6)
        assert data['gap'] == pytest.approx(0.1470, abs=1e-3)

    def test_theta_frac(self, runner, cli):
        by_frac = _point(runner, cli, '--theta-frac', '1/8', '--delta', '0.1', '--epsilon', '0.9',
                         '--method', 'analytic-commuting')
        by_value = _point(runner, cli, '--theta', repr(PI8), '--delta', '0.1', '--epsilon', '0.9',
                          '--method', 'analytic-commuting')
        assert by_frac == by_value

    @pytest.mark.parametrize('args', [
        ['--delta', '0.1', '--epsilon', '0.5'],
        ['--theta', '0.1', '--theta-frac', '1/8', '--delta', '0.1', '--epsilon', '0.5'],
        ['--theta', '0.1', '--delta', '1.5', '--epsilon', '0.5'],
        ['--theta', '0.1', '--delta', '0.1', '--epsilon', '0'],
        ['--theta', '2.0', '--delta', '0.1', '--epsilon', '0.5'],
        ['--theta-frac', 'uno/ocho', '--delta', '0.1', '--epsilon', '0.5'],
        ['--theta', '0.1', '--delta', '0.1', '--epsilon', '0.5', '--method', 'analytic-eps1'],
        ['--theta', '0.1', '--delta', '0.1', '--epsilon', '0.5', '--method', 'magic'],
    ])
    def test_invalid_parameters_exit_2(self, runner, cli, args):
        result = runner.invoke(cli, ['point', *args])
        assert result.exit_code == 2

    def test_solver_failure_exit_3(self, runner, cli):
        result = runner.invoke(cli, ['point', '--theta', '0.3', '--delta', '0.2', '--epsilon', '0.7',
                                     '--method', 'sdp-full', '--max-iter', '1'])
        assert result.exit_code == 3
        assert 'SOLVER_FAILURE' in result.output
        assert 'MaxIterations' in result.output

    def test_strategy_output_round_trip(self, runner, cli, tmp_path):
        target = tmp_path / 'omega.json'
        point = _point(runner, cli, '--theta-frac', '1/8', '--delta', '0.1', '--epsilon', '0.9',
                       '--method', 'analytic-commuting', '--strategy-output', str(target))
        result = runner.invoke(cli, ['verify', str(target), '--theta-frac', '1/8',
                                     '--delta', '0.1', '--epsilon', '0.9'])
        assert result.exit_code == 0, result.output
        report = json.loads(result.stdout)
        assert report['feasible'] is True
        assert report['p10_worst'] == pytest.approx(point['p10'], abs=1e-9)
        assert report['p10_worst'] == pytest.approx(0.3015806, abs=1e-5)

    def test_strategy_output_unavailable(self, runner, cli, tmp_path):
        result = runner.invoke(cli, ['point', '--theta', '0.3', '--delta', '0.2', '--epsilon', '1',
                                     '--method', 'analytic-eps1',
                                     '--strategy-output', str(tmp_path / 'x.json')])
        assert result.exit_code == 2


class TestVerify:

    def test_identity(self, runner, cli, tmp_path):
        path = _write_matrix(tmp_path / 'id.json', np.eye(4))
        result = runner.invoke(cli, ['verify', path, '--theta', '0.3', '--delta', '0.1',
                                     '--epsilon', '0.5'])
        assert result.exit_code == 0
        assert json.loads(result.stdout)['p10_worst'] == pytest.approx(1.0, abs=1e-9)

    def test_entangled_projector(self, runner, cli, tmp_path):
        path = _write_matrix(tmp_path / 'psi.json', qcore.projector(PureState2Q(PI8)))
        result = runner.invoke(cli, ['verify', path, '--theta-frac', '1/8', '--delta', '0',
                                     '--epsilon', '0.5'])
        assert result.exit_code == 1
        report = json.loads(result.stdout)
        assert report['feasible'] is False
        assert report['violations'][0]['constraint'] == 'ppt'

    @pytest.mark.parametrize('content', [
        'no es json',
        json.dumps({'dim': 2, 're': [[1, 0], [0, 1]], 'im': [[0, 0], [0, 0]]}),
        json.dumps({'dim': 4, 're': [[1, 0], [0, 1]], 'im': [[0, 0], [0, 0]]}),
        json.dumps({'dim': 4, 're': np.triu(np.ones((4, 4))).tolist(),
                    'im': np.zeros((4, 4)).tolist()}),
    ])
    def test_malformed_file_exit_2(self, runner, cli, tmp_path, content):
        path = tmp_path / 'bad.json'
        path.write_text(content)
        result = runner.invoke(cli, ['verify', str(path), '--theta', '0.3', '--delta', '0.1',
                                     '--epsilon', '0.5'])
        assert result.exit_code == 2
        assert 'MALFORMED_STRATEGY_FILE' in result.output

    def test_missing_file_exit_2(self, runner, cli, tmp_path):
        result = runner.invoke(cli, ['verify', str(tmp_path / 'nada.json'), '--theta', '0.3',
                                     '--delta', '0.1', '--epsilon', '0.5'])
        assert result.exit_code == 2


class TestSweep:

    def _rows(self, path):
        with open(path, newline='') as stream:
            return list(csv.reader(stream))

    def test_header_and_order(self, runner, cli, tmp_path):
        output = tmp_path / 'sweep.csv'
        result = runner.invoke(cli, [
            'sweep', '--theta', '0.2,0.6', '--delta', '0,0.5', '--epsilon', '0.5,1',
            '--method', 'analytic-commuting', '--method', 'sdp-reduced', '--output', str(output),
        ])
        assert result.exit_code == 0, result.output
        rows = self._rows(output)
        assert tuple(rows[0]) == CSV_HEADER
        body = rows[1:]
        assert len(body) == 16
        keys = [(float(r[0]), float(r[1]), float(r[2])) for r in body]
        assert keys == sorted(keys)
        assert [r[3] for r in body[:2]] == ['analytic-commuting', 'sdp-reduced']
        for row in body:
            assert float(row[6]) >= -1e-6

    def test_single_cell_matches_point(self, runner, cli, tmp_path):
        output = tmp_path / 'one.csv'
        result = runner.invoke(cli, ['sweep', '--theta', '0.5', '--delta', '0.3', '--epsilon', '0.8',
                                     '--method', 'sdp-full', '--output', str(output)])
        assert result.exit_code == 0, result.output
        row = self._rows(output)[1]
        point = _point(runner, cli, '--theta', '0.5', '--delta', '0.3', '--epsilon', '0.8',
                       '--method', 'sdp-full')
        assert float(row[4]) == pytest.approx(point['p10'], abs=1e-9)
        assert row[4] == f"{point['p10']:.12g}"

    def test_every_row_matches_point(self, runner, cli, tmp_path):
        output = tmp_path / 'grid.csv'
        result = runner.invoke(cli, [
            'sweep', '--theta', '0.25,0.6', '--delta', '0.1,0.4', '--epsilon', '0.7,1',
            '--method', 'analytic-commuting', '--method', 'sdp-reduced', '--output', str(output),
        ])
        assert result.exit_code == 0, result.output
        rows = tradeoff_service.read_points(str(output))
        assert len(rows) == 16
        for row in rows:
            point = _point(runner, cli, '--theta', repr(row['theta']), '--delta', repr(row['delta']),
                           '--epsilon', repr(row['epsilon']), '--method', row['method'])
            assert row['p10'] == pytest.approx(point['p10'], abs=1e-9)
            assert row['p10_commuting'] == pytest.approx(point['p10_commuting'], abs=1e-9)
            assert row['solver_status'] == point['solver_status']

    def test_zero_delta_rows_follow_commuting_formula(self, runner, cli, tmp_path):
        output = tmp_path / 'commuting.csv'
        result = runner.invoke(cli, [
            'sweep', '--theta-frac', '1/16,1/8,3/16,1/4', '--delta', '0',
            '--epsilon', '0.25,0.5,0.75', '--method', 'sdp-full', '--output', str(output),
        ])
        assert result.exit_code == 0, result.output
        for row in self._rows(output)[1:]:
            theta, epsilon = float(row[0]), float(row[2])
            expected = 1 - epsilon / (1 + math.sin(theta) * math.cos(theta))
            assert float(row[4]) == pytest.approx(expected, abs=1e-6)

    def test_range_grid_and_json(self, runner, cli, tmp_path):
        output = tmp_path / 'sweep.json'
        result = runner.invoke(cli, [
            'sweep', '--theta', '0.3', '--delta', '0:1:0.5', '--epsilon', '1',
            '--method', 'analytic-eps1', '--format', 'json', '--output', str(output),
        ])
        assert result.exit_code == 0, result.output
        data = json.loads(output.read_text())
        assert [row['delta'] for row in data] == [0.0, 0.5, 1.0]
        assert set(data[0]) == set(CSV_HEADER)

    def test_workers_do_not_change_output(self, runner, cli, tmp_path):
        args = ['sweep', '--theta', '0.2,0.7', '--delta', '0.1,0.4', '--epsilon', '0.6,0.9',
                '--method', 'sdp-reduced']
        serial, threaded = tmp_path / 'a.csv', tmp_path / 'b.csv'
        assert runner.invoke(cli, args + ['--output', str(serial)]).exit_code == 0
        assert runner.invoke(cli, args + ['--output', str(threaded), '--workers', '3']).exit_code == 0
        assert serial.read_text() == threaded.read_text()

    def test_eps1_requires_unit_epsilon(self, runner, cli, tmp_path):
        output = tmp_path / 'bad.csv'
        result = runner.invoke(cli, ['sweep', '--theta', '0.3', '--delta', '0.1',
                                     '--epsilon', '0.5,1', '--method', 'analytic-eps1',
                                     '--output', str(output)])
        assert result.exit_code == 2
        assert not output.exists()

    def test_failure_leaves_no_partial_file(self, runner, cli, tmp_path):
        output = tmp_path / 'partial.csv'
        result = runner.invoke(cli, ['sweep', '--theta', '0.3', '--delta', '0.1,0.2',
                                     '--epsilon', '0.7', '--method', 'analytic-commuting',
                                     '--method', 'sdp-full', '--max-iter', '1',
                                     '--output', str(output)])
        assert result.exit_code == 3
        assert not output.exists()
        assert list(tmp_path.iterdir()) == []


class TestConfig:

    def test_config_supplies_defaults(self, runner, cli, tmp_path):
        config = tmp_path / 'config.json'
        config.write_text(json.dumps({'theta-frac': '1/4', 'delta': 0.4, 'epsilon': 1,
                                      'method': 'analytic-eps1'}))
        result = runner.invoke(cli, ['--config', str(config), 'point'])
        assert result.exit_code == 0, result.output
        assert json.loads(result.stdout)['p10'] == pytest.approx(0.2)

    def test_flags_override_config(self, runner, cli, tmp_path):
        config = tmp_path / 'config.json'
        config.write_text(json.dumps({'theta-frac': '1/4', 'delta': 0.4, 'epsilon': 1,
                                      'method': 'analytic-eps1'}))
        result = runner.invoke(cli, ['--config', str(config), 'point', '--delta', '0.1'])
        assert result.exit_code == 0, result.output
        assert json.loads(result.stdout)['p10'] == pytest.approx(0.3)

    def test_config_lists_for_sweep(self, runner, cli, tmp_path):
        config = tmp_path / 'config.json'
        output = tmp_path / 'out.csv'
        config.write_text(json.dumps({
            'theta': [0.2, 0.4], 'delta': [0.0], 'epsilon': [1.0],
            'method': ['analytic-commuting'], 'output': str(output),
        }))
        result = runner.invoke(cli, ['--config', str(config), 'sweep'])
        assert result.exit_code == 0, result.output
        assert len(output.read_text().strip().splitlines()) == 3

    def test_invalid_config_file(self, runner, cli, tmp_path):
        config = tmp_path / 'config.json'
        config.write_text('[1, 2]')
        result = runner.invoke(cli, ['--config', str(config), 'point'])
        assert result.exit_code == 2
