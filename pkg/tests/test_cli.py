# -*- coding: utf-8 -*-
"""Tests for the coarse_maps console script."""
import json

import pytest

from click.testing import CliRunner

from coarse_maps import cli
from coarse_maps.defects import CheckResult
from coarse_maps.errors import ConfigurationError, MapSyntaxError


CONFIG = """
map: "brooks{ab}"
radius: 5
"""

BATCH = """
radius: 3
experiments:
  - command: defect-profile
    map: "brooks{ab}"
  - command: zquad
    a: a
    b: b
    n: 3
"""

FAILING_BATCH = """
experiments:
  - command: pi-probe
    map: id
    group: "free:2"
    c: c
  - command: zquad
    a: a
    b: b
    n: 3
"""


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, args):
    return runner.invoke(cli.main, args)


class TestNormalizeExperiment():

    def test_defaults(self):
        config = cli.normalize_experiment('defect-profile', {'map': 'brooks{ab}'})
        assert config['radius'] == 5
        assert config['window'] == 3
        assert config['kind'] == 'D'
        assert config['format'] == 'csv'
        assert config['seed'] == 42

    def test_command_specific_defaults(self):
        assert cli.normalize_experiment('poly-degree', {'map': 'monomial{2}'})['degree'] == 2
        assert cli.normalize_experiment('normality-check', {'map': 'monomial{2}'})['length'] == 3
        assert 'radius' not in cli.normalize_experiment('zquad', {'a': 'a', 'b': 'b'})

    def test_command_from_config(self):
        assert cli.normalize_experiment(None, {'command': 'a-profile', 'map': 'monomial{1}'})['radius'] == 3

    def test_elements_become_strings(self):
        config = cli.normalize_experiment('zquad', {'a': 1, 'b': 4, 'target': 'z'})
        assert (config['a'], config['b']) == ('1', '4')

    def test_invalid_configs(self):
        cases = [
            (None, {'map': 'monomial{1}'}),
            ('no-such-command', {'map': 'monomial{1}'}),
            ('defect-profile', {}),
            ('zquad', {'a': 'a'}),
            ('defect-profile', {'map': 'monomial{1}', 'radius': 'five'}),
            ('defect-profile', {'map': 'monomial{1}', 'radius': True}),
            ('defect-profile', {'map': 'monomial{1}', 'budget': -1}),
            ('defect-profile', {'map': 'monomial{1}', 'format': 'xml'}),
            ('defect-profile', {'map': 'monomial{1}', 'kind': 'Q'}),
            ('defect-profile', {'map': 'monomial{1}', 'radius': 2}),
            ('qsg-witness', {'map': 'monomial{1}', 'radius': 0}),
        ]
        for command, config in cases:
            with pytest.raises(ConfigurationError):
                cli.normalize_experiment(command, config)

    def test_map_is_parsed_up_front(self):
        with pytest.raises(MapSyntaxError):
            cli.normalize_experiment('defect-profile', {'map': 'brooks{ab'})

    def test_negative_n_is_allowed(self):
        assert cli.normalize_experiment('zquad', {'a': 'a', 'b': 'b', 'n': -1})['n'] == -1


class TestReadConfigFile():

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            cli.read_config_file(str(tmp_path / 'missing.yaml'))

    def test_empty_file(self, tmp_path):
        path = tmp_path / 'empty.yaml'
        path.write_text('')
        assert cli.read_config_file(str(path)) == {}

    def test_not_a_mapping(self, tmp_path):
        path = tmp_path / 'list.yaml'
        path.write_text('- 1\n- 2\n')
        with pytest.raises(ConfigurationError):
            cli.read_config_file(str(path))


class TestCommands():

    def test_defect_profile_of_a_homomorphism(self, runner):
        result = invoke(runner, ['defect-profile', '--map', 'hom{a->ab,b->b}', '--group', 'free:2',
                                 '--radius', '4'])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == 'kind,radius,set_size,max_norm,mode'
        column = lines[0].split(',').index('max_norm')
        assert [line.split(',')[column] for line in lines[1:]] == ['0'] * 4

    def test_pol2_violation_exits_1(self, runner):
        result = invoke(runner, ['pol2-check', '--map', 'floor_quad{1,3}', '--radius', '5'])
        assert result.exit_code == 1
        assert 'pol2' in result.stdout
        assert 'violated' in result.stdout
        assert '"g1"' in result.stdout

    def test_expectation_mismatch_exits_1(self, runner):
        result = invoke(runner, ['middle-profile', '--map', 'monomial{2}', '--radius', '3',
                                 '--expect', 'Plateau'])
        assert result.exit_code == 1

    def test_bad_map_exits_2(self, runner):
        result = invoke(runner, ['defect-profile', '--map', 'nosuch{1}'])
        assert result.exit_code == 2

    def test_missing_config_exits_2(self, runner, tmp_path):
        result = invoke(runner, ['defect-profile', '--config', str(tmp_path / 'missing.yaml')])
        assert result.exit_code == 2

    def test_radius_below_window_exits_2(self, runner):
        result = invoke(runner, ['defect-profile', '--map', 'brooks{ab}', '--radius', '2', '--window', '3'])
        assert result.exit_code == 2

    def test_bad_log_level(self, runner):
        result = invoke(runner, ['defect-profile', '--map', 'brooks{ab}', '-l', 'LOUD'])
        assert result.exit_code == 2

    def test_flags_override_config_file(self, runner, tmp_path):
        path = tmp_path / 'config.yaml'
        path.write_text(CONFIG)
        result = invoke(runner, ['defect-profile', '--config', str(path), '--radius', '3', '--format', 'json'])
        assert result.exit_code == 0
        document = json.loads(result.stdout)
        assert document['config']['radius'] == 3
        assert document['config']['map'] == 'brooks{ab}'
        assert document['results'][0]['max_norms'] == [1, 1, 1]

    def test_batch_config_needs_run_config(self, runner, tmp_path):
        path = tmp_path / 'batch.yaml'
        path.write_text(BATCH)
        result = invoke(runner, ['defect-profile', '--config', str(path)])
        assert result.exit_code == 2

    def test_writes_out_file(self, runner, tmp_path):
        out = tmp_path / 'profile.csv'
        result = invoke(runner, ['a-profile', '--map', 'monomial{1}', '--out', str(out)])
        assert result.exit_code == 0
        assert result.stdout == ''
        assert out.read_text().startswith('kind,radius,set_size,max_norm,mode\nA,1,')

    def test_zquad_value(self, runner):
        result = invoke(runner, ['zquad', '--a', 'a', '--b', 'b', '--n', '3'])
        assert result.exit_code == 0
        assert 'extend,bAAbAb,exact,' in result.stdout

    def test_theorem_suite(self, runner, mocker):
        run_suite = mocker.patch('coarse_maps.suite.run_suite',
                                 return_value=[CheckResult('zquad-anchors', True)])
        result = invoke(runner, ['theorem-suite', '--only', 'zquad-anchors'])
        assert result.exit_code == 0
        run_suite.assert_called_once_with(42, ['zquad-anchors'])
        assert 'zquad-anchors,holds,exact,' in result.stdout

    def test_theorem_suite_failure_exits_1(self, runner, mocker):
        mocker.patch('coarse_maps.suite.run_suite',
                     return_value=[CheckResult('quadratic-battery', False, {'map': 'monomial{2}'})])
        result = invoke(runner, ['theorem-suite'])
        assert result.exit_code == 1

    def test_list_families(self, runner):
        result = invoke(runner, ['list-families'])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert 'id' in lines
        assert 'brooks{w}' in lines
        assert 'hom{<generator>-><word>,...}' in lines
        assert 'compose{outer,inner,via}' in lines


class TestRunConfig():

    def test_runs_every_experiment(self, runner, tmp_path):
        path = tmp_path / 'batch.yaml'
        path.write_text(BATCH)
        result = invoke(runner, ['run-config', str(path)])
        assert result.exit_code == 0
        assert result.stdout.startswith('kind,radius,set_size,max_norm,mode\nD,1,')
        assert 'extend,bAAbAb,exact,' in result.stdout

    def test_failure_does_not_stop_the_batch(self, runner, tmp_path):
        path = tmp_path / 'batch.yaml'
        path.write_text(FAILING_BATCH)
        result = invoke(runner, ['run-config', str(path)])
        assert result.exit_code == 2
        assert 'extend,bAAbAb,exact,' in result.stdout

    def test_single_experiment_document(self, runner, tmp_path):
        path = tmp_path / 'single.yaml'
        path.write_text('command: pol2-check\nmap: "monomial{2}"\nradius: 3\n')
        result = invoke(runner, ['run-config', str(path)])
        assert result.exit_code == 0
        assert 'pol2,holds,' in result.stdout

    def test_invalid_experiment_list(self, runner, tmp_path):
        path = tmp_path / 'batch.yaml'
        path.write_text('experiments: defect-profile\n')
        result = invoke(runner, ['run-config', str(path)])
        assert result.exit_code == 2

    def test_missing_file(self, runner, tmp_path):
        result = invoke(runner, ['run-config', str(tmp_path / 'missing.yaml')])
        assert result.exit_code == 2


class TestDeterminism():

    def test_repeated_runs_print_the_same_bytes(self, runner):
        args = ['defect-profile', '--map', 'brooks{ab}', '--radius', '4', '--format', 'json']
        first = invoke(runner, args)
        second = invoke(CliRunner(), args)
        assert first.exit_code == second.exit_code == 0
        assert first.stdout_bytes == second.stdout_bytes

    def test_repeated_sampled_runs_write_the_same_file(self, runner, tmp_path):
        outputs = []
        for name in ('first.csv', 'second.csv'):
            out = tmp_path / name
            result = invoke(CliRunner(), ['middle-profile', '--map', 'perturb{id,c=ba}', '--group', 'free:2',
                                          '--radius', '3', '--budget', '100', '--samples', '500',
                                          '--seed', '9', '--out', str(out)])
            assert result.exit_code == 0
            outputs.append(out.read_bytes())
        assert b',sampled' in outputs[0]
        assert outputs[0] == outputs[1]
