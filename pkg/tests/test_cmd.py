import os
import pytest
import sys

from test_utils import PerformTest, _setup, write_json

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
from urysel import Runner


@pytest.fixture(scope='class')
def class_manager(request, pytestconfig):
    config = os.path.join(
        os.path.dirname(__file__), pytestconfig.getoption("config")
    )
    _setup(request, config)
    yield


@pytest.fixture
def perform(request, tmp_path):
    return PerformTest(Runner, request.cls.config_file, tmp_path)


QUARTERS = {
    "kind": "real-line",
    "params": {"points": ["0/1", "1/4", "1/2", "3/4", "1/1"]},
}


@pytest.mark.usefixtures('class_manager')
class TestCmd:
    def test_001_build_urysohn(self, perform, tmp_path):
        report = perform.run_twice(
            ['build-urysohn', '--steps', '20'], 'builder'
        )
        assert report['valid'] is True
        assert report['violations'] == []
        assert report['points'] == len(report['space']['points'])
        assert len(report['log']) == 20

        # the bookkeeping continues from a saved builder
        saved = write_json(tmp_path / 'saved.json', report)
        more = perform.run(
            ['build-urysohn', '--steps', '5', '--builder', saved],
            'continued.json'
        )
        assert more['valid'] is True
        assert len(more['log']) == 25
        assert more['points'] >= report['points']
        n = report['points']
        assert [row[:n] for row in more['space']['dist'][:n]] == \
            report['space']['dist']

    def test_002_embed_quarters(self, perform, tmp_path):
        space = write_json(tmp_path / 'space.json', QUARTERS)
        report = perform.run_twice(
            ['embed', '--space', space, '--count', '5'], 'embed',
            output_option='--report'
        )
        assert report['ok'] is True
        assert len(report['rows']) == 15
        for row in report['rows']:
            assert row['discrepancy'] == '0/1'

    def test_003_select_hand_computed(self, perform, tmp_path):
        space = write_json(tmp_path / 'space.json', {"kind": "real-line"})
        point = write_json(tmp_path / 'point.json', {"value": "1/2"})
        report = perform.run_twice(
            ['select', '--space', space, '--point', point, '--level', '1'],
            'select'
        )
        assert report['delta'] == '1/2'
        assert report['dist']['mass'] == ['1/2', '1/2']
        assert report['support'] == [0, 1]

    def test_004_harness(self, perform):
        report = perform.run_twice(
            ['harness', '--levels', '20', '--trials', '5'], 'harness',
            output_option='--report'
        )
        assert report['ok'] is True
        assert report['violations'] == 0
        assert report['target'] == '1/3'
        assert [row['n'] for row in report['levels']] == list(range(20))

    def test_005_check_suite(self, perform):
        report = perform.run_twice(
            ['check', 'metric-axioms'], 'check', output_option='--report'
        )
        assert report['ok'] is True
        assert report['suite'] == 'metric-axioms'
        assert all(a['failed'] == 0 for a in report['assertions'])

    def test_006_check_inject_fault(self, perform):
        report = perform.run(
            ['check', 'metric-axioms', '--inject-fault'], 'fault.json',
            output_option='--report', expected_code=1
        )
        assert report['ok'] is False
        failed = [a for a in report['assertions'] if a['failed']]
        assert failed and failed[0]['witnesses']

    def test_007_unknown_suite(self, perform):
        with pytest.raises(SystemExit) as e:
            perform.run(['check', 'no-such-suite'], 'unknown.json',
                        output_option='--report')
        assert e.value.code == 2

    def test_008_density_grid(self, perform, tmp_path):
        grid = write_json(tmp_path / 'grid.json', ["0/1", "1/2"])
        report = perform.run_twice(
            ['density', '--type', 'V1->V1', '--base', 'V1=real-line',
             '--level', '1', '--count', '3', '--eval-grid', grid],
            'density'
        )
        assert report['type'] == '(V1->V1)'
        assert report['level_size'] == 4
        assert len(report['points']) == 3
        assert report['grid'] == ['0/1', '1/2']
        assert [len(row) for row in report['evaluations']] == [2, 2, 2]

    def test_009_represent(self, perform, tmp_path):
        space = write_json(tmp_path / 'space.json', {"kind": "real-line"})
        point = write_json(tmp_path / 'point.json', {"value": "1/3"})
        report = perform.run_twice(
            ['represent', '--space', space, '--point', point,
             '--stage', '3', '--eps', '1/2'],
            'represent'
        )
        assert report['represents'] == 'yes'
        assert report['refuting_ball'] is None
        assert len(report['stream']) == 4

    def test_010_inject_fault_every_suite(self, perform):
        for suite in ('embedding', 'domain-rep'):
            report = perform.run(
                ['check', suite, '--inject-fault'], suite + '.json',
                output_option='--report', expected_code=1
            )
            assert report['ok'] is False
