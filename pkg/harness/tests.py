import io
import json
import math
import tempfile
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from coefficients.formulas import kf_coeff_e

from .corpus import BodyError, parse_body_name, resolve_bodies, resolve_body
from .presets import preset_configs, validate_suite
from .report import format_table, parse_report, render_report, report_data
from .runner import run_experiment, summarize
from .serializers import ExperimentConfigSerializer
from .tasks import run_experiment_task


def validated(**data):
    serializer = ExperimentConfigSerializer(data=data)
    if not serializer.is_valid():
        raise AssertionError(serializer.errors)
    return serializer.validated_data


def doubled_coefficient(*args):
    return kf_coeff_e(*args) * 2


class CorpusTests(SimpleTestCase):

    def test_named_bodies(self):
        label, P = resolve_body('unit-square')
        self.assertEqual(label, 'unit-square')
        self.assertAlmostEqual(P.volume, 1.0)
        self.assertEqual(resolve_body('unit-cube')[1].face_counts, (8, 12, 6, 1))

    def test_random_bodies_are_reproducible(self):
        first = resolve_body('random-polygon(7, 5)')[1]
        second = resolve_body('random-polygon(7, 5)')[1]
        self.assertEqual(first.vertices.tolist(), second.vertices.tolist())
        self.assertLessEqual(len(first.vertices), 7)
        self.assertEqual(resolve_body('random-polytope(8, 1)')[1].dim_ambient, 3)

    def test_derived_seed_is_recorded(self):
        (label, P), = resolve_bodies(['random-polygon(6)'], seed=3)
        kind, v, seed = parse_body_name(label)
        self.assertEqual((kind, v), ('random-polygon', 6))
        self.assertEqual(resolve_body(label)[1].vertices.tolist(), P.vertices.tolist())
        self.assertNotEqual(resolve_bodies(['random-polygon(6)'], seed=4)[0][0], label)

    def test_random_polytope_points_lie_on_the_sphere(self):
        P = resolve_body('random-polytope(12, 9)')[1]
        for vertex in P.vertices:
            self.assertAlmostEqual(float(vertex @ vertex), 1.0)

    def test_inline_and_file_bodies(self):
        label, P = resolve_body({'dim': 2, 'vertices': [[0, 0], [2, 0], [0, 2]]}, index=4)
        self.assertEqual(label, 'inline[4]')
        self.assertAlmostEqual(P.volume, 2.0)
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'tri.json'
            path.write_text(json.dumps({'dim': 2, 'vertices': [[0, 0], [1, 0], [0, 1]]}))
            self.assertAlmostEqual(resolve_body({'file': str(path)})[1].volume, 0.5)

    def test_unknown_bodies(self):
        for name in ('unit-disc', 'random-polygon(2)', 'random-polytope(3)', 'random-polygon(x)'):
            with self.assertRaises(BodyError):
                parse_body_name(name)


class ExperimentConfigTests(SimpleTestCase):

    def test_defaults(self):
        config = validated(kind='crofton')
        self.assertEqual(config['n'], 2)
        self.assertEqual(config['samples'], 10000)
        self.assertEqual(config['seed'], 0)
        self.assertEqual(config['zmax'], 3.0)
        self.assertEqual(config['atol'], 1e-10)
        self.assertFalse(config['antithetic'])

    def test_rejections(self):
        invalid = [
            {'kind': 'buffon'},
            {'kind': 'crofton', 'n': 4},
            {'kind': 'crofton', 'r': [5]},
            {'kind': 'crofton', 's': [7]},
            {'kind': 'crofton', 'j': [3]},
            {'kind': 'crofton', 'samples': 0},
            {'kind': 'crofton', 'seed': -1},
            {'kind': 'steiner', 'epsilon': [0.0]},
            {'kind': 'crofton', 'bodies': ['unit-cube']},
            {'kind': 'crofton', 'bodies': ['unit-disc']},
            {'kind': 'crofton', 'bodies': [{'dim': 2, 'vertices': [[0, 0, 0]]}]},
            {'kind': 'crofton', 'bodies': [{'file': '/nonexistent/body.json'}]},
            {'kind': 'kinematic', 'pairs': [['unit-square']]},
        ]
        for data in invalid:
            self.assertFalse(ExperimentConfigSerializer(data=data).is_valid(), data)

    def test_pairs(self):
        config = validated(kind='kinematic', pairs=[['unit-square', 'random-polygon(5, 1)']])
        self.assertEqual(config['pairs'], [['unit-square', 'random-polygon(5, 1)']])


class RunnerTests(SimpleTestCase):

    def test_coefficient_identities(self):
        report = run_experiment(validated(kind='coefficients'))
        self.assertEqual(report['summary']['verdict'], 'PASS')
        self.assertEqual(report['summary']['cases'], 7)
        for case in report['cases']:
            self.assertGreater(case['checked'], 0)
            self.assertEqual(case['failed'], 0)

    def test_perturbed_coefficient_fails(self):
        with mock.patch('coefficients.checks.kf_coeff_e', doubled_coefficient):
            report = run_experiment(validated(kind='coefficients'))
        self.assertEqual(report['summary']['verdict'], 'FAIL')
        failing = [case for case in report['cases'] if case['verdict'] == 'FAIL']
        self.assertIn('diagonal coefficients', [case['name'] for case in failing])
        self.assertTrue(failing[0]['failures'])

    def test_mcmullen_on_polygons(self):
        report = run_experiment(validated(kind='mcmullen', bodies=['unit-square', 'random-polygon(6, 2)'], max_order=3))
        self.assertEqual(report['summary']['verdict'], 'PASS')
        self.assertEqual(report['summary']['cases'], 4)
        for case in report['cases']:
            self.assertLessEqual(case['residual'], 1e-8)

    def test_tensor_algebra(self):
        report = run_experiment(validated(kind='tensor-algebra', n=3, bodies=['unit-cube']))
        self.assertEqual(report['summary']['verdict'], 'PASS')
        self.assertEqual(report['cases'][-1]['bodies'], ['unit-cube'])

    def test_steiner_estimate(self):
        report = run_experiment(validated(kind='steiner', bodies=['unit-square'], samples=5000, zmax=4.0))
        case, = report['cases']
        self.assertAlmostEqual(case['exact'].value, 5 + math.pi)
        self.assertEqual(case['estimate'].samples, 5000)
        self.assertEqual(case['verdict'], 'PASS')
        self.assertEqual(report['summary']['max_abs_z'], case['max_abs_z'])

    def test_crofton_grid_skips_invalid_indices(self):
        report = run_experiment(validated(kind='crofton', k=[0], j=[0, 1], samples=3))
        self.assertEqual([case['indices'] for case in report['cases']], [{'k': 0, 'j': 0, 'r': 0, 's': 0}])

    def test_failing_case_does_not_stop_the_experiment(self):
        config = validated(kind='steiner', bodies=['unit-square'], epsilon=[0.5, 1.0], samples=200, zmax=10.0)
        with mock.patch('harness.runner.steiner_polynomial', side_effect=[RuntimeError('boom'), 5 + math.pi]):
            with self.assertLogs('harness.runner', level='ERROR'):
                report = run_experiment(config)
        first, second = report['cases']
        self.assertEqual(first['verdict'], 'FAIL')
        self.assertEqual(first['failures'], ['RuntimeError: boom'])
        self.assertEqual(second['verdict'], 'PASS')
        self.assertEqual(report['summary']['verdict'], 'FAIL')

    def test_worker_count_is_not_echoed(self):
        report = run_experiment(validated(kind='coefficients', workers=3))
        self.assertNotIn('workers', report['config'])

    def test_summarize(self):
        cases = [
            {'verdict': 'PASS', 'max_abs_z': 1.5},
            {'verdict': 'PASS', 'max_abs_z': None},
            {'verdict': 'FAIL', 'max_abs_z': 0.5},
        ]
        self.assertEqual(
            summarize(cases), {'cases': 3, 'passed': 2, 'failed': 1, 'max_abs_z': 1.5, 'verdict': 'FAIL'},
        )
        self.assertEqual(summarize([])['verdict'], 'PASS')


class ReportTests(SimpleTestCase):

    def report(self):
        return run_experiment(validated(kind='steiner', bodies=['unit-square'], samples=500, seed=2, zmax=10.0))

    def test_json_round_trip(self):
        content = render_report(self.report())
        parsed = parse_report(content)
        self.assertEqual(render_report(parsed), content)
        self.assertEqual(json.loads(content), json.loads(render_report(parsed)))

    def test_timings_only_on_request(self):
        report = self.report()
        self.assertNotIn('wall_time', json.loads(render_report(report))['cases'][0])
        self.assertIn('wall_time', json.loads(render_report(report, timings=True))['cases'][0])
        self.assertIn('wall_time', report['cases'][0])

    def test_null_z_scores(self):
        report = run_experiment(validated(kind='crofton', k=[2], j=[2], samples=4))
        data = json.loads(render_report(report))
        self.assertEqual(data['cases'][0]['z'], [None])
        self.assertEqual(data['cases'][0]['verdict'], 'PASS')

    def test_table(self):
        table = format_table(self.report())
        self.assertIn('PASS', table)
        self.assertIn('steiner eps=1', table)
        self.assertIn('1/1 cases passed', table)

    def test_identical_seeds_give_identical_reports(self):
        self.assertEqual(render_report(self.report()), render_report(self.report()))

    def test_report_data_is_plain_json(self):
        data = report_data(self.report())
        self.assertEqual(data['cases'][0]['estimate']['windowVolume'], 9.0)
        self.assertEqual(data['config']['kind'], 'steiner')


class RunCommandTests(SimpleTestCase):

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)
        self.root = Path(self.directory.name)

    def write_config(self, data, name='config.json'):
        path = self.root / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)

    def run_command(self, *args, **options):
        out = io.StringIO()
        call_command('run', *args, stdout=out, **options)
        return out.getvalue()

    def test_passing_experiment_writes_report(self):
        config = self.write_config({'kind': 'crofton', 'bodies': ['unit-square'], 'samples': 500, 'zmax': 5.0})
        out_path = self.root / 'report.json'
        output = self.run_command(config=config, out=str(out_path))
        self.assertIn('crofton k=1 j=0 r=0 s=0', output)
        report = json.loads(out_path.read_text())
        self.assertEqual(report['summary']['verdict'], 'PASS')
        self.assertAlmostEqual(report['cases'][0]['exact']['coefficients'][0][1], 4 / math.pi)

    def test_flags_override_config(self):
        config = self.write_config({'kind': 'steiner', 'samples': 10, 'seed': 1, 'zmax': 10.0, 'bodies': ['unit-square']})
        out_path = self.root / 'report.json'
        self.run_command(config=config, out=str(out_path), seed=5, samples=300)
        report = json.loads(out_path.read_text())
        self.assertEqual(report['config']['seed'], 5)
        self.assertEqual(report['config']['samples'], 300)
        self.assertEqual(report['cases'][0]['estimate']['samples'], 300)

    def test_malformed_json_is_a_usage_error(self):
        config = self.write_config('{"kind": "crofton",')
        out_path = self.root / 'report.json'
        with self.assertRaises(CommandError) as raised:
            self.run_command(config=config, out=str(out_path))
        self.assertEqual(raised.exception.returncode, 2)
        self.assertFalse(out_path.exists())

    def test_usage_errors(self):
        cases = [
            {},
            {'config': str(self.root / 'missing.json')},
            {'config': self.write_config([1, 2, 3])},
            {'config': self.write_config({'kind': 'buffon'})},
            {'config': self.write_config({'kind': 'steiner'}), 'samples': 0},
        ]
        for options in cases:
            with self.assertRaises(CommandError) as raised:
                self.run_command(**options)
            self.assertEqual(raised.exception.returncode, 2, options)

    def test_failure_exit_code(self):
        config = self.write_config({'kind': 'coefficients'})
        out_path = self.root / 'report.json'
        with mock.patch('coefficients.checks.kf_coeff_e', doubled_coefficient):
            with self.assertRaises(CommandError) as raised:
                self.run_command(config=config, out=str(out_path))
        self.assertEqual(raised.exception.returncode, 1)
        self.assertEqual(json.loads(out_path.read_text())['summary']['verdict'], 'FAIL')

    def test_reports_do_not_depend_on_worker_count(self):
        config = self.write_config(
            {'kind': 'steiner', 'bodies': ['unit-square'], 'samples': 2500, 'seed': 6, 'zmax': 10.0},
        )
        serial, pooled = self.root / 'serial.json', self.root / 'pooled.json'
        self.run_command(config=config, out=str(serial), workers=1)
        self.run_command(config=config, out=str(pooled), workers=2)
        self.assertEqual(serial.read_bytes(), pooled.read_bytes())


class ValidateCommandTests(SimpleTestCase):

    def test_unknown_preset(self):
        for options in ({}, {'preset': 'nightly'}):
            with self.assertRaises(CommandError) as raised:
                call_command('validate', stdout=io.StringIO(), **options)
            self.assertEqual(raised.exception.returncode, 2)
        self.assertEqual(validate_suite('nightly'), 2)

    def test_quick_preset_passes_and_is_deterministic(self):
        with tempfile.TemporaryDirectory() as directory:
            first, second = Path(directory) / 'first.json', Path(directory) / 'second.json'
            out = io.StringIO()
            call_command('validate', preset='quick', out=str(first), stdout=out)
            call_command('validate', preset='quick', out=str(second), stdout=io.StringIO())
            self.assertEqual(first.read_bytes(), second.read_bytes())
            report = parse_report(first.read_bytes())
        self.assertEqual(report['summary']['verdict'], 'PASS')
        self.assertEqual(report['summary']['failed'], 0)
        self.assertIn('PASS:', out.getvalue())

    def test_perturbed_coefficient_fails_the_suite(self):
        with mock.patch('coefficients.checks.kf_coeff_e', doubled_coefficient):
            with self.assertRaises(CommandError) as raised:
                call_command('validate', preset='quick', stdout=io.StringIO())
        self.assertEqual(raised.exception.returncode, 1)

    def test_validate_suite_exit_codes(self):
        passing = {'summary': {'verdict': 'PASS'}}
        failing = {'summary': {'verdict': 'FAIL'}}
        with mock.patch('harness.presets.run_suite', return_value=passing):
            self.assertEqual(validate_suite('quick'), 0)
        with mock.patch('harness.presets.run_suite', return_value=failing):
            self.assertEqual(validate_suite('full'), 1)

    def test_preset_overrides(self):
        for config in preset_configs('full', seed=9, workers=2):
            self.assertEqual(config['seed'], 9)
            self.assertEqual(config['workers'], 2)


class TaskTests(SimpleTestCase):

    def test_run_experiment_task(self):
        report = run_experiment_task.apply(args=[{'kind': 'coefficients'}]).get()
        self.assertEqual(report['summary']['verdict'], 'PASS')
        self.assertEqual(json.loads(json.dumps(report))['config']['kind'], 'coefficients')

    def test_invalid_config(self):
        with self.assertRaises(ValueError):
            run_experiment_task.apply(args=[{'kind': 'buffon'}]).get()
