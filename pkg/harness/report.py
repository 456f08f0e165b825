"""
Report emission: JSON through the REST framework renderer and a plain-text table for stdout.

Wall times only reach the JSON with ``timings=True``, so identical seeds give byte-identical
JSON reports.
"""
import json
import logging
from pathlib import Path

from rest_framework.renderers import JSONRenderer

from .serializers import ReportSerializer, SuiteReportSerializer

logger = logging.getLogger(__name__)


def _strip_timings(report):
    if 'experiments' in report:
        return {**report, 'experiments': [_strip_timings(experiment) for experiment in report['experiments']]}
    cases = [{key: value for key, value in case.items() if key != 'wall_time'} for case in report['cases']]
    return {**report, 'cases': cases}


def report_data(report, timings=False):
    """JSON-ready form of an experiment or suite report."""
    if not timings:
        report = _strip_timings(report)
    serializer_class = SuiteReportSerializer if 'experiments' in report else ReportSerializer
    return serializer_class(report).data


def render_report(report, timings=False):
    return JSONRenderer().render(report_data(report, timings), renderer_context={'indent': 2})


def write_report(report, path, timings=False):
    path = Path(path)
    path.write_bytes(render_report(report, timings))
    logger.info(f"Report written to {path}")


def parse_report(content):
    """Inverse of :func:`render_report`: validated report data from JSON bytes or text."""
    data = json.loads(content)
    serializer_class = SuiteReportSerializer if 'experiments' in data else ReportSerializer
    serializer = serializer_class(data=data)
    serializer.is_valid(raise_exception=True)
    return serializer.validated_data


def _case_measure(case):
    if case['max_abs_z'] is not None:
        return f"max|z|={case['max_abs_z']:.2f}"
    if case['residual'] is not None:
        return f"residual={case['residual']:.1e}"
    if case['checked'] is not None:
        return f"{case['checked'] - case['failed']}/{case['checked']} ok"
    return ''


def format_table(report):
    """Human summary: one line per case, then the verdict."""
    experiments = report['experiments'] if 'experiments' in report else [report]
    lines = []
    for experiment in experiments:
        config = experiment['config']
        lines.append(f"== {config['kind']} (n={config['n']}, seed={config['seed']}, samples={config['samples']})")
        for case in experiment['cases']:
            bodies = ' x '.join(case['bodies']) or '-'
            timing = f"{case['wall_time']:8.2f}s" if 'wall_time' in case else ''
            lines.append(
                f"{case['verdict']:<5} {case['name']:<40} {bodies:<36} {_case_measure(case):<20} {timing}".rstrip()
            )
            for failure in case['failures']:
                lines.append(f"      {failure}")
    summary = report['summary']
    lines.append(
        f"{summary['verdict']}: {summary['passed']}/{summary['cases']} cases passed, "
        f"max|z| = {summary['max_abs_z']:.2f}"
    )
    return '\n'.join(lines)
