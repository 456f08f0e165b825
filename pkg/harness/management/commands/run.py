import json
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from harness.report import format_table, write_report
from harness.runner import run_experiment
from harness.serializers import ExperimentConfigSerializer

logger = logging.getLogger(__name__)

USAGE_ERROR = 2
VERIFICATION_FAILURE = 1


def read_config(path):
    """The config document at ``path``; unreadable or malformed files are usage errors."""
    try:
        data = json.loads(Path(path).read_text(encoding='utf-8'))
    except OSError as exc:
        raise CommandError(f"Cannot read config {path}: {exc}", returncode=USAGE_ERROR)
    except json.JSONDecodeError as exc:
        raise CommandError(f"Config {path} is not valid JSON: {exc}", returncode=USAGE_ERROR)
    if not isinstance(data, dict):
        raise CommandError(f"Config {path} must be a JSON object.", returncode=USAGE_ERROR)
    return data


class Command(BaseCommand):
    help = "Run one verification experiment described by a JSON config; flags override config fields."

    def add_arguments(self, parser):
        parser.add_argument('--config', help="Path to the experiment config (JSON).")
        parser.add_argument('--out', help="Write the JSON report to this path.")
        parser.add_argument('--seed', type=int)
        parser.add_argument('--samples', type=int)
        parser.add_argument('--workers', type=int)
        parser.add_argument('--timings', action='store_true', help="Include per-case wall times in the JSON report.")

    def handle(self, *args, **options):
        if not options.get('config'):
            raise CommandError("--config is required.", returncode=USAGE_ERROR)
        data = read_config(options['config'])
        for name in ('seed', 'samples', 'workers'):
            if options.get(name) is not None:
                logger.info(f"Overriding config field '{name}' with {options[name]}")
                data[name] = options[name]

        serializer = ExperimentConfigSerializer(data=data)
        if not serializer.is_valid():
            raise CommandError(f"Invalid config: {json.dumps(serializer.errors)}", returncode=USAGE_ERROR)

        report = run_experiment(serializer.validated_data)
        self.stdout.write(format_table(report))
        if options.get('out'):
            write_report(report, options['out'], options.get('timings', False))

        if report['summary']['verdict'] != 'PASS':
            raise CommandError(
                f"{report['summary']['failed']} of {report['summary']['cases']} cases failed.",
                returncode=VERIFICATION_FAILURE,
            )
