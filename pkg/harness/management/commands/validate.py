from django.core.management.base import BaseCommand, CommandError

from harness.presets import PRESETS, run_suite
from harness.report import format_table, write_report

from .run import USAGE_ERROR, VERIFICATION_FAILURE


class Command(BaseCommand):
    help = "Run a validation preset (quick or full); exits 1 if any case fails."

    def add_arguments(self, parser):
        parser.add_argument('--preset', help=f"One of: {', '.join(PRESETS)}.")
        parser.add_argument('--out', help="Write the JSON suite report to this path.")
        parser.add_argument('--seed', type=int)
        parser.add_argument('--workers', type=int)
        parser.add_argument('--timings', action='store_true', help="Include per-case wall times in the JSON report.")

    def handle(self, *args, **options):
        preset = options.get('preset')
        if preset not in PRESETS:
            raise CommandError(
                f"Unknown preset {preset!r}; choose one of {', '.join(PRESETS)}.", returncode=USAGE_ERROR,
            )
        seed = options.get('seed')
        if seed is not None and seed < 0:
            raise CommandError(f"Seeds must be nonnegative, got {seed}.", returncode=USAGE_ERROR)
        workers = options.get('workers')
        if workers is not None and workers < 1:
            raise CommandError(f"Need at least one worker, got {workers}.", returncode=USAGE_ERROR)

        report = run_suite(preset, seed, workers)
        self.stdout.write(format_table(report))
        if options.get('out'):
            write_report(report, options['out'], options.get('timings', False))

        if report['summary']['verdict'] != 'PASS':
            raise CommandError(
                f"Preset '{preset}': {report['summary']['failed']} of {report['summary']['cases']} cases failed.",
                returncode=VERIFICATION_FAILURE,
            )
