import logging

from celery import shared_task

from .presets import run_suite
from .report import report_data
from .runner import run_experiment
from .serializers import ExperimentConfigSerializer

logger = logging.getLogger(__name__)


@shared_task(bind=True)
def run_experiment_task(self, config_data, timings=False):
    """
    Validates an experiment config and runs it on a worker.

    Args:
        config_data (dict): the experiment config document.
        timings (bool): keep per-case wall times in the returned report.

    Returns:
        dict: the JSON-ready report.
    """
    logger.info(f"Starting experiment task (Task ID: {self.request.id})...")
    serializer = ExperimentConfigSerializer(data=config_data)
    if not serializer.is_valid():
        logger.error(f"Rejected experiment config: {dict(serializer.errors)}")
        raise ValueError(f"Invalid experiment config: {dict(serializer.errors)}")
    report = run_experiment(serializer.validated_data)
    return report_data(report, timings)


@shared_task(bind=True)
def validate_suite_task(self, preset='quick', seed=None, workers=None):
    """Runs a validation preset on a worker and returns the JSON-ready suite report."""
    logger.info(f"Starting '{preset}' validation task (Task ID: {self.request.id})...")
    report = run_suite(preset, seed, workers)
    logger.info(f"Validation task finished: {report['summary']['verdict']}")
    return report_data(report)
