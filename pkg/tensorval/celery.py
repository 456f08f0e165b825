"""Celery app for queued experiments and validation presets (see :mod:`harness.tasks`)."""
import os

from celery import Celery

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'tensorval.settings')

app = Celery('tensorval')

app.config_from_object('django.conf:settings', namespace='CELERY')

# Suites run for minutes; a worker takes one at a time and acknowledges it when done.
app.conf.update(
    worker_prefetch_multiplier=1,
    task_acks_late=True,
    task_routes={'harness.tasks.*': {'queue': 'verification'}},
)

app.autodiscover_tasks()
