"""
Django settings for the tensorval project.

tensorval has no database and serves no HTTP; Django provides the settings layer,
the app registry, management commands and the test runner.
"""

from pathlib import Path
import os
from dotenv import load_dotenv

load_dotenv()  # Load environment variables from .env file

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'tensorval-insecure-local-key')

DEBUG = os.environ.get('DEBUG', 'False') == 'True'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'symtensor',
    'coefficients',
    'polytope',
    'valuations',
    'mc_integration',
    'harness',
]

DATABASES = {}

REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
    'COERCE_DECIMAL_TO_STRING': False,
}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Numerical settings

TENSORVAL_WORKERS = int(os.environ.get('TENSORVAL_WORKERS', 1))
TENSORVAL_BATCH_SIZE = int(os.environ.get('TENSORVAL_BATCH_SIZE', 1000))
TENSORVAL_MAX_POSITION_RANK = int(os.environ.get('TENSORVAL_MAX_POSITION_RANK', 4))
TENSORVAL_GEOMETRY_TOL = float(os.environ.get('TENSORVAL_GEOMETRY_TOL', 1e-9))
TENSORVAL_QUADRATURE_TOL = float(os.environ.get('TENSORVAL_QUADRATURE_TOL', 1e-10))
TENSORVAL_ATOL = float(os.environ.get('TENSORVAL_ATOL', 1e-10))
TENSORVAL_RTOL = float(os.environ.get('TENSORVAL_RTOL', 1e-10))
TENSORVAL_ZMAX = float(os.environ.get('TENSORVAL_ZMAX', 3.0))


# Logging

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {asctime} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': os.environ.get('TENSORVAL_LOG_LEVEL', 'INFO'),
    },
}


# Celery: whole suites can be queued on a worker

CELERY_BROKER_URL = os.environ.get('CELERY_BROKER_URL', 'redis://localhost:6379/0')  # Use Redis as the message broker
CELERY_RESULT_BACKEND = os.environ.get('CELERY_RESULT_BACKEND', 'redis://localhost:6379/0')  # Store results in Redis
CELERY_ACCEPT_CONTENT = ['json']
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
CELERY_TIMEZONE = 'UTC'
