"""
Django settings for the latticelab project.

The project has no web surface: Django provides settings, app loading and the
management-command runner for the posets app.
"""

from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='django-insecure-latticelab-local')

DEBUG = config('DEBUG', default=False, cast=bool)


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    # Third-party apps
    'rest_framework',
    # Local apps
    'posets',
]

# Nothing is persisted; an in-memory database keeps Django's checks quiet
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    }
}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# ==============================================================================
# Lattice Lab Configuration
# ==============================================================================

LATTICELAB_MAX_ELEMENTS = config('LATTICELAB_MAX_ELEMENTS', default=64, cast=int)
LATTICELAB_MAX_DOWNSETS = config('LATTICELAB_MAX_DOWNSETS', default=2**20, cast=int)
# Longest tuple (Y1..Yn) examined by the separation checks
LATTICELAB_TUPLE_BOUND = config('LATTICELAB_TUPLE_BOUND', default=3, cast=int)
LATTICELAB_SEED = config('LATTICELAB_SEED', default=0, cast=int)
LATTICELAB_FORMAT = config('LATTICELAB_FORMAT', default='json')  # 'json', 'dot' or 'text'
LATTICELAB_MAX_POWERSET_K = config('LATTICELAB_MAX_POWERSET_K', default=6, cast=int)

# Probe budgets (stages)
LATTICELAB_OBSTRUCTION_BUDGET = config('LATTICELAB_OBSTRUCTION_BUDGET', default=5, cast=int)
LATTICELAB_FAMILY_BUDGET = config('LATTICELAB_FAMILY_BUDGET', default=8, cast=int)
LATTICELAB_DIMENSION_BUDGET = config('LATTICELAB_DIMENSION_BUDGET', default=4, cast=int)
LATTICELAB_MAX_DIMENSION_ELEMENTS = config(
    'LATTICELAB_MAX_DIMENSION_ELEMENTS', default=10, cast=int
)
LATTICELAB_WORKERS = config('LATTICELAB_WORKERS', default=1, cast=int)


# ==============================================================================
# OpenTelemetry Configuration
# ==============================================================================

OTEL_ENABLED = config('OTEL_ENABLED', default=False, cast=bool)
OTEL_SERVICE_NAME = config('OTEL_SERVICE_NAME', default='latticelab')
OTEL_EXPORTER_TYPE = config('OTEL_EXPORTER_TYPE', default='console')  # 'console' or 'otlp'
OTEL_EXPORTER_OTLP_ENDPOINT = config(
    'OTEL_EXPORTER_OTLP_ENDPOINT', default='http://localhost:4318/v1/traces'
)

# ==============================================================================
# Prometheus Configuration
# ==============================================================================

# node-exporter textfile written when a command exits; unset disables the dump
METRICS_TEXTFILE = config('METRICS_TEXTFILE', default=None)

# ==============================================================================
# Logging Configuration
# ==============================================================================

LOG_LEVEL = config('LOG_LEVEL', default='INFO')

# Results go to stdout, so every handler writes to stderr
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'posets': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
        'latticelab': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}
