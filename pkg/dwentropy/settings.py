"""
Double-well entropy platform Django settings
Python 3.11+ + Django 5.1, no database (computation-only project)
"""

import os
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'dwentropy-local-only-key')

DEBUG = os.environ.get('DJANGO_DEBUG', '0') == '1'

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'apps.core',
]

# Management commands only; nothing is persisted.
DATABASES = {}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# ── Numerical defaults ───────────────────────────────────────
# Every key can be overridden from the environment as DOUBLEWELL_<KEY>.

def _env_override(defaults: dict) -> dict:
    merged = dict(defaults)
    for key, value in defaults.items():
        raw = os.environ.get(f'DOUBLEWELL_{key}')
        if raw is None:
            continue
        merged[key] = type(value)(raw)
    return merged


DOUBLEWELL = _env_override({
    'BASIS_SIZE':         100,      # N, dimension of the oscillator basis
    'GAMMA_MODE':         'full',   # full / even / odd / manual
    'PAD':                4,        # extra rows for operator powers (2·n_exp)
    'QUADRATURE_RULE':    'gauss_legendre',
    'QUADRATURE_PANELS':  32,
    'QUADRATURE_ORDER':   16,
    'ABS_TOL':            1e-11,
    'REL_TOL':            1e-9,
    'DOMAIN_CUT':         1.2,
    'MAX_REFINEMENTS':    10,
    'BOX_BASIS_SIZE':     200,
    'MAX_WORKERS':        4,
    'SIGNIFICANT_DIGITS': 15,
    'BETA_STEP':          0.25,
    'MERGE_TOL':          1e-3,
    'MERGE_RUN':          3,
})


LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {'format': '%(asctime)s %(levelname)-7s %(name)s %(message)s'},
    },
    'handlers': {
        'console': {'class': 'logging.StreamHandler', 'formatter': 'plain'},
    },
    'loggers': {
        'apps': {
            'handlers': ['console'],
            'level': os.environ.get('DOUBLEWELL_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}
