import logging

from django.apps import AppConfig

logger = logging.getLogger(__name__)

# built-in values for every DOUBLEWELL key the app reads
DOUBLEWELL_DEFAULTS = {
    'BASIS_SIZE':         100,
    'GAMMA_MODE':         'full',
    'PAD':                4,
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
}


def merge_doublewell_settings(configured: dict) -> dict:
    """Fill missing keys with defaults; unknown keys are kept but reported."""
    unknown = sorted(set(configured) - set(DOUBLEWELL_DEFAULTS))
    if unknown:
        logger.warning(f'[Settings] unknown DOUBLEWELL keys ignored: {", ".join(unknown)}')
    merged = dict(DOUBLEWELL_DEFAULTS)
    merged.update(configured)
    return merged


class CoreConfig(AppConfig):
    name = 'apps.core'
    verbose_name = 'Double-well information entropies'

    def ready(self):
        from django.conf import settings
        settings.DOUBLEWELL = merge_doublewell_settings(getattr(settings, 'DOUBLEWELL', {}) or {})
