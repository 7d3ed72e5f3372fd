"""
Django settings for Qntz project.

For more information on this file, see
https://docs.djangoproject.com/en/4.0/topics/settings/

Every QNTZ_* constant below may be overridden by an environment variable
of the same name.
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


def env(name: str, default):
    value = os.environ.get(name)
    if value is None:
        return default
    return type(default)(value)


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get("QNTZ_SECRET_KEY", "qntz-local")

DEBUG = env("QNTZ_DEBUG", 0) == 1

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # My apps
    "graphs.apps.GraphsConfig",
    "weights.apps.WeightsConfig",
    "star.apps.StarConfig",
    "runs.apps.RunsConfig",
]


# Database
# https://docs.djangoproject.com/en/4.0/ref/settings/#databases

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": BASE_DIR / "db.sqlite3",
    }
}


# Internationalization

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True


# Default primary key field type
# https://docs.djangoproject.com/en/4.0/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


# Logging
QNTZ_LOG_LEVEL = env("QNTZ_LOG_LEVEL", "WARNING")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{asctime} {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
            "stream": "ext://sys.stderr",
        },
    },
    "loggers": {
        app: {"handlers": ["console"], "level": QNTZ_LOG_LEVEL, "propagate": False}
        for app in ("graphs", "weights", "star", "runs")
    },
}


# Graph enumeration
QNTZ_MAX_INTERNAL = env("QNTZ_MAX_INTERNAL", 5)


# Regular values, in turns
QNTZ_REGULAR_BASE = env("QNTZ_REGULAR_BASE", "1/2")
QNTZ_REGULAR_EPSILON = env("QNTZ_REGULAR_EPSILON", "1/64")
QNTZ_ALTERNATE_REGULAR_BASE = env("QNTZ_ALTERNATE_REGULAR_BASE", "1/5")
QNTZ_ALTERNATE_REGULAR_EPSILON = env("QNTZ_ALTERNATE_REGULAR_EPSILON", "3/37")


# Preimage solver
QNTZ_RAY_SPAN = env("QNTZ_RAY_SPAN", 30.0)
QNTZ_RAY_POINTS = env("QNTZ_RAY_POINTS", 12001)
QNTZ_NEWTON_STARTS = env("QNTZ_NEWTON_STARTS", 12)
QNTZ_NEWTON_MAX_ITER = env("QNTZ_NEWTON_MAX_ITER", 80)
QNTZ_DEDUP_RADIUS = env("QNTZ_DEDUP_RADIUS", 1e-6)
QNTZ_POLISH_TOL = env("QNTZ_POLISH_TOL", 1e-12)
QNTZ_CONDITION_LIMIT = env("QNTZ_CONDITION_LIMIT", 1e10)
# recount every labelling at a nudged value with a denser start grid
QNTZ_CROSS_CHECK = env("QNTZ_CROSS_CHECK", 1) == 1


# Monte-Carlo integration
QNTZ_MC_SAMPLES = env("QNTZ_MC_SAMPLES", 200_000)
QNTZ_MC_CHUNK = env("QNTZ_MC_CHUNK", 50_000)
QNTZ_MC_RADIUS_MIN = env("QNTZ_MC_RADIUS_MIN", 1e-3)
QNTZ_MC_RADIUS_MAX = env("QNTZ_MC_RADIUS_MAX", 1e3)
QNTZ_SEED = env("QNTZ_SEED", 7)


# Star products
QNTZ_ORDER = env("QNTZ_ORDER", 3)
# counted tables cost tens of minutes at order 3
QNTZ_COUNTED_ORDER = env("QNTZ_COUNTED_ORDER", 2)
