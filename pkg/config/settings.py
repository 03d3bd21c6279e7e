"""
Django settings for the weyl-forge project.

The project has no web surface; Django provides the settings layer, the
management-command CLI, the ORM used to index experiment runs, and the test
runner.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

import os
from pathlib import Path

import environ

# Initialize environ
env = environ.Env(
    DEBUG=(bool, True),
    LOG_LEVEL=(str, "INFO"),
)

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

env_file = os.path.join(BASE_DIR, ".env")

if os.path.isfile(env_file):
    # Use a local env file, if provided. Only ambient settings (debug, logging,
    # database) are read from it; experiment parameters never are.
    env.read_env(env_file)

SECRET_KEY = env("SECRET_KEY", default="weyl-forge-local-only-not-a-secret")

DEBUG = env("DEBUG")

ALLOWED_HOSTS: list[str] = []

# Application definition

INSTALLED_APPS = [
    "django.contrib.contenttypes",
    "arithmetic",
    "forge",
]

MIDDLEWARE: list[str] = []

# Database
# SQLite next to the project unless DATABASE_URL says otherwise

DATABASES = {
    "default": env.db("DATABASE_URL", default=f"sqlite:///{BASE_DIR / 'db.sqlite3'}"),
}

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

USE_TZ = True

TIME_ZONE = "UTC"

# =============================================================================
# Computation budgets
# =============================================================================

# Largest field (number of elements) a full-field scan may enumerate
WEYL_ENUMERATION_BUDGET = 2**24

# Largest census bound the prime sieve accepts
WEYL_PRIME_CAP = 10**8

# Primes examined by irreducibility and Weyl certification
WEYL_PRIME_BUDGET = 200

# Transvection steps per symplectic sample
WEYL_WALK_LENGTH = 128

# Largest |Sp_2g(F_l)| enumerated exactly
WEYL_EXACT_GROUP_CAP = 10**6

# Default Monte-Carlo sample count
WEYL_SAMPLE_COUNT = 100_000

# Elements per partition of the point-count reduction
WEYL_COUNT_CHUNK = 2**16

# Logging configuration
LOG_LEVEL = env("LOG_LEVEL")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {module} {process:d} {thread:d} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": "WARNING",
    },
    "loggers": {
        "django": {
            "handlers": ["console"],
            "level": "WARNING",
            "propagate": False,
        },
        "arithmetic": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
        "forge": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
        "config.timing": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
    },
}
