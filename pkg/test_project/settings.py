import os

USE_TZ = True
SECRET_KEY = "shhh"
DEBUG = True

BASE_DIR = os.path.dirname(os.path.dirname(__file__))

# The app keeps no models; the test runner still wants a database
DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": "tmp",
        "TEST": {
            "NAME": "tmp"
        }
    }
}

INSTALLED_APPS = (
    "django.contrib.contenttypes",
    "conformal",
)

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "handlers": {
        "console": {"class": "logging.StreamHandler"},
    },
    "loggers": {
        "conformal": {
            "handlers": ["console"],
            "level": os.environ.get("CONFORMAL_LOG_LEVEL", "WARNING"),
        },
    },
}

# Conformal-specific

CONFORMAL_RANDOM_SEED = 20240101
CONFORMAL_MAX_WORKERS = int(os.environ.get("CONFORMAL_MAX_WORKERS", 4))

# Tasks disabled by default, but if you have celery installed
# make sure the broker URL is set correctly
CONFORMAL_TASKS_ENABLED = False
CELERY_BROKER_URL = os.environ.get("CELERY_BROKER_URL")
