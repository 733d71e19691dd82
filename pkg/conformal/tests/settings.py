from test_project.settings import *  # noqa

CONFORMAL_TASKS_ENABLED = True
CELERY_BROKER_URL = "redis://localhost:6379/0"
CELERY_TASK_ALWAYS_EAGER = True
TEST_MODE = True

CONFORMAL_RANDOM_SEED = 7
CONFORMAL_MAX_WORKERS = 2
