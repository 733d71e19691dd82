from conformal.tests.settings import *  # noqa

CONFORMAL_TASKS_ENABLED = False
CONFORMAL_REPORT_TIMINGS = False
