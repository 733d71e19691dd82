import os

from django.conf import settings


# Zero-test behaviour
CONFORMAL_ZERO_TEST_SAMPLES = getattr(settings, "CONFORMAL_ZERO_TEST_SAMPLES", 20)
CONFORMAL_ZERO_TEST_TOLERANCE = getattr(settings, "CONFORMAL_ZERO_TEST_TOLERANCE", 1e-9)
CONFORMAL_ZERO_TEST_RETRIES = getattr(settings, "CONFORMAL_ZERO_TEST_RETRIES", 10)
CONFORMAL_ZERO_TEST_DIGITS = getattr(settings, "CONFORMAL_ZERO_TEST_DIGITS", 30)

# Expressions larger than this skip the final sympy.simplify() pass of the normal form
CONFORMAL_SIMPLIFY_MAX_OPS = getattr(settings, "CONFORMAL_SIMPLIFY_MAX_OPS", 400)

CONFORMAL_RANDOM_SEED = getattr(settings, "CONFORMAL_RANDOM_SEED", 20240101)

CONFORMAL_MAX_WORKERS = getattr(settings, "CONFORMAL_MAX_WORKERS", 4)

CONFORMAL_REPORT_EXPORTERS = getattr(
    settings,
    "CONFORMAL_REPORT_EXPORTERS",
    [
        ("text", "conformal.exporters.TextExporter"),
        ("json", "conformal.exporters.JSONExporter"),
    ]
)

# Timings make reports differ between runs; keep them off for golden files
CONFORMAL_REPORT_TIMINGS = getattr(settings, "CONFORMAL_REPORT_TIMINGS", False)

# Undecided zero tests fail the run in strict mode
CONFORMAL_STRICT = getattr(settings, "CONFORMAL_STRICT", False)

# Suites can be farmed out to celery workers
ENABLE_TASKS = getattr(settings, "CONFORMAL_TASKS_ENABLED", False)

CONFORMAL_DISCREPANCY_WHITELIST = getattr(
    settings,
    "CONFORMAL_DISCREPANCY_WHITELIST",
    os.path.join(os.path.dirname(__file__), "specs", "discrepancies.txt")
)

CONFORMAL_SPEC_DIR = getattr(
    settings,
    "CONFORMAL_SPEC_DIR",
    os.path.join(os.path.dirname(__file__), "specs")
)
