from conformal import app_settings
from conformal.reports import Report
from conformal.specfile import parse_spec
from conformal.suites import DEFAULT_SUITES, parse_weight, run_suites


if app_settings.ENABLE_TASKS:
    from celery import shared_task
    from celery.utils.log import get_task_logger

    logger = get_task_logger(__name__)
else:
    import logging

    from conformal.utils import noop_decorator as shared_task

    logger = logging.getLogger(__name__)


@shared_task
def verify_spec(spec_text, suites=None, weight=None):
    """Run ``suites`` on the spec file text; returns the report as a dict."""
    bundle = parse_spec(spec_text).build()
    logger.info(f"Verifying {bundle.ctx} with suites {suites or 'default'}")
    report = run_suites(bundle, suites, parse_weight(weight))
    return report.to_dict()


@shared_task
def verify_suite(spec_text, suite, weight=None):
    """One suite per task, so a worker pool can spread a verification run."""
    return verify_spec(spec_text, [suite], weight)


def dispatch(spec_text, suites, weight=None):
    """
    Run every suite as its own task when tasks are enabled and merge the
    results; otherwise run them in-process.
    """
    if not app_settings.ENABLE_TASKS:
        return Report.from_dict(verify_spec(spec_text, suites, weight))
    pending = [verify_suite.delay(spec_text, suite, weight) for suite in suites or DEFAULT_SUITES]
    report = Report.from_dict(pending[0].get())
    for result in pending[1:]:
        report.merge(Report.from_dict(result.get()))
    logger.info(f"Merged {len(pending)} suite tasks")
    return report
