import unittest
from unittest.mock import MagicMock, patch

from django.test import SimpleTestCase

from conformal import app_settings
from conformal.reports import CheckRecord, Report, Status
from conformal.tasks import dispatch, verify_spec, verify_suite
from conformal.tests.factories import ADS3_SPEC, FLAT4_SPEC


class TestTasks(SimpleTestCase):

    def test_verify_spec_returns_a_report_dict(self):
        data = verify_spec(ADS3_SPEC, ["killing"], "0")
        report = Report.from_dict(data)
        self.assertEqual(report.digest, Report.digest_of(ADS3_SPEC))
        self.assertTrue(report.records)
        self.assertEqual(report.exit_code(), 0)

    def test_verify_suite(self):
        data = verify_suite(FLAT4_SPEC, "killing")
        record, = data["records"]
        self.assertEqual(record["status"], Status.SKIPPED.value)

    @unittest.skipIf(app_settings.ENABLE_TASKS, "tasks enabled")
    def test_dispatch_in_process(self):
        report = dispatch(FLAT4_SPEC, ["killing"])
        record, = report.records
        self.assertIs(record.status, Status.SKIPPED)

    @unittest.skipIf(not app_settings.ENABLE_TASKS, "tasks not enabled")
    @patch("conformal.tasks.verify_suite")
    def test_dispatch_merges_suite_tasks(self, mocked_task):
        def delay(spec_text, suite, weight=None):
            report = Report(title="Verification")
            report.add(CheckRecord(suite, "check", f"{suite}/check", Status.EXACT_PASS))
            report.set_quantity(f"{suite}/value", "1")
            result = MagicMock()
            result.get.return_value = report.to_dict()
            return result

        mocked_task.delay.side_effect = delay
        report = dispatch(FLAT4_SPEC, ["spin0", "spin1"])
        self.assertEqual(mocked_task.delay.call_count, 2)
        self.assertEqual([r.suite for r in report.records], ["spin0", "spin1"])
        self.assertEqual(set(report.quantities), {"spin0/value", "spin1/value"})
