import json

from django.test import SimpleTestCase

from conformal.exporters import JSONExporter, TextExporter, get_exporter_class
from conformal.reports import Report, Status
from conformal.tests.factories import CheckRecordFactory, ReportFactory
from conformal.utils import UnsupportedInput


class TestGetExporter(SimpleTestCase):

    def test_known_formats(self):
        self.assertIs(get_exporter_class("text"), TextExporter)
        self.assertIs(get_exporter_class("json"), JSONExporter)

    def test_unknown_format(self):
        with self.assertRaises(UnsupportedInput):
            get_exporter_class("xlsx")


class TestTextExporter(SimpleTestCase):

    def test_verbose_output(self):
        report = ReportFactory(title="Spin zero")
        output = TextExporter(report).get_output()
        self.assertTrue(output.startswith("Spin zero\n"))
        self.assertIn("spin0/mass-squared = P", output)
        self.assertIn("[exact-pass] spin0/check-", output)
        self.assertIn("exact-pass: 3", output)

    def test_quiet_output_lists_every_record(self):
        report = ReportFactory()
        report.add(CheckRecordFactory(name="broken", status=Status.FAIL, residual="x"))
        report.add(CheckRecordFactory(name="lax", status=Status.SKIPPED, residual="y", detail="why"))
        output = TextExporter(report).get_output(verbose=False)
        self.assertEqual(output.count("[exact-pass] spin0/check-"), 3)
        self.assertIn("[fail] spin0/broken\n    residual: x\n", output)
        self.assertIn("[skipped] spin0/lax\n", output)
        self.assertNotIn("residual: y", output)
        self.assertNotIn("why", output)

    def test_verbose_output_adds_anchor_and_detail(self):
        report = ReportFactory(records=[])
        report.add(CheckRecordFactory(name="lax", status=Status.SKIPPED, residual="y", detail="why"))
        output = TextExporter(report).get_output(verbose=True)
        self.assertIn("[skipped] spin0/lax (spin0/lax) why\n    residual: y\n", output)

    def test_empty_report(self):
        self.assertIn("no checks", TextExporter(Report()).get_output())

    def test_filename(self):
        self.assertEqual(TextExporter(ReportFactory(title="Spin Two Tables")).get_filename(), "spin-two-tables.txt")
        self.assertEqual(JSONExporter(Report()).get_filename(), "report.json")


class TestJSONExporter(SimpleTestCase):

    def test_output_parses(self):
        report = ReportFactory()
        data = json.loads(JSONExporter(report).get_output())
        self.assertEqual(data["title"], report.title)
        self.assertEqual(len(data["records"]), 3)
        self.assertEqual(data["counts"]["exact-pass"], 3)

    def test_output_is_stable(self):
        report = ReportFactory()
        self.assertEqual(JSONExporter(report).get_output(), JSONExporter(Report.from_dict(report.to_dict())).get_output())
