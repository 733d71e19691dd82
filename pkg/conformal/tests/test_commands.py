import json
import os
import re
import tempfile
from io import StringIO
from unittest.mock import patch

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from conformal.reports import CheckRecord, Report, Status
from conformal.specfile import load_spec


def run(*args):
    out = StringIO()
    call_command("conformal", *args, stdout=out, stderr=StringIO())
    return out.getvalue()


def golden(name):
    with open(os.path.join(os.path.dirname(__file__), "json", name), encoding="utf-8") as f:
        return json.load(f)


class TestMassCommand(SimpleTestCase):

    def test_matches_golden_report(self):
        data = json.loads(run("mass", "--spin", "1", "--dim", "4", "--weight=-1", "--format", "json"))
        data.pop("version")
        data.pop("digest")
        self.assertEqual(data, golden("mass_spin1_d4.json"))

    def test_text_output(self):
        output = run("mass", "--spin", "2", "--dim", "4", "--weight=-1")
        self.assertIn("mass/mass-squared", output)
        self.assertIn("partially-massless depth 2", output)

    def test_bad_spin_is_an_input_error(self):
        with self.assertRaises(CommandError) as ctx:
            run("mass", "--spin", "5/2", "--dim", "4")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_bad_convention_for_fermions(self):
        with self.assertRaises(CommandError) as ctx:
            run("mass", "--spin", "1/2", "--dim", "4", "--convention", "single-derivative-gauge-zero")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_unknown_format(self):
        with self.assertRaises(CommandError) as ctx:
            run("mass", "--spin", "0", "--dim", "4", "--format", "yaml")
        self.assertEqual(ctx.exception.returncode, 2)

    @patch("conformal.management.commands.conformal.mass_report")
    def test_internal_error(self, mocked_report):
        mocked_report.side_effect = RuntimeError("boom")
        with self.assertRaises(CommandError) as ctx:
            run("mass", "--spin", "0", "--dim", "4")
        self.assertEqual(ctx.exception.returncode, 3)


class TestGoldenReports(SimpleTestCase):

    def assertMatchesGolden(self, spec, name):
        data = json.loads(run("report", spec, "--format", "json"))
        data.pop("version")
        self.assertEqual(data.pop("digest"), Report.digest_of(load_spec(spec).source))
        self.assertEqual(data, golden(name))

    def test_flat4(self):
        self.assertMatchesGolden("flat4.spec", "report_flat4.json")

    def test_ads4(self):
        self.assertMatchesGolden("ads4.spec", "report_ads4.json")

    def test_sphere_slice(self):
        self.assertMatchesGolden("sphere-slice.spec", "report_sphere_slice.json")

    def test_json_bytes_are_stable(self):
        self.assertEqual(run("report", "ads4.spec", "--format", "json"), run("report", "ads4.spec", "--format", "json"))

    def test_text_and_json_list_the_same_records(self):
        data = json.loads(run("report", "flat3.spec", "--format", "json"))
        text = run("report", "flat3.spec")
        listed = re.findall(r"^\[[a-z-]+\] (\S+)$", text, flags=re.MULTILINE)
        self.assertEqual(listed, [f"{r['suite']}/{r['name']}" for r in data["records"]])
        self.assertEqual(len(listed), 4)


class TestSpecCommands(SimpleTestCase):

    def test_missing_spec_file(self):
        with self.assertRaises(CommandError) as ctx:
            run("report", "no-such-background.spec")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_report_to_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "flat3.json")
            output = run("report", "flat3.spec", "--format", "json", "--out", path)
            self.assertEqual(output.strip(), f"Wrote {path}")
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        self.assertEqual(data["title"], "Geometry")
        self.assertEqual(data["quantities"]["geometry/riemann"], "0")
        self.assertEqual(data["counts"]["fail"], 0)

    def test_verify_runs_in_process(self):
        data = json.loads(run("verify", "flat3.spec", "--suite", "killing", "--format", "json"))
        record, = data["records"]
        self.assertEqual(record["status"], "skipped")

    @patch("conformal.management.commands.conformal.geometry_report")
    def test_failures_exit_with_one(self, mocked_report):
        report = Report(title="Geometry")
        report.add(CheckRecord("geometry", "bianchi-first", "geometry/bianchi", Status.FAIL, "x"))
        mocked_report.return_value = report
        with self.assertRaises(CommandError) as ctx:
            run("report", "flat3.spec")
        self.assertEqual(ctx.exception.returncode, 1)

    @patch("conformal.management.commands.conformal.geometry_report")
    def test_strict_counts_undecided(self, mocked_report):
        report = Report(title="Geometry")
        report.add(CheckRecord("geometry", "bianchi-first", "geometry/bianchi", Status.UNDECIDED, ""))
        mocked_report.return_value = report
        run("report", "flat3.spec")
        with self.assertRaises(CommandError) as ctx:
            run("report", "flat3.spec", "--strict")
        self.assertEqual(ctx.exception.returncode, 1)

    def test_eom(self):
        output = run("eom", "flat3.spec", "--spin", "0", "--weight", "1")
        self.assertIn("eom/scalar", output)
