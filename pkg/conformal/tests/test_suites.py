import sympy as sp
from django.test import SimpleTestCase

from conformal.reports import Report, Status
from conformal.specfile import parse_spec
from conformal.suites import (
    SUITES,
    eom_report,
    geometry_report,
    mass_report,
    parse_dimension,
    parse_schouten,
    parse_weight,
    run_suites,
)
from conformal.tests.factories import ADS3_SPEC, FLAT4_SPEC
from conformal.utils import UnsupportedInput


FLAT3_SPEC = """\
dimension = 3
coordinates = t, x, y
signature = -1, 1, 1

[metric]
g[t,t] = -1
g[x,x] = 1
g[y,y] = 1
"""


class TestArguments(SimpleTestCase):

    def test_parse_weight(self):
        self.assertIsNone(parse_weight(None))
        self.assertIsNone(parse_weight("symbolic"))
        self.assertEqual(parse_weight("-3/2"), sp.Rational(-3, 2))
        self.assertEqual(parse_weight(1), 1)
        with self.assertRaises(UnsupportedInput):
            parse_weight("heavy")

    def test_parse_dimension(self):
        self.assertEqual(parse_dimension("4"), 4)
        self.assertEqual(parse_dimension("d"), sp.Symbol("d"))
        for value in ["2", "four"]:
            with self.subTest(value=value):
                with self.assertRaises(UnsupportedInput):
                    parse_dimension(value)

    def test_parse_schouten(self):
        self.assertEqual(parse_schouten("-2*Lambda/3"), -2 * sp.Symbol("Lambda", real=True) / 3)
        self.assertEqual(parse_schouten("-d/2"), -sp.Symbol("d", real=True) / 2)


class TestRunSuites(SimpleTestCase):

    def test_registry(self):
        for name in ["compendium", "tractor-identities", "spinor-identities", "symtensor-algebra", "spin0",
                     "spin1", "spin2", "spin-s", "dirac", "rs", "killing"]:
            self.assertIn(name, SUITES)

    def test_unknown_suite(self):
        bundle = parse_spec(FLAT3_SPEC).build()
        with self.assertRaises(UnsupportedInput):
            run_suites(bundle, ["spin7"])

    def test_killing_needs_a_candidate(self):
        bundle = parse_spec(FLAT3_SPEC).build()
        report = run_suites(bundle, ["killing"])
        record, = report.records
        self.assertIs(record.status, Status.SKIPPED)
        self.assertEqual(report.digest, Report.digest_of(FLAT3_SPEC))


class TestGeometryReport(SimpleTestCase):

    def test_ads3(self):
        report = geometry_report(parse_spec(ADS3_SPEC).build())
        self.assertEqual(report.quantities["geometry/scalar-curvature"], "-6")
        self.assertEqual(report.quantities["geometry/einstein"], "true")
        self.assertEqual(report.quantities["geometry/conformally-flat"], "true")
        self.assertEqual(report.quantities["geometry/weyl"], "0")
        self.assertEqual(report.exit_code(), 0)
        self.assertEqual([r.name for r in report.records],
                         ["bianchi-first", "bianchi-second", "riemann-pair-symmetry", "weyl-traceless"])

    def test_flat4(self):
        report = geometry_report(parse_spec(FLAT4_SPEC).build())
        self.assertEqual(report.quantities["geometry/christoffel"], "0")
        self.assertEqual(report.quantities["geometry/riemann"], "0")
        self.assertEqual(report.quantities["geometry/schouten"], "0")

    def test_two_dimensions(self):
        bundle = parse_spec("dimension = 2\ncoordinates = x, y\n[metric]\ng[x,x] = 1\ng[y,y] = 1\n").build()
        report = geometry_report(bundle)
        self.assertIs(report.records[-1].status, Status.SKIPPED)
        self.assertNotIn("geometry/schouten", report.quantities)


class TestMassReport(SimpleTestCase):

    def test_partially_massless_graviton(self):
        report = mass_report("2", "4", "-1")
        self.assertEqual(report.quantities["mass/mass-squared"], "P")
        self.assertEqual(report.quantities["mass/convention"], "standard")
        self.assertIn("partially-massless depth 2", report.quantities["mass/classification"])
        self.assertNotIn("mass/linear-mass", report.quantities)

    def test_fermion(self):
        report = mass_report("1/2", "4")
        self.assertIn("mass/linear-mass", report.quantities)
        self.assertEqual(report.quantities["mass/classification"], "generic")

    def test_digest_follows_arguments(self):
        first = mass_report("0", "4", argv=["mass", "--spin", "0"])
        second = mass_report("0", "4", argv=["mass", "--spin", "0"])
        self.assertEqual(first.digest, second.digest)
        self.assertEqual(first.digest, Report.digest_of("mass --spin 0"))


class TestEomReport(SimpleTestCase):

    def test_scalar(self):
        report = eom_report(parse_spec(FLAT3_SPEC).build(), "0", "1")
        self.assertEqual(list(report.quantities), ["eom/scalar"])

    def test_higher_spin(self):
        with self.assertRaises(UnsupportedInput):
            eom_report(parse_spec(FLAT3_SPEC).build(), "3")
