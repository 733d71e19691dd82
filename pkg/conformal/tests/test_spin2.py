import os
import tempfile

import sympy as sp
from django.test import SimpleTestCase

from conformal.physics.spin2 import (
    TABLE_ROWS,
    Spin2System,
    apply_discrepancies,
    excluded_weights,
    load_discrepancies,
    spin2_mass,
    spin2_system,
)
from conformal.reports import CheckRecord, Report, Status
from conformal.tests.factories import AdSFactory, FlatFactory, RandomDiagonalFactory
from conformal.utils import PoleWeightError


class TestMass(SimpleTestCase):

    def test_partially_massless_in_four_dimensions(self):
        P = sp.Symbol("P")
        self.assertEqual(spin2_mass(4, -1, P), P)
        self.assertEqual(spin2_mass(4, 0, P), 0)

    def test_excluded_weights(self):
        self.assertEqual(excluded_weights(4), [-2, -4, -3])


class TestSpin2System(SimpleTestCase):

    def test_pole_weight(self):
        with self.assertRaises(PoleWeightError):
            Spin2System(FlatFactory(), 1, sp.Rational(-3, 2)).solution

    def test_constraint_is_solved(self):
        system = Spin2System(FlatFactory(), 1, 1)
        report = spin2_system(system.geo, 1, 1, names=["christoffel-trace"], context=system)
        record, = report.records
        self.assertTrue(record.status.passed)
        self.assertEqual(system.V.rank, 2)

    def test_gauge_fixed_drops_top_slots(self):
        system = Spin2System(FlatFactory(), 1, 1, gauge_fixed=True)
        self.assertEqual(system.A, 0)
        self.assertTrue(system.curved_B.is_zero())


class TestSpin2Suite(SimpleTestCase):

    def test_mass_relation(self):
        report = spin2_system(FlatFactory(), names=["mass-relation"])
        record, = report.records
        self.assertTrue(record.status.passed)
        for name in ["spin2/mass-squared", "spin2/bf-bound", "spin2/partially-massless-mass", "spin2/lambda"]:
            self.assertIn(name, report.quantities)

    def test_tables_need_constant_curvature(self):
        row = TABLE_ROWS[0]
        report = spin2_system(RandomDiagonalFactory(), names=[f"table/{row.table}/{row.row}"])
        record, = report.records
        self.assertIs(record.status, Status.SKIPPED)

    def test_tables_on_anti_de_sitter(self):
        names = [f"table/{row.table}/{row.row}" for row in TABLE_ROWS]
        report = spin2_system(AdSFactory(), 1, 1, names=names)
        self.assertEqual(len(report.records), len(TABLE_ROWS))
        self.assertEqual(report.failures(strict=True), [])
        self.assertFalse([r for r in report.records if r.status is Status.SKIPPED])

    def test_scale_contraction_has_one_sign(self):
        record, = spin2_system(AdSFactory(d=3), 1, 1, names=["scale-contraction"]).records
        self.assertTrue(record.status.passed, record)
        self.assertNotIn("holds", record.detail)


class TestDiscrepancies(SimpleTestCase):

    def test_load(self):
        with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as f:
            f.write("# documented rows\n\nspin2/christoffels/+++: sign of the P term  # see notes\n")
        try:
            notes = load_discrepancies(f.name)
        finally:
            os.unlink(f.name)
        self.assertEqual(notes, {"spin2/christoffels/+++": "sign of the P term"})

    def test_missing_file(self):
        self.assertEqual(load_discrepancies("/nonexistent/discrepancies.txt"), {})

    def test_apply(self):
        report = Report()
        report.add(CheckRecord("spin2", "table/christoffels/+++", "spin2/table/christoffels", Status.FAIL, "x"))
        report.add(CheckRecord("spin2", "table/equations/G", "spin2/table/equations", Status.FAIL, "y"))
        apply_discrepancies(report, {"spin2/christoffels/+++": "sign"})
        first, second = report.records
        self.assertIs(first.status, Status.SKIPPED)
        self.assertEqual(first.detail, "documented discrepancy: sign")
        self.assertIs(second.status, Status.FAIL)
