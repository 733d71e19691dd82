import sympy as sp
from django.test import SimpleTestCase

from conformal.physics.vector import (
    VectorSystem,
    component_equation,
    excluded_weights,
    spin1_residual_gauge,
    spin1_system,
)
from conformal.reports import Status
from conformal.tests.factories import AdSFactory, FlatFactory
from conformal.tractor import PLUS, minus
from conformal.utils import PoleWeightError


class TestResidualGauge(SimpleTestCase):

    def test_cases(self):
        self.assertEqual(spin1_residual_gauge(4, -1)["case"], "residual")
        self.assertEqual(spin1_residual_gauge(4, -2)["case"], "degenerate")
        self.assertEqual(spin1_residual_gauge(4, 0)["case"], "none")
        self.assertEqual(spin1_residual_gauge(4, 0)["factor"], 4)


class TestVectorSystem(SimpleTestCase):

    def test_excluded_weights(self):
        self.assertEqual(excluded_weights(4), [-2, -3])

    def test_pole_weight(self):
        system = VectorSystem(FlatFactory(), 1, sp.Rational(-3, 2))
        with self.assertRaises(PoleWeightError):
            system.bottom

    def test_pole_weight_is_skipped_in_the_suite(self):
        report = spin1_system(FlatFactory(), weight=-2, names=["constraint-solution"])
        record, = report.records
        self.assertIs(record.status, Status.SKIPPED)

    def test_field_strength_is_antisymmetric(self):
        system = VectorSystem(FlatFactory(), 1, 1)
        F = system.F
        self.assertEqual(sp.simplify(F[PLUS, minus(3)] + F[minus(3), PLUS]), 0)
        self.assertEqual(F[PLUS, PLUS], 0)


class TestSpin1Suite(SimpleTestCase):

    def test_anti_de_sitter(self):
        names = ["constraint-solution", "top-current", "residual-gauge-top", "mass-relation"]
        report = spin1_system(AdSFactory(d=3), names=names)
        self.assertEqual(len(report.records), len(names))
        self.assertEqual(report.failures(strict=True), [])

    def test_flat_maxwell_and_gauge(self):
        report = spin1_system(FlatFactory(), names=["maxwell-weight", "gauge-invariance", "proca"])
        self.assertEqual(report.failures(strict=True), [])

    def test_maxwell_reduction_is_skipped_off_four_dimensions(self):
        record, = spin1_system(FlatFactory(d=3), names=["deser-nepomechie-d4"]).records
        self.assertIs(record.status, Status.SKIPPED)
        self.assertIn("d = 4", record.detail)

    def test_quantities(self):
        report = spin1_system(FlatFactory(), names=["mass-relation"])
        for name in ["spin1/mass-squared", "spin1/bf-bound", "spin1/residual-gauge", "spin1/bottom-current"]:
            self.assertIn(name, report.quantities)


class TestComponentEquation(SimpleTestCase):

    def test_shape(self):
        geo = FlatFactory()
        G = component_equation(geo, 1, 0)
        self.assertEqual(G.rank, 1)
        self.assertEqual(G.shape, (5,))
