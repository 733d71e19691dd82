from django.test import SimpleTestCase

from conformal.expr import simplify
from conformal.physics.base import SystemContext
from conformal.physics.scalar import ENTRIES, component_equation, scalar_eom, scalar_suite
from conformal.reports import Status
from conformal.tests.factories import AdSFactory, FlatFactory


class TestScalarSuite(SimpleTestCase):

    def test_flat(self):
        report = scalar_suite(FlatFactory(), names=["flat-wave", "mass-relation", "yamabe"])
        self.assertEqual(len(report.records), 3)
        self.assertEqual(report.failures(strict=True), [])

    def test_anti_de_sitter(self):
        report = scalar_suite(AdSFactory(d=3), names=["constant-scale", "background-mass"])
        self.assertEqual(report.failures(strict=True), [])
        self.assertTrue(all(r.status.passed for r in report.records))

    def test_arbitrary_scale(self):
        geo = FlatFactory()
        t, x, y = geo.coords
        report = scalar_suite(geo, sigma=1 + x, names=["arbitrary-scale", "constant-scale", "flat-wave"])
        statuses = {r.name: r.status for r in report.records}
        self.assertTrue(statuses["arbitrary-scale"].passed)
        self.assertIs(statuses["constant-scale"], Status.SKIPPED)
        self.assertIs(statuses["flat-wave"], Status.SKIPPED)

    def test_quantities(self):
        report = scalar_suite(FlatFactory(), names=["mass-relation"])
        self.assertIn("spin0/mass-squared", report.quantities)
        self.assertIn("spin0/bf-bound", report.quantities)

    def test_entries_have_anchors(self):
        self.assertTrue(all(e.anchor.startswith("spin0/") for e in ENTRIES))


class TestComponentEquation(SimpleTestCase):

    def test_flat_unit_scale_is_the_wave_operator(self):
        geo = FlatFactory()
        w = geo.ctx.param("w")
        equation = component_equation(geo, 1, w)
        self.assertEqual(equation.weight, w - 1)
        phi = geo.ctx.field("phi")
        box = SystemContext(geo).box(phi)
        self.assertEqual(simplify(equation.as_scalar() + box), 0)

    def test_scalar_eom_fixed_weight(self):
        geo = AdSFactory(d=3)
        phi = geo.ctx.field("phi")
        c = SystemContext(geo, 1, 0)
        # weight zero: -sigma Delta phi, no mass term
        self.assertEqual(simplify(scalar_eom(geo, 1, 0) + c.box(phi)), 0)
