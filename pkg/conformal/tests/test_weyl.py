import sympy as sp
from django.test import SimpleTestCase

from conformal.expr import simplify
from conformal.reports import Status
from conformal.tensor import IndexKind, TensorField, up
from conformal.tests.factories import FlatFactory, SphereFactory
from conformal.utils import TransformationRuleError, UnsupportedInput
from conformal.weyl import (
    ScaleField,
    WeylFactor,
    composition_residuals,
    rescale,
    transform_field,
    transformed_schouten,
    transformed_volume,
    verify_compendium,
    volume_density,
)


class TestWeylFactor(SimpleTestCase):

    def setUp(self):
        self.geo = FlatFactory()
        self.t, self.x, self.y = self.geo.coords

    def test_vanishing_factor(self):
        with self.assertRaises(UnsupportedInput):
            WeylFactor(self.x - self.x, self.geo.ctx)

    def test_upsilon(self):
        weyl = WeylFactor(1 + self.x, self.geo.ctx)
        self.assertEqual(weyl.upsilon, [0, 1 / (1 + self.x), 0])
        self.assertTrue(weyl.is_exact())

    def test_product(self):
        product = WeylFactor(self.x, self.geo.ctx) * WeylFactor(self.y, self.geo.ctx)
        self.assertEqual(product.omega, self.x * self.y)

    def test_scale_field(self):
        scale = ScaleField(1 + self.t, self.geo.ctx)
        self.assertFalse(scale.is_constant)
        self.assertTrue(ScaleField(3, self.geo.ctx).is_constant)
        moved = scale.transformed(WeylFactor(self.x, self.geo.ctx))
        self.assertEqual(moved.sigma, self.x * (1 + self.t))
        with self.assertRaises(UnsupportedInput):
            ScaleField(0, self.geo.ctx)


class TestRescale(SimpleTestCase):

    def setUp(self):
        self.geo = FlatFactory()
        self.t, self.x, self.y = self.geo.coords
        self.weyl = WeylFactor(1 + self.x + self.y, self.geo.ctx)

    def test_volume(self):
        new = rescale(self.geo, self.weyl)
        self.assertEqual(volume_density(self.geo), 1)
        self.assertEqual(simplify(volume_density(new) - transformed_volume(self.geo, self.weyl)), 0)

    def test_schouten_rule(self):
        new = rescale(self.geo, self.weyl)
        residual = (new.schouten - transformed_schouten(self.geo, self.weyl)).applyfunc(simplify)
        self.assertTrue(all(v == 0 for v in residual))

    def test_composition(self):
        second = WeylFactor(1 + self.t, self.geo.ctx)
        residuals = composition_residuals(self.geo, self.weyl, second)
        self.assertTrue(all(simplify(r) == 0 for r in residuals))

    def test_plain_fields_pick_up_the_weight(self):
        v = TensorField((up(IndexKind.CURVED),), 3, {0: self.x}, weight=2)
        moved = transform_field(v, self.weyl)
        self.assertEqual(simplify(moved[0] - (1 + self.x + self.y)**2 * self.x), 0)

    def test_unknown_rule(self):
        v = TensorField((up(IndexKind.CURVED),), 3, weight=1)
        with self.assertRaises(TransformationRuleError):
            transform_field(v, self.weyl, self.geo, rule="hessian", source=[0, 0, 0])

    def test_rule_needs_source(self):
        v = TensorField((up(IndexKind.CURVED),), 3, weight=1)
        with self.assertRaises(UnsupportedInput):
            transform_field(v, self.weyl, rule="scalar-gradient")


class TestCompendium(SimpleTestCase):

    def test_flat(self):
        geo = FlatFactory()
        t, x, y = geo.coords
        report = verify_compendium(geo, WeylFactor(1 + x, geo.ctx), weight=1)
        self.assertEqual(report.failures(strict=True), [])
        names = {r.name for r in report.records}
        self.assertIn("schouten", names)
        self.assertIn("composition", names)

    def test_sphere_symbolic_weight(self):
        geo = SphereFactory()
        x, y, z = geo.coords
        report = verify_compendium(geo, WeylFactor(1 + z, geo.ctx))
        self.assertEqual(report.failures(), [])
        self.assertTrue(any(r.status is Status.EXACT_PASS for r in report.records))
