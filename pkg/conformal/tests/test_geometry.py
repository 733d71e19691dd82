import sympy as sp
from django.test import SimpleTestCase

from conformal.backgrounds import (
    coordinate_names,
    de_sitter,
    get_background,
    product_ds2_s2,
    random_weyl_factor,
)
from conformal.expr import PatchContext, simplify
from conformal.geometry import (
    GeometryCache,
    bianchi_residuals,
    is_conformally_flat,
    is_einstein,
    riemann_pair_symmetry,
    weyl_trace,
)
from conformal.tests.factories import AdSFactory, FlatFactory, RandomDiagonalFactory, SphereFactory
from conformal.utils import GeometryUnavailable, UnsupportedInput


class TestConstruction(SimpleTestCase):

    def test_non_symmetric_metric(self):
        ctx = PatchContext(("x", "y"), (1, 1))
        x, y = ctx.coord_symbols
        with self.assertRaises(UnsupportedInput):
            GeometryCache(ctx, sp.Matrix([[1, x], [0, 1]]))

    def test_degenerate_metric(self):
        ctx = PatchContext(("x", "y"), (1, 1))
        with self.assertRaises(GeometryUnavailable):
            GeometryCache(ctx, sp.Matrix([[1, 1], [1, 1]]))

    def test_wrong_shape(self):
        ctx = PatchContext(("x", "y", "z"), (1, 1, 1))
        with self.assertRaises(UnsupportedInput):
            GeometryCache(ctx, sp.eye(2))

    def test_off_diagonal_needs_vielbein(self):
        ctx = PatchContext(("x", "y"), (1, 1))
        x, y = ctx.coord_symbols
        geo = GeometryCache(ctx, sp.Matrix([[2, 1], [1, 2]]))
        with self.assertRaises(UnsupportedInput):
            geo.vielbein

    def test_wrong_vielbein(self):
        ctx = PatchContext(("x", "y"), (1, 1))
        geo = GeometryCache(ctx, sp.eye(2) * 4, vielbein=sp.eye(2))
        with self.assertRaises(UnsupportedInput):
            geo.vielbein

    def test_two_dimensions_have_no_schouten(self):
        ctx = PatchContext(("x", "y"), (1, 1))
        geo = GeometryCache(ctx, sp.eye(2))
        self.assertEqual(geo.scalar_curvature, 0)
        with self.assertRaises(GeometryUnavailable):
            geo.schouten


class TestCurvature(SimpleTestCase):

    def test_flat(self):
        geo = FlatFactory(d=4)
        self.assertTrue(geo.riemann.is_zero())
        self.assertEqual(geo.scalar_curvature, 0)
        self.assertEqual(geo.schouten_trace, 0)

    def test_anti_de_sitter(self):
        geo = AdSFactory()
        self.assertEqual(simplify(geo.scalar_curvature + 12), 0)
        self.assertEqual(simplify(geo.schouten_trace + 2), 0)
        for a in range(4):
            for b in range(4):
                self.assertEqual(simplify(geo.schouten[a, b] + geo.metric[a, b] / 2), 0)
        self.assertTrue(is_einstein(geo))
        self.assertTrue(is_conformally_flat(geo))
        self.assertTrue(geo.is_constant_curvature)

    def test_de_sitter(self):
        geo = de_sitter(3)
        self.assertEqual(simplify(geo.schouten_trace - sp.Rational(3, 2)), 0)

    def test_sphere(self):
        geo = SphereFactory(radius=2)
        self.assertEqual(simplify(geo.scalar_curvature - sp.Rational(6, 4)), 0)
        self.assertTrue(is_conformally_flat(geo))
        self.assertTrue(geo.cotton.is_zero())

    def test_product_is_not_einstein(self):
        geo = product_ds2_s2()
        self.assertFalse(is_einstein(geo))
        self.assertFalse(geo.is_constant_curvature)

    def test_bianchi_identities(self):
        geo = SphereFactory()
        first, second = bianchi_residuals(geo)
        self.assertTrue(first.is_zero())
        self.assertTrue(second.is_zero())

    def test_riemann_symmetries(self):
        geo = RandomDiagonalFactory()
        self.assertTrue(riemann_pair_symmetry(geo).is_zero())
        self.assertTrue(weyl_trace(geo).is_zero())

    def test_weyl_trace_detects_a_wrong_schouten(self):
        geo = AdSFactory(d=3)
        geo.__dict__["_memo_schouten"] = geo.schouten * 2
        self.assertFalse(weyl_trace(geo).is_zero())

    def test_three_dimensional_weyl_vanishes(self):
        geo = RandomDiagonalFactory()
        self.assertTrue(geo.weyl.is_zero())


class TestFrames(SimpleTestCase):

    def test_torsion_free(self):
        geo = RandomDiagonalFactory()
        self.assertTrue(geo.torsion().is_zero())

    def test_spin_connection_is_antisymmetric(self):
        geo = SphereFactory()
        for omega in geo.spin_connection_lowered:
            self.assertTrue(all(simplify(v) == 0 for v in (omega + omega.T)))

    def test_frame_round_trip(self):
        geo = AdSFactory()
        covector = list(geo.coords)
        frame = geo.frame_up(covector)
        back = geo.curved_down(frame)
        self.assertTrue(all(simplify(a - b) == 0 for a, b in zip(back, covector)))


class TestBackgrounds(SimpleTestCase):

    def test_coordinate_names(self):
        self.assertEqual(coordinate_names(4), ["t", "x1", "x2", "x3"])
        self.assertEqual(coordinate_names(4, last="z"), ["t", "x", "y", "z"])
        self.assertEqual(coordinate_names(3), ["t", "x", "y"])

    def test_unknown_background(self):
        with self.assertRaises(UnsupportedInput):
            get_background("torus", 3)

    def test_weyl_factor_is_reproducible(self):
        ctx = PatchContext(("t", "x", "y"))
        self.assertEqual(random_weyl_factor(ctx, seed=3), random_weyl_factor(ctx, seed=3))
