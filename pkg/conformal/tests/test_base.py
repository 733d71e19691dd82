import sympy as sp
from django.test import SimpleTestCase

from conformal.physics.base import (
    SystemContext,
    proportional,
    solve_linear,
    solve_linear_system,
    substitute,
)
from conformal.tests.factories import AdSFactory, FlatFactory, PatchContextFactory
from conformal.utils import HypothesisError, PoleWeightError, UnsupportedInput


class TestSolvers(SimpleTestCase):

    def setUp(self):
        self.ctx = PatchContextFactory()
        self.t, self.x, self.y = self.ctx.coord_symbols
        self.u = self.ctx.field("u")
        self.v = self.ctx.field("v")

    def test_solve_linear(self):
        self.assertEqual(sp.simplify(solve_linear(2 * self.u - self.x, self.u) - self.x / 2), 0)

    def test_vanishing_coefficient(self):
        with self.assertRaises(PoleWeightError):
            solve_linear(self.x * 0 * self.u + self.x, self.u)

    def test_differentiated_unknown(self):
        with self.assertRaises(UnsupportedInput):
            solve_linear(sp.diff(self.u, self.x) + self.u, self.u)

    def test_system(self):
        solution = solve_linear_system([self.u + self.v - 3, self.u - self.v - 1], [self.u, self.v])
        self.assertEqual(solution, [2, 1])

    def test_singular_system(self):
        with self.assertRaises(PoleWeightError):
            solve_linear_system([self.u + self.v, 2 * self.u + 2 * self.v - 1], [self.u, self.v])

    def test_substitute_inside_derivatives(self):
        value = substitute(sp.diff(self.u, self.x), {self.u: self.x**2})
        self.assertEqual(value, 2 * self.x)

    def test_proportional(self):
        factor, residuals = proportional([2 * self.x, 0, 2 * self.y], [self.x, 0, self.y])
        self.assertEqual(factor, 2)
        self.assertTrue(all(sp.simplify(r) == 0 for r in residuals))

    def test_field_dependent_factor(self):
        factor, residuals = proportional([self.u * self.x], [self.x])
        self.assertEqual(factor, self.u)
        self.assertIn(self.u, residuals)


class TestSystemContext(SimpleTestCase):

    def test_flat_hypothesis(self):
        geo = FlatFactory()
        t, x, y = geo.coords
        SystemContext(geo).require("flat")
        with self.assertRaises(HypothesisError):
            SystemContext(geo, 1 + x).require("flat")
        with self.assertRaises(HypothesisError):
            SystemContext(AdSFactory(d=3)).require("flat")

    def test_constant_curvature_hypothesis(self):
        SystemContext(AdSFactory(d=3)).require("constant-curvature")
        geo = FlatFactory()
        t, x, y = geo.coords
        with self.assertRaises(HypothesisError):
            SystemContext(geo, 1 + t).require("constant-scale")

    def test_calculus_helpers(self):
        geo = FlatFactory()
        t, x, y = geo.coords
        c = SystemContext(geo)
        self.assertEqual(c.box(x**2 * y), 2 * y)
        self.assertEqual(c.dot([1, 0, 0], [1, 0, 0]), -1)
        self.assertEqual(c.divergence([t, x, y]), 1)
        self.assertEqual(sp.simplify(c.frame_divergence([t, x, y]) - 3), 0)
        self.assertEqual(c.frame_grad_up(t * x), [-x, t, 0])
