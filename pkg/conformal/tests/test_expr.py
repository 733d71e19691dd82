import os

import sympy as sp
from django.test import SimpleTestCase

from conformal.expr import (
    PatchContext,
    ZeroStatus,
    normal_form,
    parse,
    simplify,
    to_display,
    to_text,
    worst,
    zero_test,
)
from conformal.tests.factories import PatchContextFactory
from conformal.utils import ExpressionError, UnknownIdentifierError, UnsupportedInput


class TestPatchContext(SimpleTestCase):

    def test_coordinates_are_positive(self):
        ctx = PatchContextFactory()
        self.assertTrue(all(x.is_positive for x in ctx.coord_symbols))
        self.assertEqual(ctx.dimension, 3)
        self.assertTrue(ctx.is_lorentzian)

    def test_params_are_real(self):
        ctx = PatchContextFactory()
        self.assertTrue(ctx.param("w").is_real)
        self.assertIs(ctx.param("w"), ctx.param("w"))

    def test_param_clash(self):
        ctx = PatchContextFactory()
        with self.assertRaises(UnsupportedInput):
            ctx.add_param("x")

    def test_duplicate_coordinates(self):
        with self.assertRaises(UnsupportedInput):
            PatchContext(("x", "x"))

    def test_dimension_range(self):
        with self.assertRaises(UnsupportedInput):
            PatchContext(("x",))
        with self.assertRaises(UnsupportedInput):
            PatchContext([f"x{i}" for i in range(9)])

    def test_reserved_names(self):
        with self.assertRaises(UnsupportedInput):
            PatchContext(("exp", "y"))

    def test_fields_depend_on_all_coordinates(self):
        ctx = PatchContextFactory()
        phi = ctx.field("phi")
        self.assertEqual(phi.args, ctx.coord_symbols)
        self.assertEqual(ctx.resolve("phi"), phi)


class TestParse(SimpleTestCase):

    def setUp(self):
        self.ctx = PatchContextFactory()
        self.t, self.x, self.y = self.ctx.coord_symbols

    def test_arithmetic(self):
        self.assertEqual(parse("1 + 2*x - y/3", self.ctx), 1 + 2 * self.x - self.y / 3)

    def test_power_binds_tighter_than_unary_minus(self):
        self.assertEqual(parse("-x^2", self.ctx), -self.x**2)

    def test_rational_exponent(self):
        self.assertEqual(parse("x^(1/2)", self.ctx), sp.sqrt(self.x))
        self.assertEqual(parse("x^(-3/2)", self.ctx), self.x**sp.Rational(-3, 2))

    def test_functions(self):
        self.assertEqual(parse("exp(t)*sin(x)", self.ctx), sp.exp(self.t) * sp.sin(self.x))

    def test_imaginary_unit(self):
        self.assertEqual(parse("I^2", self.ctx), -1)

    def test_unknown_identifier(self):
        with self.assertRaises(UnknownIdentifierError) as cm:
            parse("x + q", self.ctx)
        self.assertEqual(cm.exception.line, 1)
        self.assertEqual(cm.exception.column, 5)

    def test_error_location_on_later_line(self):
        with self.assertRaises(ExpressionError) as cm:
            parse("x +\n  )", self.ctx)
        self.assertEqual(cm.exception.line, 2)
        self.assertEqual(cm.exception.column, 3)

    def test_division_by_literal_zero(self):
        with self.assertRaises(ExpressionError):
            parse("x/0", self.ctx)

    def test_non_integer_exponent_needs_parentheses(self):
        with self.assertRaises(ExpressionError):
            parse("x^y", self.ctx)


class TestPrint(SimpleTestCase):

    def setUp(self):
        self.ctx = PatchContextFactory()
        self.t, self.x, self.y = self.ctx.coord_symbols

    def test_reparses(self):
        for text in ["x^2 - 3*y/4", "exp(t)*cos(x) + 1", "(1 + x)^(-1/2)", "-t*x^3"]:
            e = parse(text, self.ctx)
            self.assertEqual(simplify(parse(to_text(e), self.ctx) - e), 0)

    def test_rational_coefficients(self):
        self.assertEqual(to_text(self.x / 2), "x/2")
        self.assertEqual(to_text(-3 * self.x / 2), "-3*x/2")

    def test_symbolic_exponent(self):
        w = self.ctx.param("w")
        self.assertEqual(to_text(self.x**w), "exp((w)*log(x))")

    def test_derivatives_have_no_text_form(self):
        phi = self.ctx.field("phi")
        with self.assertRaises(ExpressionError):
            to_text(sp.diff(phi, self.x))
        self.assertIn("Derivative", to_display(sp.diff(phi, self.x)))


class TestPrintFixpoint(SimpleTestCase):

    corpus = os.path.join(os.path.dirname(__file__), "expressions.txt")

    def setUp(self):
        self.ctx = PatchContextFactory()
        self.ctx.add_param("w")
        self.ctx.add_param("m")

    def test_corpus_prints_to_a_fixpoint(self):
        with open(self.corpus) as fh:
            lines = [line.strip() for line in fh if line.strip() and not line.startswith("#")]
        self.assertGreaterEqual(len(lines), 100)
        for line in lines:
            with self.subTest(line=line):
                text = to_text(parse(line, self.ctx))
                self.assertEqual(to_text(parse(text, self.ctx)), text)


class TestZeroTest(SimpleTestCase):

    def setUp(self):
        self.ctx = PatchContextFactory()
        self.t, self.x, self.y = self.ctx.coord_symbols

    def test_exact(self):
        self.assertIs(zero_test((self.x + 1)**2 - self.x**2 - 2 * self.x - 1), ZeroStatus.EXACT)

    def test_trigonometric(self):
        self.assertIs(zero_test(sp.sin(self.x)**2 + sp.cos(self.x)**2 - 1), ZeroStatus.EXACT)
        self.assertIs(zero_test(sp.cosh(self.x)**2 - sp.sinh(self.x)**2 - 1), ZeroStatus.EXACT)
        self.assertEqual(normal_form(self.x * (self.x + 1) - self.x**2), self.x)

    def test_nonzero(self):
        self.assertIs(zero_test(self.x - self.y), ZeroStatus.NONZERO)

    def test_weighted_powers_share_generator(self):
        w = self.ctx.param("w")
        self.assertIs(zero_test(self.x**(w - 1) * self.x - self.x**w), ZeroStatus.EXACT)

    def test_generic_fields_are_independent(self):
        phi = self.ctx.field("phi")
        self.assertIs(zero_test(sp.diff(phi, self.x) - sp.diff(phi, self.y)), ZeroStatus.NONZERO)

    def test_worst(self):
        self.assertIs(worst([ZeroStatus.EXACT, ZeroStatus.PROBABILISTIC]), ZeroStatus.PROBABILISTIC)
        self.assertIs(worst([ZeroStatus.UNDECIDED, ZeroStatus.NONZERO]), ZeroStatus.NONZERO)
        self.assertIs(worst([]), ZeroStatus.EXACT)
