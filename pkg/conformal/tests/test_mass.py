import sympy as sp
from django.test import SimpleTestCase

from conformal.physics.mass import (
    HALF,
    THREE_HALVES,
    Convention,
    MassWeightQuery,
    P,
    bf_bound,
    bf_saturating_weight,
    classify_weight,
    convention_shift,
    convert_mass,
    cosmological_constant,
    depth_mass,
    depth_of_weight,
    depth_offset,
    linear_mass,
    mass_from_weight,
    parse_spin,
    residual_gauge_weights,
    satisfies_bound,
    schouten_from_lambda,
)
from conformal.utils import ConventionError, UnsupportedInput


d, w = sp.symbols("d w")


def mass(spin, dim, weight, convention=Convention.STANDARD, schouten=None):
    return mass_from_weight(MassWeightQuery.build(spin, dim, weight, schouten, convention))


class TestParseSpin(SimpleTestCase):

    def test_values(self):
        self.assertEqual(parse_spin("3/2"), THREE_HALVES)
        self.assertEqual(parse_spin(2), 2)
        self.assertEqual(parse_spin("1/2"), HALF)

    def test_rejected(self):
        for spin in ["5/2", "-1", "spin", "1/3"]:
            with self.assertRaises(UnsupportedInput, msg=spin):
                parse_spin(spin)


class TestIntegerSpins(SimpleTestCase):

    def test_scalar(self):
        self.assertEqual(sp.simplify(mass(0, d, w) + 2 * P / d * w * (w + d - 1)), 0)

    def test_scalar_has_no_gauge_zero_form(self):
        with self.assertRaises(ConventionError):
            mass(0, d, w, Convention.GAUGE_ZERO)

    def test_pauli_fierz(self):
        self.assertEqual(mass(2, 4, -1), P)
        self.assertEqual(mass(2, d, 0), 0)

    def test_proca_massless_at_maxwell_weight(self):
        self.assertEqual(mass(1, 4, -1), 0)

    def test_standard_is_gauge_zero_for_positive_spin(self):
        self.assertEqual(mass(3, d, w), mass(3, d, w, Convention.GAUGE_ZERO))

    def test_bound_is_extremal(self):
        bound = bf_bound(0, d)
        self.assertEqual(sp.simplify(bound - P * (d - 1)**2 / (2 * d)), 0)
        derivative = sp.diff(mass(0, d, w), w).subs(w, bf_saturating_weight(0, d))
        self.assertEqual(sp.simplify(derivative), 0)

    def test_convention_shift_is_weight_independent(self):
        shift = convention_shift(2, d)
        laplacian = mass(2, d, w, Convention.LAPLACIAN)
        self.assertEqual(sp.simplify(laplacian - mass(2, d, w) - shift), 0)
        self.assertFalse(shift.has(w))
        self.assertEqual(convention_shift(0, d), 0)

    def test_convert_mass(self):
        converted = convert_mass(mass(2, d, w), 2, d, Convention.STANDARD, Convention.LAPLACIAN)
        self.assertEqual(sp.simplify(converted - mass(2, d, w, Convention.LAPLACIAN)), 0)
        back = convert_mass(converted, 2, d, Convention.LAPLACIAN, Convention.GAUGE_ZERO)
        self.assertEqual(sp.simplify(back - mass(2, d, w)), 0)
        with self.assertRaises(ConventionError):
            convert_mass(P, 0, d, Convention.GAUGE_ZERO, Convention.LAPLACIAN)


class TestFermions(SimpleTestCase):

    def test_linear_mass_vanishes_at_conformal_weight(self):
        self.assertEqual(linear_mass(4, -2), 0)
        self.assertEqual(sp.simplify(linear_mass(d, w)**2 - mass(HALF, d, w)), 0)

    def test_rarita_schwinger_laplacian(self):
        expected = -P / (2 * d) * (d + 2 * w)**2 + P * (d * (d - 1) + 4) / (2 * d)
        self.assertEqual(sp.simplify(mass(THREE_HALVES, d, w, Convention.LAPLACIAN) - expected), 0)

    def test_dirac_laplacian(self):
        expected = -P / (2 * d) * (d + 2 * w)**2 + P * (d - 1) / 2
        self.assertEqual(sp.simplify(mass(HALF, d, w, Convention.LAPLACIAN) - expected), 0)

    def test_no_gauge_zero_form(self):
        with self.assertRaises(ConventionError):
            mass(HALF, d, w, Convention.GAUGE_ZERO)

    def test_bound(self):
        self.assertEqual(bf_bound(THREE_HALVES, 4), 0)
        self.assertEqual(sp.simplify(bf_bound(THREE_HALVES, d, convention=Convention.LAPLACIAN)
                                     - P * (d * (d - 1) + 4) / (2 * d)), 0)


class TestGaugeLadder(SimpleTestCase):

    def test_residual_weights(self):
        self.assertEqual(residual_gauge_weights(3), [1, 0, -1])

    def test_depth_of_weight(self):
        self.assertEqual(depth_of_weight(2, 0), 1)
        self.assertEqual(depth_of_weight(2, -1), 2)
        self.assertIsNone(depth_of_weight(2, 1))
        self.assertIsNone(depth_of_weight(2, sp.Rational(1, 2)))

    def test_depth_offset(self):
        for s in (1, 2, 3):
            self.assertEqual(sp.simplify(depth_offset(s, d) - 4 * P * s / d), 0)

    def test_depth_mass(self):
        self.assertEqual(depth_mass(2, 4, 1), -P)
        self.assertEqual(depth_mass(2, 4, 2), 0)


class TestClassification(SimpleTestCase):

    def test_maxwell(self):
        self.assertEqual(classify_weight(1, 4, -1), ["massless", "maxwell", "conformal"])

    def test_partially_massless(self):
        self.assertIn("partially-massless depth 2", classify_weight(2, 4, -1))

    def test_massless_gravitino(self):
        self.assertIn("massless", classify_weight(THREE_HALVES, 4, -1))

    def test_degenerate(self):
        self.assertIn("degenerate", classify_weight(0, 4, -2))
        self.assertIn("degenerate", classify_weight(1, 4, -3))

    def test_generic(self):
        self.assertEqual(classify_weight(0, 4, sp.Rational(1, 3)), [])


class TestCosmologicalConstant(SimpleTestCase):

    def test_four_dimensions(self):
        Lambda = sp.Symbol("Lambda")
        self.assertEqual(sp.simplify(schouten_from_lambda(Lambda, 4) + 2 * Lambda / 3), 0)
        self.assertEqual(sp.simplify(cosmological_constant(schouten_from_lambda(Lambda, d), d) - Lambda), 0)

    def test_satisfies_bound(self):
        stable = MassWeightQuery.build(0, 4, 0, -2)
        self.assertTrue(satisfies_bound(stable))
        with self.assertRaises(UnsupportedInput):
            satisfies_bound(MassWeightQuery.build(0, 4, 0))
