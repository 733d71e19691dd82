from django.test import SimpleTestCase

from conformal.expr import simplify
from conformal.symalg import (
    COMMUTATORS,
    SymAlgebraState,
    apply_word,
    commutator_residual,
    generic_symmetric,
    sym_ops,
    verify_algebra,
)
from conformal.tests.factories import FlatFactory, RandomDiagonalFactory, SphereFactory
from conformal.utils import HypothesisError, UnsupportedInput


class TestState(SimpleTestCase):

    def setUp(self):
        self.geo = SphereFactory()

    def test_background_check(self):
        geo = RandomDiagonalFactory()
        with self.assertRaises(HypothesisError):
            SymAlgebraState(geo, generic_symmetric(geo, 1))

    def test_rank_changes(self):
        state = SymAlgebraState(self.geo, generic_symmetric(self.geo, 1))
        self.assertEqual(sym_ops(state, "g").rank, 3)
        self.assertEqual(sym_ops(state, "tr").rank, -1)
        self.assertTrue(sym_ops(state, "tr").is_null)
        self.assertEqual(sym_ops(state, "grad").rank, 2)
        self.assertEqual(sym_ops(state, "div").rank, 0)

    def test_number_operator(self):
        state = SymAlgebraState(self.geo, generic_symmetric(self.geo, 2))
        self.assertEqual(sym_ops(state, "N").residual(), (state * 2).residual())

    def test_word_order(self):
        state = SymAlgebraState(self.geo, generic_symmetric(self.geo, 0))
        self.assertEqual(apply_word(state, ["div", "grad"]).rank, 0)

    def test_unknown_operator(self):
        state = SymAlgebraState(self.geo, generic_symmetric(self.geo, 0))
        with self.assertRaises(UnsupportedInput):
            sym_ops(state, "curl")
        with self.assertRaises(UnsupportedInput):
            commutator_residual(state, "curl-div")

    def test_rank_mismatch(self):
        a = SymAlgebraState(self.geo, generic_symmetric(self.geo, 0))
        b = SymAlgebraState(self.geo, generic_symmetric(self.geo, 1))
        with self.assertRaises(UnsupportedInput):
            a + b


class TestCommutators(SimpleTestCase):

    def test_flat_rank_one(self):
        geo = FlatFactory()
        report = verify_algebra(geo, ranks=(1,))
        self.assertEqual(len(report.records), len(COMMUTATORS))
        self.assertEqual(report.failures(strict=True), [])

    def test_sphere_div_grad(self):
        geo = SphereFactory()
        state = SymAlgebraState(geo, generic_symmetric(geo, 1))
        residual = commutator_residual(state, "div-grad")
        self.assertTrue(all(simplify(v) == 0 for v in residual.residual()))

    def test_non_constant_curvature_is_skipped(self):
        report = verify_algebra(RandomDiagonalFactory())
        self.assertEqual([r.status.value for r in report.records], ["skipped"])
