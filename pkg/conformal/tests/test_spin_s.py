from django.test import SimpleTestCase

from conformal.physics.spin_s import (
    CONJECTURE_ENTRY,
    FORMULA_ENTRIES,
    SpinSSystem,
    spin_s_onshell,
)
from conformal.reports import Status
from conformal.tests.factories import AdSFactory, FlatFactory, RandomDiagonalFactory
from conformal.utils import UnsupportedInput


class TestSpinSSystem(SimpleTestCase):

    def test_rank_must_be_positive(self):
        with self.assertRaises(UnsupportedInput):
            SpinSSystem(FlatFactory(), 0)

    def test_field_lives_in_the_middle_slots(self):
        system = SpinSSystem(FlatFactory(), 2, 1, 0)
        V = system.V
        self.assertEqual(V.rank, 2)
        self.assertEqual(V[0, 0], 0)
        self.assertEqual(V[1, 2], V[2, 1])
        self.assertNotEqual(V[1, 2], 0)


class TestSpinSSuite(SimpleTestCase):

    def test_formulas(self):
        names = [e.name for e in FORMULA_ENTRIES]
        report = spin_s_onshell(FlatFactory(), ranks=(), names=names)
        self.assertEqual(len(report.records), len(names))
        self.assertEqual(report.failures(strict=True), [])

    def test_rank_one_components(self):
        names = ["tractor-divergence/rank-1", "top-current/rank-1", "wave-equation/rank-1", "eigenvalue/rank-1"]
        report = spin_s_onshell(AdSFactory(d=3), ranks=(1,), names=names)
        self.assertEqual(len(report.records), 4)
        self.assertEqual(report.failures(strict=True), [])

    def test_components_need_constant_curvature(self):
        report = spin_s_onshell(RandomDiagonalFactory(), ranks=(1,), names=["wave-equation/rank-1"])
        record, = report.records
        self.assertIs(record.status, Status.SKIPPED)

    def test_conjecture_is_labelled(self):
        report = spin_s_onshell(RandomDiagonalFactory(), ranks=(3,), names=[CONJECTURE_ENTRY.name])
        record, = report.records
        self.assertTrue(record.detail.startswith("conjecture-grade"))

    def test_quantities(self):
        report = spin_s_onshell(FlatFactory(), ranks=(), names=["bounds"])
        self.assertIn("spin-s/laplacian-mass", report.quantities)
        self.assertIn("spin-s/depth-mass", report.quantities)
