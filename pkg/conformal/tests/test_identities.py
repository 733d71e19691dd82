import sympy as sp
from django.test import SimpleTestCase

from conformal.expr import PatchContext
from conformal.geometry import GeometryCache
from conformal.identities import (
    IDENTITIES,
    SUITE,
    Identity,
    IdentityContext,
    identity_suite,
    run_identity,
)
from conformal.reports import Status
from conformal.tests.factories import AdSFactory, FlatFactory, SphereFactory
from conformal.weyl import WeylFactor


CHEAP = [
    "double-d-definition",
    "x-dot-d",
    "d-dot-x",
    "thomas-d-scale",
    "double-d-scale",
    "projector-decomposition",
    "scale-tractor-norm",
    "metric-parallel",
    "diagonal-basis",
    "curvature-conformally-flat",
]


class TestLedger(SimpleTestCase):

    def test_names_are_unique(self):
        names = [i.name for i in IDENTITIES]
        self.assertEqual(len(names), len(set(names)))
        self.assertTrue(all(i.anchor.startswith("tractor-identities/") for i in IDENTITIES))

    def test_flat_background(self):
        geo = FlatFactory()
        t, x, y = geo.coords
        report = identity_suite(geo, sigma=1 + x, names=CHEAP)
        self.assertEqual(len(report.records), len(CHEAP))
        self.assertEqual(report.failures(strict=True), [])

    def test_sphere_fixed_weight(self):
        geo = SphereFactory()
        report = identity_suite(geo, weight=sp.Rational(-1, 2), names=CHEAP)
        self.assertEqual(report.failures(strict=True), [])

    def test_two_dimensions_are_skipped(self):
        ctx = PatchContext(("x", "y"), (1, 1))
        report = identity_suite(GeometryCache(ctx, sp.eye(2)))
        self.assertEqual([r.status for r in report.records], [Status.SKIPPED])


class TestHypotheses(SimpleTestCase):

    def test_parallel_scale_needs_constant_scale(self):
        geo = FlatFactory()
        t, x, y = geo.coords
        report = identity_suite(geo, sigma=1 + x, names=["parallel-scale"])
        record, = report.records
        self.assertIs(record.status, Status.SKIPPED)

    def test_parallel_scale_on_einstein_background(self):
        report = identity_suite(AdSFactory(), names=["parallel-scale"])
        record, = report.records
        self.assertTrue(record.status.passed)
        self.assertIn("assumes", record.detail)

    def test_scale_commutator_has_one_form(self):
        geo = FlatFactory()
        t, x, y = geo.coords
        report = identity_suite(geo, sigma=1 + x, names=["scale-commutator"])
        record, = report.records
        self.assertTrue(record.status.passed)
        self.assertNotIn("holds", record.detail)

    def test_alternatives_pass_when_one_holds(self):
        geo = FlatFactory()
        t, x, y = geo.coords
        context = IdentityContext(geo)
        identity = Identity("either", f"{SUITE}/either", lambda c: {"plus": x, "minus": x - x})
        record = run_identity(context, identity)
        self.assertTrue(record.status.passed)
        self.assertTrue(record.detail.startswith("holds"))

    def test_alternatives_fail_when_none_holds(self):
        geo = FlatFactory()
        t, x, y = geo.coords
        identity = Identity("neither", f"{SUITE}/neither", lambda c: {"plus": x, "minus": y})
        record = run_identity(IdentityContext(geo), identity)
        self.assertIs(record.status, Status.FAIL)
        self.assertTrue(record.residual)


class TestGaugeCovariance(SimpleTestCase):

    def test_flat_rescaling(self):
        geo = FlatFactory()
        t, x, y = geo.coords
        report = identity_suite(geo, weight=1, names=["metric-parallel"], weyl=WeylFactor(1 + x, geo.ctx))
        self.assertEqual(report.failures(strict=True), [])
        self.assertGreater(len(report.records), 1)
