import sympy as sp
from django.test import SimpleTestCase

from conformal.expr import simplify
from conformal.tensor import (
    IndexKind,
    Symmetry,
    TensorField,
    contract,
    covariant_derivative,
    down,
    laplacian,
    lower_index,
    permute,
    raise_index,
    symmetrize,
    tensor_product,
    up,
)
from conformal.tests.factories import FlatFactory, SphereFactory
from conformal.utils import UnsupportedInput


CURVED_UP = up(IndexKind.CURVED)
CURVED_DOWN = down(IndexKind.CURVED)


class TestIndexKind(SimpleTestCase):

    def test_sizes(self):
        self.assertEqual(IndexKind.CURVED.size(4), 4)
        self.assertEqual(IndexKind.TRACTOR.size(4), 6)
        self.assertEqual(IndexKind.SPINOR.size(4), 4)
        self.assertEqual(IndexKind.SPINOR.size(3), 2)
        self.assertEqual(IndexKind.TRACTOR_SPINOR.size(3), 4)

    def test_flipped(self):
        self.assertEqual(CURVED_UP.flipped(), CURVED_DOWN)


class TestTensorField(SimpleTestCase):

    def setUp(self):
        self.x, self.y = sp.symbols("x y", positive=True)

    def test_missing_components_are_zero(self):
        t = TensorField((CURVED_UP,), 3, {1: self.x})
        self.assertEqual(t[0], 0)
        self.assertEqual(t[1], self.x)
        self.assertEqual(t.shape, (3,))

    def test_index_out_of_range(self):
        with self.assertRaises(UnsupportedInput):
            TensorField((CURVED_UP,), 3, {3: 1})

    def test_antisymmetric_from_function(self):
        t = TensorField.from_function(
            (CURVED_DOWN, CURVED_DOWN), 3, lambda a, b: self.x**a * self.y**b,
            symmetries=[(Symmetry.ANTISYMMETRIC, (0, 1))],
        )
        self.assertEqual(t[0, 0], 0)
        self.assertEqual(t[1, 0], -t[0, 1])
        self.assertTrue(t.check_symmetry())

    def test_scalar(self):
        s = TensorField.scalar(self.x, 3, weight=-1)
        self.assertEqual(s.as_scalar(), self.x)
        self.assertEqual(s.weight, -1)
        with self.assertRaises(UnsupportedInput):
            TensorField((CURVED_UP,), 3).as_scalar()

    def test_arithmetic_needs_matching_slots(self):
        a = TensorField((CURVED_UP,), 3, {0: 1})
        b = TensorField((CURVED_DOWN,), 3, {0: 1})
        with self.assertRaises(UnsupportedInput):
            a + b
        self.assertTrue((a - a).is_zero())
        self.assertEqual((2 * a)[0], 2)
        self.assertEqual((-a)[0], -1)

    def test_nonzero_components(self):
        t = TensorField((CURVED_UP,), 3, {0: self.x - self.x, 2: self.y})
        self.assertEqual(t.nonzero_components(), {(2,): self.y})


class TestAlgebra(SimpleTestCase):

    def setUp(self):
        self.x, self.y = sp.symbols("x y", positive=True)
        self.v = TensorField((CURVED_UP,), 2 + 1, {0: 1, 1: self.x, 2: self.y}, weight=1)
        self.w = TensorField((CURVED_DOWN,), 3, {0: self.y, 1: 2, 2: 0}, weight=-1)

    def test_tensor_product_adds_weights(self):
        t = tensor_product(self.v, self.w)
        self.assertEqual(t.rank, 2)
        self.assertEqual(t.weight, 0)
        self.assertEqual(t[1, 0], self.x * self.y)

    def test_contract(self):
        t = tensor_product(self.v, self.w)
        self.assertEqual(simplify(contract(t, 0, 1).as_scalar() - (self.y + 2 * self.x)), 0)

    def test_contract_needs_opposite_variance(self):
        t = tensor_product(self.v, self.v)
        with self.assertRaises(UnsupportedInput):
            contract(t, 0, 1)
        with self.assertRaises(UnsupportedInput):
            contract(t, 0, 0)

    def test_contract_with_metric(self):
        t = tensor_product(self.v, self.v)
        eta = sp.diag(-1, 1, 1)
        self.assertEqual(simplify(contract(t, 0, 1, eta).as_scalar() - (-1 + self.x**2 + self.y**2)), 0)

    def test_permute(self):
        t = tensor_product(self.v, self.w)
        swapped = permute(t, (1, 0))
        self.assertEqual(swapped.slots, (CURVED_DOWN, CURVED_UP))
        self.assertEqual(swapped[0, 1], t[1, 0])

    def test_symmetrize(self):
        a = TensorField((CURVED_DOWN, CURVED_DOWN), 3, {(0, 1): self.x})
        sym = symmetrize(a, (0, 1))
        anti = symmetrize(a, (0, 1), anti=True)
        self.assertEqual(sym[1, 0], self.x / 2)
        self.assertEqual(anti[1, 0], -self.x / 2)
        self.assertTrue((sym + anti - a).is_zero())

    def test_raise_and_lower(self):
        eta = sp.diag(-1, 1, 1)
        lowered = lower_index(self.v, 0, eta)
        self.assertEqual(lowered.slots, (CURVED_DOWN,))
        self.assertEqual(lowered[0], -1)
        self.assertTrue((raise_index(lowered, 0, eta) - self.v).is_zero())


class TestCovariantDerivative(SimpleTestCase):

    def test_metric_compatibility(self):
        geo = SphereFactory()
        self.assertTrue(covariant_derivative(geo.metric_field, geo).is_zero())

    def test_new_index_comes_first(self):
        geo = FlatFactory()
        t, x, y = geo.coords
        v = TensorField((CURVED_UP,), 3, {1: x * y})
        dv = covariant_derivative(v, geo)
        self.assertEqual(dv.slots, (CURVED_DOWN, CURVED_UP))
        self.assertEqual(dv[2, 1], x)
        self.assertEqual(dv[1, 2], 0)

    def test_flat_laplacian(self):
        geo = FlatFactory()
        t, x, y = geo.coords
        f = TensorField.scalar(t**2 + x**2 + y**3, 3)
        self.assertEqual(simplify(laplacian(f, geo).as_scalar() - (-2 + 2 + 6 * y)), 0)

    def test_sphere_laplacian_of_constant(self):
        geo = SphereFactory()
        self.assertTrue(laplacian(TensorField.scalar(1, 3), geo).is_zero())
