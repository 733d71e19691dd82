"""
Dense component tensors.

A :class:`TensorField` is a dictionary from index tuples to sympy expressions,
covering the full index range of every slot.  Slots carry a kind (curved,
frame, tractor, spinor or tractor-spinor) and a variance.  Covariant
derivatives are generic: each slot kind pulls its connection coefficients from
the geometry, so the same code differentiates tensors, tractors and spinors.
"""
import itertools
import logging
from enum import Enum
from typing import NamedTuple

import sympy as sp

from conformal.expr import simplify, worst, zero_test
from conformal.utils import UnsupportedInput, parallel_map


logger = logging.getLogger(__name__)


class IndexKind(str, Enum):

    CURVED = "curved"
    FRAME = "frame"
    TRACTOR = "tractor"
    SPINOR = "spinor"
    TRACTOR_SPINOR = "tractor-spinor"

    def size(self, d):
        if self in (IndexKind.CURVED, IndexKind.FRAME):
            return d
        if self is IndexKind.TRACTOR:
            return d + 2
        spinor = 2 ** (d // 2)
        return spinor if self is IndexKind.SPINOR else 2 * spinor


class Slot(NamedTuple):

    kind: IndexKind
    up: bool

    def flipped(self):
        return Slot(self.kind, not self.up)


def up(kind):
    return Slot(IndexKind(kind), True)


def down(kind):
    return Slot(IndexKind(kind), False)


class Symmetry(str, Enum):

    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"


def _canonical(idx, symmetries):
    """Canonical representative of ``idx`` under the declared symmetries, and the sign picked up."""
    idx = list(idx)
    sign = 1
    for symmetry, positions in symmetries:
        values = [idx[p] for p in positions]
        ordered = sorted(values)
        if symmetry is Symmetry.ANTISYMMETRIC:
            if len(set(values)) != len(values):
                return None, 0
            sign *= _permutation_sign(values)
        for p, v in zip(positions, ordered):
            idx[p] = v
    return tuple(idx), sign


def _permutation_sign(values):
    sign = 1
    values = list(values)
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if values[i] > values[j]:
                sign = -sign
    return sign


class TensorField:

    def __init__(self, slots, dim, components=None, weight=0, symmetries=()):
        self.slots = tuple(slots)
        self.dim = dim
        self.weight = sp.sympify(weight)
        self.symmetries = tuple((Symmetry(s), tuple(p)) for s, p in symmetries)
        self.shape = tuple(slot.kind.size(dim) for slot in self.slots)
        self._data = dict.fromkeys(itertools.product(*(range(n) for n in self.shape)), sp.S.Zero)
        for key, value in (components or {}).items():
            key = (key,) if isinstance(key, int) else tuple(key)
            if key not in self._data:
                raise UnsupportedInput(f"Index {key} out of range for shape {self.shape}")
            self._data[key] = sp.sympify(value)

    @classmethod
    def from_function(cls, slots, dim, fn, weight=0, symmetries=()):
        """Fill components from ``fn(*idx)``, evaluating only canonical slots of declared symmetries."""
        field = cls(slots, dim, weight=weight, symmetries=symmetries)
        cache = {}
        for idx in field._data:
            canonical, sign = _canonical(idx, field.symmetries)
            if canonical is None:
                continue
            if canonical not in cache:
                cache[canonical] = sp.sympify(fn(*canonical))
            field._data[idx] = sign * cache[canonical]
        return field

    @classmethod
    def scalar(cls, value, dim, weight=0):
        return cls((), dim, {(): value}, weight=weight)

    @property
    def rank(self):
        return len(self.slots)

    def __getitem__(self, idx):
        if isinstance(idx, int):
            idx = (idx,)
        return self._data[tuple(idx)]

    def items(self):
        return self._data.items()

    def keys(self):
        return self._data.keys()

    def values(self):
        return self._data.values()

    def as_scalar(self):
        if self.rank != 0:
            raise UnsupportedInput("Only rank-0 fields convert to scalars")
        return self._data[()]

    def like(self, components, slots=None, weight=None, symmetries=None):
        return TensorField(
            self.slots if slots is None else slots,
            self.dim,
            components,
            weight=self.weight if weight is None else weight,
            symmetries=self.symmetries if symmetries is None else symmetries,
        )

    def map(self, fn):
        return self.like({k: fn(v) for k, v in self._data.items()})

    def simplify(self):
        keys = list(self._data)
        values = parallel_map(simplify, [self._data[k] for k in keys])
        return self.like(dict(zip(keys, values)))

    def subs(self, *args, **kwargs):
        return self.map(lambda v: v.subs(*args, **kwargs))

    def _check_compatible(self, other):
        if not isinstance(other, TensorField) or other.slots != self.slots or other.dim != self.dim:
            raise UnsupportedInput("Tensor slots do not match")

    def __add__(self, other):
        self._check_compatible(other)
        return self.like({k: v + other._data[k] for k, v in self._data.items()})

    def __sub__(self, other):
        self._check_compatible(other)
        return self.like({k: v - other._data[k] for k, v in self._data.items()})

    def __neg__(self):
        return self.map(lambda v: -v)

    def __mul__(self, factor):
        if isinstance(factor, TensorField):
            return tensor_product(self, factor)
        factor = sp.sympify(factor)
        return self.map(lambda v: factor * v)

    __rmul__ = __mul__

    def zero_status(self):
        values = [v for v in self._data.values() if v != 0]
        return worst(parallel_map(zero_test, values))

    def is_zero(self):
        return self.zero_status().passed

    def nonzero_components(self):
        return {k: v for k, v in self._data.items() if simplify(v) != 0}

    def check_symmetry(self):
        """Every stored component agrees with its canonical slot under the declared symmetries."""
        for idx, value in self._data.items():
            canonical, sign = _canonical(idx, self.symmetries)
            expected = 0 if canonical is None else sign * self._data[canonical]
            if simplify(value - expected) != 0:
                return False
        return True

    def __repr__(self):
        kinds = ",".join(("^" if s.up else "_") + s.kind.value for s in self.slots)
        return f"TensorField([{kinds}], dim={self.dim}, weight={self.weight})"


def tensor_product(a, b):
    components = {
        ia + ib: va * vb
        for ia, va in a.items() if va != 0
        for ib, vb in b.items() if vb != 0
    }
    return TensorField(a.slots + b.slots, a.dim, components, weight=a.weight + b.weight)


def contract(t, slot_a, slot_b, metric=None):
    """
    Contract two slots.  Without a metric the slots must have opposite variance;
    with one, ``metric`` is a rank-2 field whose slots pair with ``slot_a`` and ``slot_b``.
    """
    if slot_a == slot_b:
        raise UnsupportedInput("Cannot contract a slot with itself")
    for slot in (slot_a, slot_b):
        if not 0 <= slot < t.rank:
            raise UnsupportedInput(f"Slot {slot} out of range for rank {t.rank}")
    sa, sb = t.slots[slot_a], t.slots[slot_b]
    n = t.shape[slot_a]
    if metric is None:
        if sa.kind != sb.kind or sa.up == sb.up:
            raise UnsupportedInput("Contraction needs one upper and one lower index of the same kind")
        pairs = [(i, i, sp.S.One) for i in range(n)]
        weight = t.weight
    else:
        pairs = [(i, j, metric[i, j]) for i in range(n) for j in range(t.shape[slot_b]) if metric[i, j] != 0]
        weight = t.weight + getattr(metric, "weight", 0)
    keep = [p for p in range(t.rank) if p not in (slot_a, slot_b)]
    components = {}
    for idx in itertools.product(*(range(t.shape[p]) for p in keep)):
        total = sp.S.Zero
        full = [0] * t.rank
        for p, v in zip(keep, idx):
            full[p] = v
        for i, j, coeff in pairs:
            full[slot_a], full[slot_b] = i, j
            value = t[tuple(full)]
            if value != 0:
                total += coeff * value
        components[idx] = total
    return TensorField([t.slots[p] for p in keep], t.dim, components, weight=weight)


def permute(t, order):
    """New tensor whose slot ``k`` is the old slot ``order[k]``."""
    components = {tuple(idx[p] for p in order): v for idx, v in t.items()}
    return TensorField([t.slots[p] for p in order], t.dim, components, weight=t.weight)


def symmetrize(t, positions, anti=False):
    """Unit-weight (anti)symmetrization over ``positions``."""
    positions = tuple(positions)
    perms = list(itertools.permutations(range(len(positions))))
    components = {}
    for idx in t.keys():
        total = sp.S.Zero
        for perm in perms:
            source = list(idx)
            for k, p in enumerate(perm):
                source[positions[k]] = idx[positions[p]]
            value = t[tuple(source)]
            if value != 0:
                total += (_permutation_sign(perm) if anti else 1) * value
        components[idx] = total / len(perms)
    symmetry = Symmetry.ANTISYMMETRIC if anti else Symmetry.SYMMETRIC
    return TensorField(t.slots, t.dim, components, weight=t.weight, symmetries=[(symmetry, positions)])


def apply_matrix(t, position, matrix, slot=None):
    """Act with a square matrix on one slot: ``T'[..a..] = M[a, b] T[..b..]``."""
    components = {}
    for idx in t.keys():
        total = sp.S.Zero
        source = list(idx)
        for b in range(t.shape[position]):
            coeff = matrix[idx[position], b]
            if coeff != 0:
                source[position] = b
                value = t[tuple(source)]
                if value != 0:
                    total += coeff * value
        components[idx] = total
    slots = list(t.slots)
    if slot is not None:
        slots[position] = slot
    return TensorField(slots, t.dim, components, weight=t.weight)


def raise_index(t, position, inverse_metric):
    return apply_matrix(t, position, inverse_metric, t.slots[position].flipped())


def lower_index(t, position, metric):
    return apply_matrix(t, position, metric, t.slots[position].flipped())


# Connections

_CONNECTION_BUILDERS = {}


def register_connection(kind):
    """Register ``builder(geo) -> Connection`` as the connection of slot kind ``kind``."""
    def decorator(builder):
        _CONNECTION_BUILDERS[IndexKind(kind)] = builder
        return builder
    return decorator


def connection_builder(kind):
    return _CONNECTION_BUILDERS.get(IndexKind(kind))


class Connection:
    """
    Sparse connection coefficients: ``rows[mu][a]`` lists ``(b, C)`` so that
    ``D_mu V^a = d_mu V^a + sum_b C V^b``.  Lower slots use the negative transpose.
    """

    def __init__(self, rows):
        self.rows = rows
        self.columns = []
        for per_mu in rows:
            transposed = {}
            for a, entries in per_mu.items():
                for b, coeff in entries:
                    transposed.setdefault(b, []).append((a, coeff))
            self.columns.append(transposed)

    @classmethod
    def from_matrices(cls, matrices):
        rows = []
        for matrix in matrices:
            per_mu = {}
            for a in range(matrix.rows):
                entries = [(b, matrix[a, b]) for b in range(matrix.cols) if matrix[a, b] != 0]
                if entries:
                    per_mu[a] = entries
            rows.append(per_mu)
        return cls(rows)

    def matrix(self, mu, size):
        m = sp.zeros(size, size)
        for a, entries in self.rows[mu].items():
            for b, coeff in entries:
                m[a, b] = coeff
        return m

    def acting(self, mu, up_slot, a):
        if up_slot:
            return self.rows[mu].get(a, ())
        return [(b, -coeff) for b, coeff in self.columns[mu].get(a, ())]


def covariant_component(t, geo, mu, idx, connections=None):
    """One component ``(D_mu t)[idx]`` without building the whole derivative."""
    if connections is None:
        connections = [geo.connection(slot.kind) for slot in t.slots]
    x = geo.coords[mu]
    total = sp.diff(t[idx], x)
    for p, slot in enumerate(t.slots):
        source = list(idx)
        for b, coeff in connections[p].acting(mu, slot.up, idx[p]):
            source[p] = b
            value = t[tuple(source)]
            if value != 0:
                total += coeff * value
    return total


def covariant_derivative(t, geo, simplify_result=True):
    """Rank+1 field; the new lower curved index comes first."""
    connections = [geo.connection(slot.kind) for slot in t.slots]
    keys = [(mu,) + idx for mu in range(geo.dim) for idx in t.keys()]

    def component(key):
        value = covariant_component(t, geo, key[0], key[1:], connections)
        return simplify(value) if simplify_result else value

    values = parallel_map(component, keys)
    return TensorField((down(IndexKind.CURVED),) + t.slots, t.dim, dict(zip(keys, values)), weight=t.weight)


def laplacian_component(first, geo, idx, connections=None):
    """
    ``g^{mu nu} D_mu D_nu t`` at ``idx`` from the dense first derivative
    ``first = covariant_derivative(t)``.
    """
    if connections is None:
        connections = [geo.connection(slot.kind) for slot in first.slots]
    total = sp.S.Zero
    for mu in range(geo.dim):
        for nu in range(geo.dim):
            g = geo.inverse_metric[mu, nu]
            if g != 0:
                total += g * covariant_component(first, geo, mu, (nu,) + tuple(idx), connections)
    return total


def laplacian(t, geo):
    """Bochner Laplacian: two covariant derivatives and one contraction with g^{mu nu}."""
    first = covariant_derivative(t, geo)
    connections = [geo.connection(slot.kind) for slot in first.slots]
    keys = list(t.keys())
    values = parallel_map(lambda idx: simplify(laplacian_component(first, geo, idx, connections)), keys)
    return t.like(dict(zip(keys, values)))
