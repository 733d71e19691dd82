"""
Operator algebra on totally symmetric tensors over constant curvature backgrounds.

Normalizations: ``N`` counts indices, ``tr`` carries ``s(s-1)``, ``div`` carries
``s``, ``g`` and ``grad`` symmetrize with unit weight,
``c = g tr - N(N + d - 2)`` and ``box = Delta + (2P/d) c``.
"""
import logging

from conformal.reports import Report, check, skipped
from conformal.tensor import (
    IndexKind,
    Symmetry,
    TensorField,
    contract,
    covariant_derivative,
    down,
    laplacian,
    symmetrize,
    tensor_product,
)
from conformal.utils import HypothesisError, UnsupportedInput, parallel_map


logger = logging.getLogger(__name__)

SUITE = "symtensor-algebra"

OPERATORS = ("N", "tr", "g", "c", "div", "grad", "box")


class SymAlgebraState:
    """
    A symmetric covariant rank-``s`` field on a constant curvature background.
    ``field`` is ``None`` for the zero state, whose formal rank may be negative.
    """

    def __init__(self, geo, field=None, rank=None, check_background=True):
        if check_background and not geo.is_constant_curvature:
            raise HypothesisError("The symmetric tensor algebra needs a constant curvature background")
        if field is not None:
            if any(slot != down(IndexKind.CURVED) for slot in field.slots):
                raise UnsupportedInput("Symmetric tensor algebra acts on covariant curved indices only")
            rank = field.rank
        if rank is None:
            raise UnsupportedInput("A zero state needs an explicit rank")
        self.geo = geo
        self.field = field
        self.rank = rank

    @classmethod
    def zero(cls, geo, rank):
        return cls(geo, None, rank, check_background=False)

    def _derived(self, field, rank=None):
        if field is None:
            return SymAlgebraState.zero(self.geo, rank)
        return SymAlgebraState(self.geo, field, check_background=False)

    @property
    def is_null(self):
        return self.field is None

    def __add__(self, other):
        if self.rank != other.rank:
            raise UnsupportedInput(f"Cannot add rank {self.rank} and rank {other.rank} states")
        if self.is_null:
            return other
        if other.is_null:
            return self
        return self._derived(self.field + other.field)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, factor):
        if self.is_null:
            return self
        return self._derived(self.field * factor)

    __rmul__ = __mul__

    def residual(self):
        """Components of the state, for zero testing."""
        return [] if self.is_null else [v for v in self.field.values() if v != 0]

    def __repr__(self):
        return f"SymAlgebraState(rank={self.rank}, null={self.is_null})"


def generic_symmetric(geo, rank, name="phi", weight=0):
    """A symmetric covariant field whose independent components are generic functions."""
    symmetries = [(Symmetry.SYMMETRIC, tuple(range(rank)))] if rank > 1 else []
    return TensorField.from_function(
        (down(IndexKind.CURVED),) * rank, geo.dim,
        lambda *idx: geo.ctx.field(f"{name}_{''.join(map(str, idx))}" if idx else name),
        weight=weight, symmetries=symmetries,
    )


def _number(state):
    return state * state.rank


def _trace(state):
    s = state.rank
    if state.is_null or s < 2:
        return SymAlgebraState.zero(state.geo, s - 2)
    traced = contract(state.field, 0, 1, metric=state.geo.inverse_metric_field)
    return state._derived(traced * (s * (s - 1)))


def _metric(state):
    if state.is_null:
        return SymAlgebraState.zero(state.geo, state.rank + 2)
    product = tensor_product(state.geo.metric_field, state.field)
    return state._derived(symmetrize(product, range(product.rank)))


def _divergence(state):
    s = state.rank
    if state.is_null or s < 1:
        return SymAlgebraState.zero(state.geo, s - 1)
    derivative = covariant_derivative(state.field, state.geo)
    return state._derived(contract(derivative, 0, 1, metric=state.geo.inverse_metric_field) * s)


def _gradient(state):
    if state.is_null:
        return SymAlgebraState.zero(state.geo, state.rank + 1)
    derivative = covariant_derivative(state.field, state.geo)
    if derivative.rank == 1:
        return state._derived(derivative)
    return state._derived(symmetrize(derivative, range(derivative.rank)))


def _casimir(state):
    d, s = state.geo.dim, state.rank
    return _metric(_trace(state)) - state * (s * (s + d - 2))


def _box(state):
    if state.is_null:
        return state
    geo = state.geo
    bochner = state._derived(laplacian(state.field, geo))
    return bochner + _casimir(state) * (2 * geo.schouten_trace / geo.dim)


_OPS = {
    "N": _number,
    "tr": _trace,
    "g": _metric,
    "c": _casimir,
    "div": _divergence,
    "grad": _gradient,
    "box": _box,
}


def sym_ops(state, op_name):
    try:
        op = _OPS[op_name]
    except KeyError:
        raise UnsupportedInput(f"Unknown operator {op_name!r}; choose from {OPERATORS}")
    return op(state)


def apply_word(state, word):
    """Apply ``word`` right to left: ``apply_word(s, ["div", "grad"])`` is ``div(grad(s))``."""
    for op_name in reversed(word):
        state = sym_ops(state, op_name)
    return state


def commutator(state, a, b):
    return apply_word(state, [a, b]) - apply_word(state, [b, a])


def _ratio(state):
    geo = state.geo
    return geo.schouten_trace / geo.dim


# name, (a, b), right hand side acting on the original state
COMMUTATORS = [
    ("tr-g", ("tr", "g"), lambda s: sym_ops(s, "N") * 4 + s * (2 * s.geo.dim)),
    ("tr-grad", ("tr", "grad"), lambda s: sym_ops(s, "div") * 2),
    ("div-g", ("div", "g"), lambda s: sym_ops(s, "grad") * 2),
    ("div-grad", ("div", "grad"), lambda s: sym_ops(s, "box") - sym_ops(s, "c") * (4 * _ratio(s))),
    ("N-grad", ("N", "grad"), lambda s: sym_ops(s, "grad")),
    ("N-g", ("N", "g"), lambda s: sym_ops(s, "g") * 2),
    ("N-div", ("N", "div"), lambda s: sym_ops(s, "div") * -1),
    ("N-tr", ("N", "tr"), lambda s: sym_ops(s, "tr") * -2),
    ("box-grad", ("box", "grad"), lambda s: SymAlgebraState.zero(s.geo, s.rank + 1)),
    ("box-g", ("box", "g"), lambda s: SymAlgebraState.zero(s.geo, s.rank + 2)),
    ("box-div", ("box", "div"), lambda s: SymAlgebraState.zero(s.geo, s.rank - 1)),
    ("box-tr", ("box", "tr"), lambda s: SymAlgebraState.zero(s.geo, s.rank - 2)),
]


def commutator_residual(state, name):
    for entry, (a, b), rhs in COMMUTATORS:
        if entry == name:
            return commutator(state, a, b) - rhs(state)
    raise UnsupportedInput(f"Unknown commutator {name!r}")


def verify_algebra(geo, ranks=(0, 1, 2), names=None):
    """Every commutator on generic symmetric fields of the given ranks."""
    report = Report(title="Symmetric tensor algebra")
    if not geo.is_constant_curvature:
        report.add(skipped(SUITE, "background", "symmetric-algebra/preamble",
                           "background is not of constant curvature"))
        return report
    names = names or [entry for entry, _, _ in COMMUTATORS]
    jobs = [(name, s) for s in ranks for name in names]

    def run(job):
        name, s = job
        state = SymAlgebraState(geo, generic_symmetric(geo, s), check_background=False)
        residual = commutator_residual(state, name)
        return check(SUITE, f"{name}/rank-{s}", f"symmetric-algebra/{name}", residual.residual())

    report.extend(parallel_map(run, jobs))
    logger.info("Checked %s commutators on %s", len(jobs), geo.ctx)
    return report
