"""
Tractor calculus.

Tractor indices run over ``(+, m, -)``: index ``0`` is ``+``, ``1..d`` the frame
indices and ``d + 1`` is ``-``.  The tractor metric is block off-diagonal with
``eta_{+-} = 1``.  Tractor fields are :class:`~conformal.tensor.TensorField`
instances with tractor slots; their weight is the Weyl weight.
"""
import logging

import sympy as sp

from conformal.expr import simplify
from conformal.tensor import (
    Connection,
    IndexKind,
    TensorField,
    apply_matrix,
    contract,
    covariant_derivative,
    down,
    laplacian,
    laplacian_component,
    register_connection,
    up,
)
from conformal.utils import GeometryUnavailable, UnsupportedInput, memoized, new_lock, parallel_map


logger = logging.getLogger(__name__)

PLUS = 0


def minus(d):
    return d + 1


def mid(m):
    return m + 1


TRACTOR_UP = up(IndexKind.TRACTOR)
TRACTOR_DOWN = down(IndexKind.TRACTOR)


class TractorMetric:

    def __init__(self, d, frame_eta=None):
        frame_eta = sp.eye(d) if frame_eta is None else frame_eta
        self.dim = d
        matrix = sp.zeros(d + 2, d + 2)
        matrix[PLUS, minus(d)] = matrix[minus(d), PLUS] = 1
        matrix[1:d + 1, 1:d + 1] = frame_eta
        self.matrix = matrix

    @classmethod
    def for_geometry(cls, geo):
        return cls(geo.dim, geo.ctx.eta)

    @property
    def inverse(self):
        # light-cone blocks and a diagonal +-1 core make eta its own inverse
        return self.matrix

    def __getitem__(self, idx):
        return self.matrix[idx]

    def dot(self, a, b):
        n = self.dim + 2
        return sum(self.matrix[i, j] * a[i] * b[j] for i in range(n) for j in range(n) if self.matrix[i, j] != 0)

    def lower(self, vector):
        return list(self.matrix * sp.Matrix(vector))

    def diagonal_basis(self):
        """
        ``(B, diag)`` with ``B^T diag B = eta``: components ``(u, m, v)`` with
        ``u = (T^+ - T^-)/sqrt2`` and ``v = (T^+ + T^-)/sqrt2`` see ``diag(-1, eta, 1)``.
        """
        d = self.dim
        root = 1 / sp.sqrt(2)
        B = sp.zeros(d + 2, d + 2)
        B[0, PLUS], B[0, minus(d)] = root, -root
        B[minus(d), PLUS], B[minus(d), minus(d)] = root, root
        B[1:d + 1, 1:d + 1] = sp.eye(d)
        diag = sp.zeros(d + 2, d + 2)
        diag[0, 0] = -1
        diag[minus(d), minus(d)] = 1
        diag[1:d + 1, 1:d + 1] = self.matrix[1:d + 1, 1:d + 1]
        return B, diag


def tractor_metric(geo):
    return TractorMetric.for_geometry(geo)


def tractor_vector(components, dim, weight=0, upper=True):
    slot = TRACTOR_UP if upper else TRACTOR_DOWN
    return TensorField((slot,), dim, dict(enumerate(components)), weight=weight)


def generic_tractor(geo, name, weight=0):
    """A tractor vector whose slots are generic functions ``name0 .. name(d+1)``."""
    return tractor_vector([geo.ctx.field(f"{name}{i}") for i in range(geo.dim + 2)], geo.dim, weight)


def generic_scalar(geo, name="phi", weight=0):
    return TensorField.scalar(geo.ctx.field(name), geo.dim, weight=weight)


def top(t):
    return t[PLUS]


def middle(t):
    return [t[mid(m)] for m in range(t.dim)]


def bottom(t):
    return t[minus(t.dim)]


def canonical_X(d, lower=False):
    """Weight one null tractor; upper components ``(0, 0, 1)``."""
    components = [0] * (d + 2)
    components[PLUS if lower else minus(d)] = 1
    return tractor_vector(components, d, weight=1, upper=not lower)


def times_X(t):
    """``X^M t`` with the new index first."""
    d = t.dim
    components = {(minus(d),) + idx: v for idx, v in t.items()}
    return TensorField((TRACTOR_UP,) + t.slots, d, components, weight=t.weight + 1)


def lower_tractor(t, position, geo):
    return apply_matrix(t, position, tractor_metric(geo).matrix, TRACTOR_DOWN)


def raise_tractor(t, position, geo):
    return apply_matrix(t, position, tractor_metric(geo).inverse, TRACTOR_UP)


def tractor_contract(t, a, b, geo):
    """Contract two tractor slots of the same variance with the tractor metric."""
    eta = tractor_metric(geo).matrix
    return contract(t, a, b, metric=eta)


def contract_with(t, position, vector, geo=None, lower=True):
    """``V_M t^{..M..}`` for a list of upper components ``vector``."""
    if lower:
        vector = tractor_metric(geo).lower(vector)
    components = {}
    for idx, value in t.items():
        if value == 0:
            continue
        key = idx[:position] + idx[position + 1:]
        components[key] = components.get(key, 0) + vector[idx[position]] * value
    slots = t.slots[:position] + t.slots[position + 1:]
    return TensorField(slots, t.dim, components, weight=t.weight)


# Tractor connection

@register_connection(IndexKind.TRACTOR)
def _tractor_connection(geo):
    """
    ``D_mu V^+ = d V^+ - e_{mu n} V^n``,
    ``D_mu V^m = D_mu V^m + P_mu^m V^+ + e_mu^m V^-``,
    ``D_mu V^- = d V^- - P_{mu n} V^n``.
    """
    d = geo.dim
    if d == 2:
        raise GeometryUnavailable("The tractor connection needs the Schouten tensor (d >= 3)")
    e, eta = geo.vielbein, geo.ctx.eta
    P_up, P_down, omega = geo.frame_schouten, geo.frame_schouten_lowered, geo.spin_connection
    rows = []
    for mu in range(d):
        per_mu = {PLUS: [(mid(n), -e[mu, n] * eta[n, n]) for n in range(d) if e[mu, n] != 0]}
        for m in range(d):
            entries = [(PLUS, P_up[mu, m])] if P_up[mu, m] != 0 else []
            entries += [(mid(n), omega[mu][m, n]) for n in range(d) if omega[mu][m, n] != 0]
            if e[mu, m] != 0:
                entries.append((minus(d), e[mu, m]))
            per_mu[mid(m)] = entries
        per_mu[minus(d)] = [(mid(n), -P_down[mu, n]) for n in range(d) if P_down[mu, n] != 0]
        rows.append({a: entries for a, entries in per_mu.items() if entries})
    return Connection(rows)


def tractor_connection(t, geo):
    """``D_mu t``; the new curved index comes first."""
    return covariant_derivative(t, geo)


def connection_matrices(geo):
    size = geo.dim + 2
    connection = geo.connection(IndexKind.TRACTOR)
    return [connection.matrix(mu, size) for mu in range(geo.dim)]


def _curvature_slots():
    return (down(IndexKind.CURVED), down(IndexKind.CURVED), TRACTOR_UP, TRACTOR_DOWN)


def tractor_curvature(geo):
    """``F_{mu nu}^M_N = d_mu A_nu - d_nu A_mu + [A_mu, A_nu]``."""
    A, x, d = connection_matrices(geo), geo.coords, geo.dim
    components = {}
    for mu in range(d):
        for nu in range(mu + 1, d):
            F = A[nu].diff(x[mu]) - A[mu].diff(x[nu]) + A[mu] * A[nu] - A[nu] * A[mu]
            for (a, b), value in zip(
                ((a, b) for a in range(d + 2) for b in range(d + 2)), F
            ):
                value = simplify(value)
                components[(mu, nu, a, b)] = value
                components[(nu, mu, a, b)] = -value
    return TensorField(_curvature_slots(), d, components)


def tractor_curvature_blocks(geo):
    """The curvature assembled from Cotton and Weyl: ``[[0,0,0],[C^m, W^m_n, 0],[0, -C_n, 0]]``."""
    d, E, eta = geo.dim, geo.inverse_vielbein, geo.ctx.eta
    C, W = geo.cotton, geo.weyl
    components = {}
    for mu in range(d):
        for nu in range(d):
            if mu == nu:
                continue
            for m in range(d):
                c_down = sum(E[m, lam] * C[mu, nu, lam] for lam in range(d))
                components[(mu, nu, mid(m), PLUS)] = eta[m, m] * c_down
                components[(mu, nu, minus(d), mid(m))] = -c_down
                for n in range(d):
                    components[(mu, nu, mid(m), mid(n))] = eta[m, m] * sum(
                        E[m, r] * E[n, s] * W[r, s, mu, nu] for r in range(d) for s in range(d)
                        if E[m, r] != 0 and E[n, s] != 0
                    )
    return TensorField(_curvature_slots(), d, components)


def tractor_curvature_from_commutator(geo):
    """``[D_mu, D_nu] V^M`` on a generic tractor vector, read off as a matrix acting on ``V``."""
    d = geo.dim
    V = generic_tractor(geo, "V")
    second = covariant_derivative(covariant_derivative(V, geo, False), geo, False)
    generators = [V[a] for a in range(d + 2)]
    components = {}
    for mu in range(d):
        for nu in range(mu + 1, d):
            for a in range(d + 2):
                expr = sp.expand(second[mu, nu, a] - second[nu, mu, a])
                for b, field in enumerate(generators):
                    value = simplify(sp.diff(expr, field))
                    components[(mu, nu, a, b)] = value
                    components[(nu, mu, a, b)] = -value
    return TensorField(_curvature_slots(), d, components)


# Scale tractor and canonical tractors

class ScaleTractor:
    """``I^M = D^M sigma / d = (sigma, D^m sigma, -(Delta sigma + P sigma)/d)``."""

    weight = 0

    def __init__(self, geo, sigma):
        self.geo = geo
        self.sigma = sp.sympify(getattr(sigma, "sigma", sigma))
        self._lock = new_lock()

    @memoized
    def components(self):
        geo, sigma, d = self.geo, self.sigma, self.geo.dim
        middle_slots = geo.frame_up(geo.gradient(sigma))
        box = laplacian(TensorField.scalar(sigma, d), geo).as_scalar()
        return [sigma] + middle_slots + [simplify(-(box + geo.schouten_trace * sigma) / d)]

    @memoized
    def field(self):
        return tractor_vector(self.components, self.geo.dim)

    @memoized
    def norm(self):
        """``I.I``."""
        return simplify(tractor_metric(self.geo).dot(self.components, self.components))

    def b(self):
        return [simplify(sp.diff(self.sigma, x) / self.sigma) for x in self.geo.coords]

    def norm_from_b(self):
        """``-(2 sigma^2/d) [P + D.b - (d-2)/2 b.b]``."""
        geo, d = self.geo, self.geo.dim
        b = TensorField((down(IndexKind.CURVED),), d, dict(enumerate(self.b())))
        db = covariant_derivative(b, geo)
        ginv = geo.inverse_metric
        div_b = sum(ginv[m, n] * db[m, n] for m in range(d) for n in range(d) if ginv[m, n] != 0)
        b2 = sum(ginv[m, n] * b[m] * b[n] for m in range(d) for n in range(d) if ginv[m, n] != 0)
        return simplify(-2 * self.sigma**2 / d * (geo.schouten_trace + div_b - sp.Rational(d - 2, 2) * b2))

    def gradient(self):
        return covariant_derivative(self.field, self.geo)

    def is_parallel(self):
        return self.gradient().is_zero()


class CanonicalTractors:
    """``X``, ``Y = (I - (I.I)/(2 X.I) X)/(X.I)`` and ``Pi = eta - XY - YX``."""

    def __init__(self, geo, scale):
        self.geo = geo
        self.scale = scale if isinstance(scale, ScaleTractor) else ScaleTractor(geo, scale)
        self.metric = tractor_metric(geo)
        d = geo.dim
        self.X = [0] * (d + 2)
        self.X[minus(d)] = 1
        x_dot_i = self.scale.sigma
        self.Y = [simplify((i - self.scale.norm / (2 * x_dot_i) * x) / x_dot_i)
                  for i, x in zip(self.scale.components, self.X)]

    def projector(self):
        """``Pi^M_N`` as a matrix acting on upper components."""
        eta = self.metric.matrix
        X, Y = sp.Matrix(self.X), sp.Matrix(self.Y)
        upper = eta - X * Y.T - Y * X.T
        return (upper * eta).applyfunc(simplify)

    def decompose(self, vector):
        """``(X.V, Y.V, Pi V)`` for a list of upper components."""
        pi = self.projector()
        return (self.metric.dot(self.X, vector), self.metric.dot(self.Y, vector),
                list(pi * sp.Matrix(vector)))

    def reassemble(self, x_part, y_part, middle_part):
        """``Y (X.V) + X (Y.V) + Pi V``."""
        return [self.Y[i] * x_part + self.X[i] * y_part + middle_part[i] for i in range(len(self.X))]


# Gauge transformations

def gauge_U(weyl, geo):
    """``U^M_N`` for ``g -> Omega^2 g`` with frame ``Omega e``; tractors map as ``Omega^w U T``."""
    d, eta = geo.dim, geo.ctx.eta
    omega = weyl.omega
    u_down = geo.frame_down(weyl.upsilon)
    u_up = [eta[m, m] * u_down[m] for m in range(d)]
    u2 = sum(u_up[m] * u_down[m] for m in range(d))
    U = sp.zeros(d + 2, d + 2)
    U[PLUS, PLUS] = omega
    for m in range(d):
        U[mid(m), PLUS] = u_up[m]
        U[mid(m), mid(m)] = 1
        U[minus(d), mid(m)] = simplify(-u_down[m] / omega)
    U[minus(d), PLUS] = simplify(-u2 / (2 * omega))
    U[minus(d), minus(d)] = 1 / omega
    return U


def transform_tractor(t, weyl, geo):
    """``Omega^w`` times the gauge matrix on every tractor and tractor-spinor slot."""
    U = gauge_U(weyl, geo)
    U_dual = U.inv().T.applyfunc(simplify)
    spinor_U = None
    result = t * weyl.power(t.weight)
    for position, slot in enumerate(t.slots):
        if slot.kind is IndexKind.TRACTOR:
            result = apply_matrix(result, position, U if slot.up else U_dual)
        elif slot.kind is IndexKind.TRACTOR_SPINOR:
            if spinor_U is None:
                from conformal.spinor import spinor_gauge_U
                spinor_U = spinor_gauge_U(weyl, geo)
            if not slot.up:
                raise UnsupportedInput("Dual tractor spinor slots are not supported")
            result = apply_matrix(result, position, spinor_U)
    result.weight = t.weight
    return result.simplify()


# Thomas D and double D

def frame_derivative(first, geo, idx, m):
    """``D^m t`` at ``idx`` from the dense first derivative ``first``."""
    E, eta = geo.inverse_vielbein, geo.ctx.eta
    return eta[m, m] * sum(E[m, mu] * first[(mu,) + tuple(idx)] for mu in range(geo.dim) if E[m, mu] != 0)


def thomas_D(t, geo, weight=None, lower=False):
    """
    ``D^M t = ((d+2w-2) w t, (d+2w-2) D^m t, -(D.D t + w P t))`` with the new
    index first; the result has weight ``w - 1``.
    """
    d = geo.dim
    w = t.weight if weight is None else sp.sympify(weight)
    first = covariant_derivative(t, geo)
    connections = [geo.connection(slot.kind) for slot in first.slots]
    factor = d + 2 * w - 2
    P = geo.schouten_trace
    # workers must find these cached; the geometry lock may be held by the caller
    geo.inverse_vielbein, geo.inverse_metric
    keys = list(t.keys())

    def slots_for(idx):
        column = [factor * w * t[idx]]
        column += [factor * frame_derivative(first, geo, idx, m) for m in range(d)]
        column.append(-(laplacian_component(first, geo, idx, connections) + w * P * t[idx]))
        return [simplify(v) for v in column]

    columns = parallel_map(slots_for, keys)
    components = {(a,) + idx: value for idx, column in zip(keys, columns) for a, value in enumerate(column)}
    result = TensorField((TRACTOR_UP,) + t.slots, d, components, weight=w - 1)
    return lower_tractor(result, 0, geo) if lower else result


def double_D(t, geo, weight=None):
    """
    ``D^{MN} t`` from its matrix form: ``D^{+-} = w``, ``D^{m-} = D^m``,
    antisymmetric, everything else zero.  Defined at every weight.
    """
    d = geo.dim
    w = t.weight if weight is None else sp.sympify(weight)
    first = covariant_derivative(t, geo)
    components = {}
    for idx, value in t.items():
        components[(PLUS, minus(d)) + idx] = w * value
        components[(minus(d), PLUS) + idx] = -w * value
        for m in range(d):
            derivative = simplify(frame_derivative(first, geo, idx, m))
            components[(mid(m), minus(d)) + idx] = derivative
            components[(minus(d), mid(m)) + idx] = -derivative
    return TensorField((TRACTOR_UP, TRACTOR_UP) + t.slots, d, components, weight=w)


def divergence(t, geo, position=0, weight=None):
    """
    ``D_M t^{..M..}``: Thomas D contracted into the upper tractor slot at
    ``position``.  Only the ``+`` components of ``t`` need a Laplacian, so the
    contraction is formed slot by slot instead of from :func:`thomas_D`.
    """
    d = geo.dim
    w = t.weight if weight is None else sp.sympify(weight)
    eta = tractor_metric(geo).matrix
    first = covariant_derivative(t, geo)
    connections = [geo.connection(slot.kind) for slot in first.slots]
    factor = d + 2 * w - 2
    P = geo.schouten_trace
    geo.inverse_vielbein, geo.inverse_metric
    outer = sorted({idx[:position] + idx[position + 1:] for idx in t.keys()})

    def thomas_slot(A, idx):
        if A == PLUS:
            return factor * w * t[idx]
        if A == minus(d):
            return -(laplacian_component(first, geo, idx, connections) + w * P * t[idx])
        return factor * frame_derivative(first, geo, idx, A - mid(0))

    def component(rest):
        total = sp.S.Zero
        for A in range(d + 2):
            for B in range(d + 2):
                idx = rest[:position] + (B,) + rest[position:]
                if eta[A, B] != 0 and idx in t.keys():
                    total += eta[A, B] * thomas_slot(A, idx)
        return simplify(total)

    values = parallel_map(component, outer)
    slots = t.slots[:position] + t.slots[position + 1:]
    return TensorField(slots, d, dict(zip(outer, values)), weight=w - 1)


def contracted_thomas_D(t, geo, vector, keys=None, weight=None):
    """
    ``V_M D^M t`` for upper components ``vector``, evaluated only at ``keys``
    (all components by default).  Cheaper than contracting :func:`thomas_D`
    when ``t`` has high rank.
    """
    d = geo.dim
    w = t.weight if weight is None else sp.sympify(weight)
    lowered = tractor_metric(geo).lower(vector)
    first = covariant_derivative(t, geo)
    connections = [geo.connection(slot.kind) for slot in first.slots]
    factor = d + 2 * w - 2
    P = geo.schouten_trace
    geo.inverse_vielbein, geo.inverse_metric
    keys = list(t.keys()) if keys is None else [tuple(k) for k in keys]

    def component(idx):
        total = lowered[PLUS] * factor * w * t[idx]
        total += factor * sum(lowered[mid(m)] * frame_derivative(first, geo, idx, m)
                              for m in range(d) if lowered[mid(m)] != 0)
        if lowered[minus(d)] != 0:
            total -= lowered[minus(d)] * (laplacian_component(first, geo, idx, connections) + w * P * t[idx])
        return simplify(total)

    values = parallel_map(component, keys)
    return TensorField(t.slots, d, dict(zip(keys, values)), weight=w - 1)
