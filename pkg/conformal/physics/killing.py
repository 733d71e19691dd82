"""
Killing tractors.

A vector ``xi`` is lifted to the weight one tractor ``V = (0, xi^m, -D.xi/d)``
and then to ``V^{MN} = D^[M V^N]/d``.  The top row of ``V^{MN}`` is
``(0, xi^n, -D.xi/d)`` for every ``xi``, so ``-1/2 V_{MN} D^{MN}`` acts on
weight ``w`` scalars as ``xi.D - (w/d) D.xi``.  When ``xi`` is a conformal
Killing vector of a conformally flat background ``V^{MN}`` is parallel.
"""
import logging

import sympy as sp

from conformal.expr import simplify
from conformal.identities import CONFORMALLY_FLAT, Identity
from conformal.physics.base import SystemContext, run_system
from conformal.tensor import IndexKind, Symmetry, TensorField, covariant_derivative, down, up
from conformal.tractor import (
    PLUS,
    TRACTOR_UP,
    divergence,
    double_D,
    lower_tractor,
    mid,
    minus,
    thomas_D,
    tractor_vector,
)
from conformal.utils import UnsupportedInput, memoized


logger = logging.getLogger(__name__)

SUITE = "killing"


def curved_components(xi, geo):
    """Curved upper components of ``xi``, given as a list or a rank one field."""
    if isinstance(xi, TensorField):
        if xi.slots != (up(IndexKind.CURVED),):
            raise UnsupportedInput("A Killing candidate is a vector with one upper curved index")
        return [xi[mu] for mu in range(geo.dim)]
    values = [sp.sympify(v) for v in xi]
    if len(values) != geo.dim:
        raise UnsupportedInput(f"A Killing candidate needs {geo.dim} components, got {len(values)}")
    return values


def frame_components(xi, geo):
    """``xi^m = e_mu^m xi^mu``."""
    e, d = geo.vielbein, geo.dim
    values = curved_components(xi, geo)
    return [simplify(sum(e[mu, m] * values[mu] for mu in range(d) if e[mu, m] != 0)) for m in range(d)]


def vector_divergence(xi, geo):
    field = TensorField((up(IndexKind.CURVED),), geo.dim, dict(enumerate(curved_components(xi, geo))))
    derivative = covariant_derivative(field, geo)
    return simplify(sum(derivative[mu, mu] for mu in range(geo.dim)))


def conformal_killing_residual(xi, geo):
    """``D_(mu xi_nu) - (1/d) g_{mu nu} D.xi``; zero exactly for conformal Killing vectors."""
    d, g = geo.dim, geo.metric
    values = curved_components(xi, geo)
    lowered = [sum(g[mu, nu] * values[nu] for nu in range(d) if g[mu, nu] != 0) for mu in range(d)]
    derivative = covariant_derivative(TensorField((down(IndexKind.CURVED),), d, dict(enumerate(lowered))), geo)
    div = vector_divergence(xi, geo)
    return TensorField.from_function(
        (down(IndexKind.CURVED), down(IndexKind.CURVED)), d,
        lambda mu, nu: simplify((derivative[mu, nu] + derivative[nu, mu]) / 2 - g[mu, nu] * div / d),
        symmetries=[(Symmetry.SYMMETRIC, (0, 1))],
    )


def vector_tractor(xi, geo):
    """``V^M = (0, xi^m, -D.xi/d)`` at weight one."""
    d = geo.dim
    return tractor_vector([0] + frame_components(xi, geo) + [-vector_divergence(xi, geo) / d], d, weight=1)


def killing_tractor(xi, geo):
    """
    ``V^{MN} = (D^M V^N - D^N V^M)/2d``.  Raises :class:`UnsupportedInput`
    when ``X.V`` or ``D.V`` is nonzero.
    """
    d = geo.dim
    V = vector_tractor(xi, geo)
    admissibility = admissibility_residuals(V, geo)
    nonzero = [r for r in admissibility if simplify(r) != 0]
    if nonzero:
        raise UnsupportedInput(f"The vector tractor is not admissible: residual {nonzero[0]}")
    DV = thomas_D(V, geo)
    components = {(M, N): simplify((DV[M, N] - DV[N, M]) / (2 * d)) for M in range(d + 2) for N in range(d + 2)}
    return TensorField((TRACTOR_UP, TRACTOR_UP), d, components, weight=0,
                       symmetries=[(Symmetry.ANTISYMMETRIC, (0, 1))])


def admissibility_residuals(V, geo):
    """``X.V`` and ``D.V``."""
    return [V[PLUS], divergence(V, geo).as_scalar()]


def killing_action(killing, phi, geo):
    """``-1/2 V_{MN} D^{MN} phi`` for a scalar ``phi``."""
    lowered = lower_tractor(lower_tractor(killing, 0, geo), 1, geo)
    dd = double_D(phi, geo)
    total = sum(lowered[idx] * value for idx, value in dd.items() if value != 0)
    return simplify(-total / 2)


class KillingContext(SystemContext):

    def __init__(self, geo, xi, sigma=None, weight=None):
        super().__init__(geo, sigma, weight)
        self.xi = curved_components(xi, geo)

    @memoized
    def frame_xi(self):
        return frame_components(self.xi, self.geo)

    @memoized
    def xi_divergence(self):
        return vector_divergence(self.xi, self.geo)

    @memoized
    def V(self):
        return vector_tractor(self.xi, self.geo)

    @memoized
    def killing(self):
        return killing_tractor(self.xi, self.geo)


def admissible(c):
    return admissibility_residuals(c.V, c.geo)


def top_row(c):
    """``V^{+-} = -D.xi/d``, ``V^{+n} = xi^n`` and ``V^{++} = 0``."""
    d, K = c.d, c.killing
    residuals = [K[PLUS, PLUS], K[PLUS, minus(d)] + c.xi_divergence / d]
    residuals += [K[PLUS, mid(n)] - c.frame_xi[n] for n in range(d)]
    return residuals


def middle_block(c):
    """``V^{mn} = D^[m xi^n]``."""
    gradient = c.frame_gradient(c.frame_vector(c.frame_xi, weight=1))
    eta, K = c.geo.ctx.eta, c.killing
    return [
        K[mid(m), mid(n)] - (eta[m, m] * gradient[m, n] - eta[n, n] * gradient[n, m]) / 2
        for m in range(c.d) for n in range(c.d)
    ]


def vector_action(c):
    """``-1/2 V_{MN} D^{MN} phi = xi.D phi - (w/d) (D.xi) phi``."""
    phi = c.phi.as_scalar()
    expected = sum(x * sp.diff(phi, coord) for x, coord in zip(c.xi, c.geo.coords)) - c.w / c.d * c.xi_divergence * phi
    return killing_action(c.killing, c.phi, c.geo) - expected


def conformal_killing(c):
    return conformal_killing_residual(c.xi, c.geo)


def parallel(c):
    """A conformal Killing vector on a conformally flat background gives a parallel ``V^{MN}``."""
    return covariant_derivative(c.killing, c.geo)


ENTRIES = [
    Identity("admissible", "killing/vector-tractor", admissible),
    Identity("top-row", "killing/block-matrix", top_row),
    Identity("middle-block", "killing/block-matrix", middle_block),
    Identity("vector-action", "killing/vector-field-action", vector_action),
    Identity("conformal-killing", "killing/conformal-killing-equation", conformal_killing),
    Identity("parallel", "killing/parallel", parallel, CONFORMALLY_FLAT),
]


def killing_suite(geo, xi, sigma=None, weight=None, names=None):
    context = KillingContext(geo, xi, sigma, weight)
    entries = [e for e in ENTRIES if names is None or e.name in names]
    report = run_system(context, entries, SUITE, "Killing tractor")
    report.set_quantity("killing/divergence", context.xi_divergence)
    return report
