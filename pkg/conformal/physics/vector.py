"""
Spin 1: a weight ``w`` tractor vector ``V^M`` with ``D.V = 0``.

The constraint fixes the bottom slot, ``F^{MN} = D^M V^N - D^N V^M`` is gauge
invariant under ``V -> V + D xi`` and ``G^N = I_M F^{MN}`` gives the Proca
system at constant scale.  Weight ``-1`` is Maxwell and ``1 - d/2`` the
Deser-Nepomechie theory.
"""
import logging

import sympy as sp

from conformal.expr import simplify
from conformal.identities import CONFORMALLY_FLAT, EINSTEIN_SCALE, Identity
from conformal.physics.base import SystemContext, run_system, solve_linear
from conformal.physics.mass import MassWeightQuery, bf_bound, mass_from_weight
from conformal.tensor import IndexKind, TensorField, permute, up
from conformal.tractor import PLUS, contract_with, divergence, generic_scalar, mid, minus, thomas_D, tractor_vector
from conformal.utils import HypothesisError, PoleWeightError, memoized


logger = logging.getLogger(__name__)

SUITE = "spin1"


def excluded_weights(d):
    return [-sp.Rational(d, 2), sp.Integer(1 - d)]


class VectorSystem(SystemContext):
    """Generic ``V^+`` and ``V^m`` (frame components); ``V^-`` solved from ``D.V = 0``."""

    def __init__(self, geo, sigma=None, weight=None, top=True):
        super().__init__(geo, sigma, weight)
        self.top = top

    def guard(self):
        if any(sp.simplify(self.w - pole) == 0 for pole in excluded_weights(self.d)):
            raise PoleWeightError(f"w = {self.w}: D.V = 0 does not fix V^- at w = -d/2 or 1 - d")

    @memoized
    def plus(self):
        return self.geo.ctx.field("Vp") if self.top else sp.S.Zero

    @memoized
    def middle(self):
        return [self.geo.ctx.field(f"Vf{m}") for m in range(self.d)]

    def assemble(self, bottom):
        return tractor_vector([self.plus] + self.middle + [bottom], self.d, self.w)

    @memoized
    def bottom(self):
        self.guard()
        unknown = self.geo.ctx.field("Vb")
        constraint = divergence(self.assemble(unknown), self.geo).as_scalar()
        return solve_linear(constraint, unknown)

    @memoized
    def V(self):
        return self.assemble(self.bottom)

    @memoized
    def F(self):
        DV = thomas_D(self.V, self.geo)
        return DV - permute(DV, (1, 0))

    @memoized
    def G(self):
        """``G^N = I_M F^{MN}``."""
        return contract_with(self.F, 0, self.I, self.geo)

    # Component language

    @memoized
    def tilde(self):
        """``V^m - D^m V^+/(w + 1)``."""
        gradient = self.frame_grad_up(self.plus)
        return [simplify(v - g / (self.w + 1)) for v, g in zip(self.middle, gradient)]

    def field_strength(self, components):
        """Frame ``F^{mn} = D^m A^n - D^n A^m``."""
        gradient = self.frame_gradient(self.frame_vector(components))
        eta = self.geo.ctx.eta
        return [[eta[m, m] * gradient[m, n] - eta[n, n] * gradient[n, m] for n in range(self.d)]
                for m in range(self.d)]

    def maxwell(self, components):
        """``D_r F^{rm}``."""
        strength = self.field_strength(components)
        field = TensorField((up(IndexKind.FRAME),) * 2, self.d,
                            {(r, m): strength[r][m] for r in range(self.d) for m in range(self.d)})
        gradient = self.frame_gradient(field)
        return [sum(gradient[r, r, m] for r in range(self.d)) for m in range(self.d)]


def constraint_solution(c):
    """``V^- = -(D.V - [Delta - (d+w-1) P] V^+/(d+2w)) / (d+w-1)``."""
    d, w, P = c.d, c.w, c.P
    expected = -(c.frame_divergence(c.middle) - (c.box(c.plus) - (d + w - 1) * P * c.plus) / (d + 2 * w)) / (d + w - 1)
    return c.bottom - expected


def field_strength_table(c):
    d, w, P = c.d, c.w, c.P
    F, tilde, n = c.F, c.tilde, c.d + 2
    factor = d + 2 * w - 2
    div_tilde = c.frame_divergence(tilde)
    strength = c.field_strength(tilde)
    current = c.maxwell(tilde)
    grad_div = c.frame_grad_up(div_tilde)
    residuals = [F[PLUS, mid(m)] - factor * (w + 1) * tilde[m] for m in range(d)]
    residuals.append(F[PLUS, minus(d)] + factor * (w + 1) / (d + w - 1) * div_tilde)
    residuals += [F[mid(m), mid(k)] - factor * strength[m][k] for m in range(d) for k in range(d)]
    residuals += [
        F[mid(m), minus(d)] - (current[m] - (w + 1) * ((2 * P / d - P) * tilde[m] + grad_div[m] / (d + w - 1)))
        for m in range(d)
    ]
    residuals += [F[a, b] + F[b, a] for a in range(n) for b in range(n)]
    return residuals


def proca(c):
    """``G^m - D^m G^+/(d+2w-2) = -sigma (D_n F^{nm} + (2P/d)(w+1)(d+w-2) Vtilde^m)``."""
    d, w, P = c.d, c.w, c.P
    G, tilde = c.G, c.tilde
    gradient = c.frame_grad_up(G[PLUS])
    current = c.maxwell(tilde)
    reduced = [G[mid(m)] - gradient[m] / (d + 2 * w - 2) for m in range(d)]
    return [
        reduced[m] + c.sigma * (current[m] + 2 * P / d * (w + 1) * (d + w - 2) * tilde[m]) for m in range(d)
    ]


def top_current(c):
    """``G^+ = sigma (d+2w-2)(w+1)/(d+w-1) D.Vtilde``."""
    d, w = c.d, c.w
    return c.G[PLUS] - c.sigma * (d + 2 * w - 2) * (w + 1) / (d + w - 1) * c.frame_divergence(c.tilde)


def maxwell_weight(c):
    """At ``w = -1`` with ``X.V = 0``: ``G^n = -sigma D_m F^{mn}``."""
    system = VectorSystem(c.geo, c.sigma, -1, top=False)
    current = system.maxwell(system.middle)
    return [system.G[mid(m)] + c.sigma * current[m] for m in range(c.d)]


def deser_nepomechie_operator(c, components):
    """``Delta A - (4/d) D^n D_m A_n + ((d-4)/d)(2 P_m^n A_n - ((d+2)/2) P A_m)`` on Einstein backgrounds."""
    d, P = c.d, c.P
    div = c.frame_divergence(components)
    grad_div = c.frame_grad_up(div)
    box = c.frame_laplacian(components)
    ricci = 2 * (d - 1) * P / d
    schouten = 2 * P / d - sp.Rational(d + 2, 2) * P
    return [
        box[m] - sp.Rational(4, d) * (grad_div[m] + ricci * components[m])
        + sp.Rational(d - 4, d) * schouten * components[m]
        for m in range(d)
    ]


def deser_nepomechie(c):
    """At ``w = 1 - d/2`` only ``F^{m-}`` survives and equals the Deser-Nepomechie operator."""
    d = c.d
    system = VectorSystem(c.geo, c.sigma, 1 - sp.Rational(d, 2), top=False)
    F = system.F
    operator = deser_nepomechie_operator(c, system.middle)
    residuals = [F[mid(m), minus(d)] - operator[m] for m in range(d)]
    residuals += [F[a, b] for a in range(d + 2) for b in range(d + 2)
                  if minus(d) not in (a, b) or PLUS in (a, b)]
    return residuals


def deser_nepomechie_maxwell(c):
    """In four dimensions the Deser-Nepomechie operator is the Maxwell operator."""
    if c.d != 4:
        raise HypothesisError(f"the Maxwell reduction needs d = 4, not d = {c.d}")
    system = VectorSystem(c.geo, c.sigma, -1, top=False)
    operator = deser_nepomechie_operator(c, system.middle)
    current = system.maxwell(system.middle)
    return [a - b for a, b in zip(operator, current)]


def gauge_invariance(c):
    """``V -> D xi`` leaves ``F^{MN}`` invariant; ``D.(D xi) = 0`` so the constraint survives."""
    xi = generic_scalar(c.geo, "xi", c.w + 1)
    shift = thomas_D(xi, c.geo)
    D_shift = thomas_D(shift, c.geo)
    return D_shift - permute(D_shift, (1, 0))


def residual_gauge_top(c):
    """``X.D xi = (d+2w)(w+1) xi`` for ``xi`` of weight ``w + 1``."""
    xi = generic_scalar(c.geo, "xi", c.w + 1)
    return thomas_D(xi, c.geo)[PLUS] - (c.d + 2 * c.w) * (c.w + 1) * xi.as_scalar()


def mass_relation(c):
    d, w, P = sp.Symbol("d"), sp.Symbol("w"), sp.Symbol("P")
    mass = mass_from_weight(MassWeightQuery.build(1, d, w, P))
    return [
        mass + 2 * P / d * (w + 1) * (w + d - 2),
        mass.subs(w, -1),
        bf_bound(1, d, P) - 2 * P / d * ((d - 3) / sp.Integer(2))**2,
    ]


ENTRIES = [
    Identity("constraint-solution", "spin1/bottom-slot-solution", constraint_solution, EINSTEIN_SCALE),
    Identity("field-strength-table", "spin1/tractor-maxwell-curvature", field_strength_table, EINSTEIN_SCALE),
    Identity("proca", "spin1/proca-equation", proca, EINSTEIN_SCALE),
    Identity("top-current", "spin1/proca-equation", top_current, EINSTEIN_SCALE),
    Identity("maxwell-weight", "spin1/maxwell-equations", maxwell_weight, EINSTEIN_SCALE),
    Identity("deser-nepomechie", "spin1/deser-nepomechie", deser_nepomechie, EINSTEIN_SCALE),
    Identity("deser-nepomechie-d4", "spin1/deser-nepomechie", deser_nepomechie_maxwell, EINSTEIN_SCALE),
    Identity("gauge-invariance", "spin1/maxwell-gauge", gauge_invariance, CONFORMALLY_FLAT),
    Identity("residual-gauge-top", "spin1/residual-gauge", residual_gauge_top),
    Identity("mass-relation", "spin1/mass-weight-relation", mass_relation),
]


def spin1_residual_gauge(d, w):
    """Classify the residual gauge ``X.D xi = (d+2w)(w+1) xi = 0``."""
    d, w = sp.sympify(d), sp.sympify(w)
    factor = sp.factor((d + 2 * w) * (w + 1))
    if sp.simplify(d + 2 * w) == 0:
        return {"factor": factor, "case": "degenerate",
                "detail": "D xi vanishes identically at w = -d/2; no gauge symmetry"}
    if sp.simplify(w + 1) == 0:
        return {"factor": factor, "case": "residual",
                "detail": "genuine residual gauge invariance; m^2 = 0"}
    return {"factor": factor, "case": "none", "detail": "X.D xi = 0 forces xi = 0"}


def spin1_system(geo, sigma=None, weight=None, names=None):
    context = VectorSystem(geo, sigma, weight)
    entries = [e for e in ENTRIES if names is None or e.name in names]
    report = run_system(context, entries, SUITE, "Spin 1")
    d, w = sp.Symbol("d"), sp.Symbol("w")
    report.set_quantity("spin1/mass-squared", mass_from_weight(MassWeightQuery.build(1, d, w)))
    report.set_quantity("spin1/bf-bound", bf_bound(1, d))
    report.set_quantity("spin1/residual-gauge", spin1_residual_gauge(d, w)["factor"])
    report.set_quantity("spin1/bottom-current", "-(2P/d)(d+w-2)(d+w-1)/((w+1)(d+2w-2)) G^+")
    return report


def component_equation(geo, sigma=None, weight=None):
    """``G^N`` with the bottom slot solved, for the ``eom`` command."""
    return VectorSystem(geo, sigma, weight).G
