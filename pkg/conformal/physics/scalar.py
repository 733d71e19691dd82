"""
Spin 0: the scalar equation ``I.D phi = 0``.

At constant scale on an Einstein background it is the massive wave equation
``-sigma (Delta + (2P/d) w (w + d - 1)) phi``; at an arbitrary scale the scale
enters through ``b = grad sigma / sigma`` and the gravitational mass ``I.I``.
"""
import logging

import sympy as sp

from conformal.identities import EINSTEIN_SCALE, Identity
from conformal.physics.base import FLAT, SystemContext, run_system
from conformal.physics.mass import MassWeightQuery, bf_bound, bf_saturating_weight, mass_from_weight
from conformal.tensor import TensorField
from conformal.tractor import ScaleTractor, generic_scalar


logger = logging.getLogger(__name__)

SUITE = "spin0"


def scalar_eom(geo, sigma=1, weight=None, phi=None):
    """``I.D phi`` for a weight ``w`` scalar; the result has weight ``w - 1``."""
    context = SystemContext(geo, sigma, weight)
    phi = context.phi if phi is None else phi
    return context.i_dot_d(phi).as_scalar()


def constant_scale_form(c):
    """``-sigma (Delta + (2P/d) w (w + d - 1)) phi``."""
    phi = c.phi.as_scalar()
    return -c.sigma * (c.box(phi) + 2 * c.P / c.d * c.w * (c.w + c.d - 1) * phi)


def arbitrary_scale_form(c, sigma=None, weight=None):
    """
    ``-sigma [L phi - w (w + d - 1) (I.I/sigma^2) phi]`` with
    ``L = Delta - (d+2w-2) b.D - w D.b + w (d+w-2) b.b``.
    """
    sigma = c.sigma if sigma is None else sp.sympify(sigma)
    w = c.w if weight is None else sp.sympify(weight)
    phi = generic_scalar(c.geo, "phi", w).as_scalar()
    scale = ScaleTractor(c.geo, sigma)
    b = scale.b()
    d = c.d
    grad_phi = c.geo.gradient(phi)
    operator = (c.box(phi) - (d + 2 * w - 2) * c.dot(b, grad_phi) - w * c.divergence(b) * phi
                + w * (d + w - 2) * c.dot(b, b) * phi)
    return -sigma * (operator - w * (w + d - 1) * scale.norm_from_b() / sigma**2 * phi)


def constant_scale(c):
    return c.i_dot_d(c.phi).as_scalar() - constant_scale_form(c)


def arbitrary_scale(c):
    return c.i_dot_d(c.phi).as_scalar() - arbitrary_scale_form(c)


def yamabe(c):
    """At ``w = 1 - d/2`` the scale drops out: ``I.D phi / sigma = -(Delta - (d-2)P/2) phi``."""
    weight = 1 - sp.Rational(c.d, 2)
    sigma = c.geo.ctx.field("s")
    phi = generic_scalar(c.geo, "phi", weight)
    context = SystemContext(c.geo, sigma, weight)
    expected = -(c.box(phi.as_scalar()) - sp.Rational(c.d - 2, 2) * c.P * phi.as_scalar())
    return context.i_dot_d(phi).as_scalar() / sigma - expected


def flat_wave(c):
    return c.i_dot_d(c.phi).as_scalar() + c.sigma * c.box(c.phi.as_scalar())


def mass_relation(c):
    d, w, schouten = sp.Symbol("d"), sp.Symbol("w"), sp.Symbol("P")
    q = MassWeightQuery.build(0, d, w, schouten)
    return [
        mass_from_weight(q) + 2 * schouten / d * w * (w + d - 1),
        mass_from_weight(q.with_weight(1 - d / 2)) - schouten * (d - 2) / 2,
        bf_bound(0, d, schouten) - schouten * (d - 1)**2 / (2 * d),
        mass_from_weight(q.with_weight(bf_saturating_weight(0, d))) - bf_bound(0, d, schouten),
    ]


def background_mass(c):
    """The eigenvalue read off the assembled equation equals the mass relation on this background."""
    phi = c.phi.as_scalar()
    operator = -c.i_dot_d(c.phi).as_scalar() / c.sigma - c.box(phi)
    q = MassWeightQuery.build(0, c.d, c.w, c.P)
    return operator + mass_from_weight(q) * phi


ENTRIES = [
    Identity("constant-scale", "spin0/component-equation", constant_scale, EINSTEIN_SCALE),
    Identity("arbitrary-scale", "spin0/arbitrary-scale-equation", arbitrary_scale),
    Identity("yamabe", "spin0/scale-free-conformal-wave-equation", yamabe),
    Identity("flat-wave", "spin0/flat-wave-equation", flat_wave, FLAT),
    Identity("mass-relation", "spin0/mass-weight-relation", mass_relation),
    Identity("background-mass", "spin0/mass-weight-relation", background_mass, EINSTEIN_SCALE),
]


def scalar_suite(geo, sigma=None, weight=None, names=None):
    context = SystemContext(geo, sigma, weight)
    entries = [e for e in ENTRIES if names is None or e.name in names]
    report = run_system(context, entries, SUITE, "Spin 0")
    report.set_quantity("spin0/mass-squared", mass_from_weight(MassWeightQuery.build(0, sp.Symbol("d"), sp.Symbol("w"))))
    report.set_quantity("spin0/bf-bound", bf_bound(0, sp.Symbol("d")))
    return report


def component_equation(geo, sigma=None, weight=None):
    """The assembled scalar equation as a rank-0 field, for the ``eom`` command."""
    context = SystemContext(geo, sigma, weight)
    return TensorField.scalar(context.i_dot_d(context.phi).as_scalar(), geo.dim, weight=context.w - 1)
