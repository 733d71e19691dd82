"""
Weyl rescalings ``g -> Omega^2 g``.

The transformation laws here are the claimed ones; :func:`verify_compendium`
checks each of them against a geometry rebuilt from the rescaled metric, which
is the only oracle used for transformation behaviour.
"""
import logging
import time

import sympy as sp

from conformal.expr import simplify, zero_test
from conformal.geometry import GeometryCache
from conformal.reports import Report, check, skipped
from conformal.tensor import IndexKind, TensorField, covariant_derivative, down, up
from conformal.utils import GeometryUnavailable, TransformationRuleError, UnsupportedInput, parallel_map


logger = logging.getLogger(__name__)

SUITE = "compendium"


class WeylFactor:

    def __init__(self, omega, ctx):
        self.omega = sp.sympify(omega)
        self.ctx = ctx
        if zero_test(self.omega).passed:
            raise UnsupportedInput("Weyl factor vanishes identically")

    @property
    def upsilon(self):
        """``Upsilon_mu = Omega^-1 d_mu Omega``."""
        return [simplify(sp.diff(self.omega, x) / self.omega) for x in self.ctx.coord_symbols]

    @property
    def upsilon_field(self):
        return TensorField((down(IndexKind.CURVED),), self.ctx.dimension,
                           dict(enumerate(self.upsilon)))

    def exactness_residual(self):
        """``d_mu Upsilon_nu - d_nu Upsilon_mu``; vanishes because Upsilon is a gradient."""
        u, x, d = self.upsilon, self.ctx.coord_symbols, self.ctx.dimension
        return [sp.diff(u[n], x[m]) - sp.diff(u[m], x[n]) for m in range(d) for n in range(m + 1, d)]

    def is_exact(self):
        return all(zero_test(r).passed for r in self.exactness_residual())

    def power(self, weight):
        return self.omega ** sp.sympify(weight)

    def __mul__(self, other):
        return WeylFactor(self.omega * other.omega, self.ctx)

    def __repr__(self):
        return f"WeylFactor({self.omega})"


class ScaleField:
    """A weight one compensator ``sigma`` with ``b = sigma^-1 d sigma``."""

    weight = 1

    def __init__(self, sigma, ctx):
        self.sigma = sp.sympify(sigma)
        self.ctx = ctx
        if zero_test(self.sigma).passed:
            raise UnsupportedInput("Scale field vanishes identically")

    @property
    def b(self):
        return [simplify(sp.diff(self.sigma, x) / self.sigma) for x in self.ctx.coord_symbols]

    @property
    def is_constant(self):
        return all(simplify(sp.diff(self.sigma, x)) == 0 for x in self.ctx.coord_symbols)

    def transformed(self, weyl):
        return ScaleField(weyl.omega * self.sigma, self.ctx)


def rescale(geo, weyl, carry_vielbein=True):
    """
    Geometry of ``Omega^2 g`` recomputed from scratch.  With ``carry_vielbein``
    the new frame is ``Omega e`` so frame components stay comparable.
    """
    vielbein = None
    if carry_vielbein:
        try:
            vielbein = weyl.omega * geo.vielbein
        except UnsupportedInput:
            vielbein = None
    return GeometryCache(geo.ctx, (weyl.omega**2 * geo.metric).applyfunc(simplify), vielbein=vielbein)


def volume_density(geo):
    """``sqrt|g|``, taken factor by factor for diagonal metrics."""
    sign = sp.prod(geo.ctx.signature)
    if geo.metric.is_diagonal():
        return sp.prod([sp.sqrt(sp.factor(geo.metric[i, i] * s)) for i, s in enumerate(geo.ctx.signature)])
    return sp.sqrt(sp.factor(sign * geo.metric.det()))


# Claimed transformation rules.  Each returns the transformed quantity in terms
# of data of the original geometry; weighted rules return it divided by Omega^w.

def transformed_volume(geo, weyl):
    return weyl.omega ** geo.dim * volume_density(geo)


def transformed_vielbein(geo, weyl):
    return weyl.omega * geo.vielbein


def transformed_spin_connection(geo, weyl):
    """``omega_mu^a_b + e_mu^a Upsilon_b - Upsilon^a e_{mu b}``."""
    d, e, eta = geo.dim, geo.vielbein, geo.ctx.eta
    u_down = geo.frame_down(weyl.upsilon)
    u_up = [eta[a, a] * u_down[a] for a in range(d)]
    matrices = []
    for mu in range(d):
        matrices.append(sp.Matrix(d, d, lambda a, b, mu=mu: geo.spin_connection[mu][a, b]
                                  + e[mu, a] * u_down[b] - u_up[a] * e[mu, b] * eta[b, b]))
    return matrices


def transformed_schouten(geo, weyl):
    """``P_{mu nu} - D_mu Upsilon_nu + Upsilon_mu Upsilon_nu - g_{mu nu} Upsilon^2 / 2``."""
    d, g, ginv = geo.dim, geo.metric, geo.inverse_metric
    u = weyl.upsilon
    du = covariant_derivative(weyl.upsilon_field, geo)
    u2 = sum(ginv[a, b] * u[a] * u[b] for a in range(d) for b in range(d))
    return sp.Matrix(d, d, lambda m, n: geo.schouten[m, n] - du[m, n] + u[m] * u[n] - g[m, n] * u2 / 2)


def transformed_weyl_mixed(geo, weyl):
    return geo.weyl_mixed


def transformed_cotton(geo, weyl):
    """``C_{mu nu lam} - W_{mu nu lam kappa} Upsilon^kappa``."""
    d, W = geo.dim, geo.weyl
    u_up = [sum(geo.inverse_metric[k, a] * weyl.upsilon[a] for a in range(d)) for k in range(d)]
    return TensorField.from_function(
        (down(IndexKind.CURVED),) * 3, d,
        lambda m, n, lam: geo.cotton[m, n, lam] - sum(W[m, n, lam, k] * u_up[k] for k in range(d)),
    )


def transformed_b(scale, weyl):
    return [b + u for b, u in zip(scale.b, weyl.upsilon)]


def scalar_gradient_rule(geo, weyl, f, weight):
    """``(D_mu + w Upsilon_mu) f``."""
    u = weyl.upsilon
    return TensorField((down(IndexKind.CURVED),), geo.dim,
                       {(mu,): sp.diff(f, x) + weight * u[mu] * f for mu, x in enumerate(geo.coords)})


def vector_gradient_rule(geo, weyl, v, weight):
    """``(D_mu + w Upsilon_mu) v^nu + Upsilon_mu v^nu - Upsilon^nu v_mu + delta^nu_mu Upsilon.v``."""
    d, g, ginv = geo.dim, geo.metric, geo.inverse_metric
    u = weyl.upsilon
    u_up = [sum(ginv[n, a] * u[a] for a in range(d)) for n in range(d)]
    v_down = [sum(g[m, a] * v[a] for a in range(d)) for m in range(d)]
    u_dot_v = sum(u[a] * v[a] for a in range(d))
    dv = covariant_derivative(TensorField((up(IndexKind.CURVED),), d, dict(enumerate(v))), geo, False)

    def component(mu, nu):
        value = dv[mu, nu] + weight * u[mu] * v[nu] + u[mu] * v[nu] - u_up[nu] * v_down[mu]
        return value + (u_dot_v if mu == nu else 0)

    return TensorField.from_function((down(IndexKind.CURVED), up(IndexKind.CURVED)), d, component)


def one_form_gradient_rule(geo, weyl, omega, weight):
    """``(D_mu + w Upsilon_mu) w_nu - Upsilon_mu w_nu - Upsilon_nu w_mu + g_{mu nu} Upsilon.w``."""
    d, g, ginv = geo.dim, geo.metric, geo.inverse_metric
    u = weyl.upsilon
    u_dot = sum(ginv[a, b] * u[a] * omega[b] for a in range(d) for b in range(d))
    dw = covariant_derivative(TensorField((down(IndexKind.CURVED),), d, dict(enumerate(omega))), geo, False)
    return TensorField.from_function(
        (down(IndexKind.CURVED),) * 2, d,
        lambda mu, nu: dw[mu, nu] + weight * u[mu] * omega[nu] - u[mu] * omega[nu] - u[nu] * omega[mu]
        + g[mu, nu] * u_dot,
    )


GRADIENT_RULES = {
    "scalar-gradient": scalar_gradient_rule,
    "vector-gradient": vector_gradient_rule,
    "one-form-gradient": one_form_gradient_rule,
}


def transform_field(t, weyl, geo=None, rule=None, source=None):
    """
    Weyl image of a weighted field.  Plain fields are multiplied by ``Omega^w``.
    For covariant-derivative images name the ``rule`` and pass the undifferentiated
    ``source`` components; unknown composites raise :class:`TransformationRuleError`.
    """
    factor = weyl.power(t.weight)
    if rule is None:
        return t * factor
    try:
        builder = GRADIENT_RULES[rule]
    except KeyError:
        raise TransformationRuleError(rule)
    if geo is None or source is None:
        raise UnsupportedInput(f"Rule {rule!r} needs the geometry and the source field")
    return builder(geo, weyl, source, t.weight) * factor


def _generic_components(geo, name, count):
    return [geo.ctx.field(f"{name}{i}") for i in range(count)]


def _compendium_checks(geo, weyl, scale, weight):
    d = geo.dim
    new = rescale(geo, weyl)
    oracle = rescale(geo, weyl, carry_vielbein=False) if geo.metric.is_diagonal() else new
    omega_w = weyl.power(weight)
    f = geo.ctx.field("f")
    v = _generic_components(geo, "v", d)

    def volume():
        return volume_density(new) - transformed_volume(geo, weyl)

    def vielbein():
        if oracle is new:
            return list((new.vielbein * new.ctx.eta * new.vielbein.T - new.metric).applyfunc(simplify))
        return list(oracle.vielbein - transformed_vielbein(geo, weyl))

    def spin_connection():
        claimed = transformed_spin_connection(geo, weyl)
        return [c for mu in range(d) for c in (new.spin_connection[mu] - claimed[mu])]

    def schouten():
        return list(new.schouten - transformed_schouten(geo, weyl))

    def weyl_tensor():
        return new.weyl_mixed - transformed_weyl_mixed(geo, weyl)

    def cotton():
        return new.cotton - transformed_cotton(geo, weyl)

    def scalar_gradient():
        recomputed = covariant_derivative(TensorField.scalar(omega_w * f, d, weight), new, False)
        claimed = scalar_gradient_rule(geo, weyl, f, weight)
        return [recomputed[mu] / omega_w - claimed[mu] for mu in range(d)]

    def vector_gradient():
        field = TensorField((up(IndexKind.CURVED),), d, {(n,): omega_w * v[n] for n in range(d)})
        recomputed = covariant_derivative(field, new, False)
        claimed = vector_gradient_rule(geo, weyl, v, weight)
        return [recomputed[k] / omega_w - claimed[k] for k in claimed.keys()]

    def one_form_gradient():
        field = TensorField((down(IndexKind.CURVED),), d, {(n,): omega_w * v[n] for n in range(d)})
        recomputed = covariant_derivative(field, new, False)
        claimed = one_form_gradient_rule(geo, weyl, v, weight)
        return [recomputed[k] / omega_w - claimed[k] for k in claimed.keys()]

    def scale_b():
        return [a - b for a, b in zip(scale.transformed(weyl).b, transformed_b(scale, weyl))]

    checks = [
        ("volume-form", "weyl-compendium/volume-form", volume),
        ("vielbein", "weyl-compendium/vielbein", vielbein),
        ("spin-connection", "weyl-compendium/spin-connection", spin_connection),
        ("scalar-gradient", "weyl-compendium/scalar-gradient", scalar_gradient),
        ("vector-gradient", "weyl-compendium/vector-gradient", vector_gradient),
        ("one-form-gradient", "weyl-compendium/one-form-gradient", one_form_gradient),
        ("scale-one-form", "weyl-compendium/scale-one-form", scale_b),
    ]
    if d >= 3:
        checks += [
            ("schouten", "weyl-compendium/schouten", schouten),
            ("weyl-tensor", "weyl-compendium/weyl-tensor", weyl_tensor),
            ("cotton", "weyl-compendium/cotton", cotton),
        ]
    return checks


def composition_residuals(geo, first, second):
    """``rescale(rescale(g, O1), O2)`` against ``rescale(g, O1 O2)``: metric and Schouten."""
    twice = rescale(rescale(geo, first), second)
    once = rescale(geo, first * second)
    residuals = list(twice.metric - once.metric)
    if geo.dim >= 3:
        residuals += list(twice.schouten - once.schouten)
    return residuals


def verify_compendium(geo, weyl, scale=None, weight=None, second=None):
    """
    Compare every claimed transformation law against recomputation on the
    rescaled metric.  Weighted rules run with a symbolic weight ``w`` unless one
    is given.
    """
    report = Report(title="Weyl compendium")
    weight = geo.ctx.param("w") if weight is None else sp.sympify(weight)
    scale = scale or ScaleField(1 + sum(geo.coords), geo.ctx)
    checks = _compendium_checks(geo, weyl, scale, weight)
    logger.info("Running %s compendium rules on %s", len(checks), geo.ctx)

    def run(item):
        name, anchor, residual = item
        start = time.monotonic()
        try:
            record = check(SUITE, name, anchor, residual())
        except GeometryUnavailable as exc:
            record = skipped(SUITE, name, anchor, str(exc))
        return record, time.monotonic() - start

    for record, seconds in parallel_map(run, checks):
        report.add(record)
        report.time(f"{SUITE}/{record.name}", seconds)
    report.add(check(SUITE, "exactness", "weyl-compendium/upsilon-exact", weyl.exactness_residual()))
    second = second or WeylFactor(1 + geo.coords[0], geo.ctx)
    report.add(check(SUITE, "composition", "weyl-compendium/composition",
                     composition_residuals(geo, weyl, second)))
    return report
