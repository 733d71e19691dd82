"""
The tractor identity ledger.

Each entry builds a residual on generic fields with a symbolic weight ``w``.
Entries declare the background hypothesis they rely on; a violated hypothesis
becomes a ``skipped`` record.  Entries with several conventional normalizations
return a dict of alternatives, and the record names the ones that hold.
"""
import logging
import time
from typing import Callable, NamedTuple

import sympy as sp

from conformal.expr import simplify
from conformal.reports import CheckRecord, Report, Status, check, skipped
from conformal.tensor import IndexKind, TensorField, apply_matrix, covariant_derivative, down
from conformal.tractor import (
    CanonicalTractors,
    ScaleTractor,
    canonical_X,
    double_D,
    gauge_U,
    generic_scalar,
    generic_tractor,
    minus,
    tractor_connection,
    tractor_curvature,
    tractor_curvature_blocks,
    tractor_curvature_from_commutator,
    tractor_metric,
    thomas_D,
    times_X,
    transform_tractor,
)
from conformal.utils import GeometryUnavailable, HypothesisError, memoized, new_lock, parallel_map
from conformal.weyl import WeylFactor, rescale


logger = logging.getLogger(__name__)

SUITE = "tractor-identities"

NO_HYPOTHESIS = "none"
CONFORMALLY_FLAT = "conformally-flat"
EINSTEIN_SCALE = "einstein-constant-scale"


class Identity(NamedTuple):
    name: str
    anchor: str
    residual: Callable
    hypothesis: str = NO_HYPOTHESIS


class IdentityContext:
    """Generic fields and cached operator applications shared by the ledger entries."""

    def __init__(self, geo, sigma=None, weight=None):
        self.geo = geo
        self.d = geo.dim
        self.n = geo.dim + 2
        self.w = geo.ctx.param("w") if weight is None else sp.sympify(weight)
        self.sigma = sp.S.One if sigma is None else sp.sympify(sigma)
        self.eta = tractor_metric(geo).matrix
        self.X = [1 if a == minus(self.d) else 0 for a in range(self.n)]
        self._lock = new_lock()

    def require(self, hypothesis):
        geo = self.geo
        if hypothesis == CONFORMALLY_FLAT and not geo.conformally_flat_status().passed:
            raise HypothesisError("background is not conformally flat")
        if hypothesis == EINSTEIN_SCALE:
            constant = all(simplify(sp.diff(self.sigma, x)) == 0 for x in geo.coords)
            if not constant or not geo.einstein_status().passed:
                raise HypothesisError("needs an Einstein background at constant scale")

    @memoized
    def phi(self):
        return generic_scalar(self.geo, "phi", self.w)

    @memoized
    def scale(self):
        return ScaleTractor(self.geo, self.sigma)

    @memoized
    def I(self):
        return self.scale.components

    @memoized
    def I_lower(self):
        return list(self.eta * sp.Matrix(self.I))

    @memoized
    def D_phi(self):
        return thomas_D(self.phi, self.geo)

    @memoized
    def DD_phi(self):
        return double_D(self.phi, self.geo)

    @memoized
    def D_X_phi(self):
        """``D^M (X^N phi)`` at ``[M, N]``."""
        return thomas_D(times_X(self.phi), self.geo)

    @memoized
    def D_D_phi(self):
        """``D^M D^N phi`` at ``[M, N]``."""
        return thomas_D(self.D_phi, self.geo)

    def pairs(self):
        return [(a, b) for a in range(self.n) for b in range(self.n)]

    def times_sigma_power(self, k):
        return TensorField.scalar(self.sigma**k * self.phi.as_scalar(), self.d, weight=self.w + k)


# Double D definitions

def double_d_definition(c):
    """``(d+2w-2) D^{MN} = X^N D^M - X^M D^N``."""
    factor = c.d + 2 * c.w - 2
    return [factor * c.DD_phi[M, N] - (c.X[N] * c.D_phi[M] - c.X[M] * c.D_phi[N]) for M, N in c.pairs()]


def double_d_from_x(c):
    """``(d+2w+2) D^{MN} = D^M X^N - D^N X^M``."""
    factor = c.d + 2 * c.w + 2
    return [factor * c.DD_phi[M, N] - (c.D_X_phi[M, N] - c.D_X_phi[N, M]) for M, N in c.pairs()]


def double_d_compatibility(c):
    left, right = c.d + 2 * c.w + 2, c.d + 2 * c.w - 2
    return [
        left * (c.X[N] * c.D_phi[M] - c.X[M] * c.D_phi[N]) - right * (c.D_X_phi[M, N] - c.D_X_phi[N, M])
        for M, N in c.pairs()
    ]


def x_d_commutator(c):
    """``[X^M, D^N]`` in both conventional normalizations."""
    commutator = {(M, N): c.X[M] * c.D_phi[N] - c.D_X_phi[N, M] for M, N in c.pairs()}
    shift = c.d + 2 * c.w
    phi = c.phi.as_scalar()
    return {
        "2D-minus-eta": [commutator[M, N] - (2 * c.DD_phi[M, N] - shift * c.eta[M, N] * phi)
                         for M, N in c.pairs()],
        "D-from-commutator": [c.DD_phi[M, N] - (commutator[M, N] + shift * c.eta[M, N] * phi)
                              for M, N in c.pairs()],
    }


def d_x_relation(c):
    """``D^M X^N = X^M D^N + (d+2w)(D^{MN} + eta^{MN})``."""
    phi = c.phi.as_scalar()
    return [
        c.D_X_phi[M, N] - (c.X[M] * c.D_phi[N] + (c.d + 2 * c.w) * (c.DD_phi[M, N] + c.eta[M, N] * phi))
        for M, N in c.pairs()
    ]


# Thomas D on special tractors

def thomas_d_scale(c):
    D_sigma = thomas_D(TensorField.scalar(c.sigma, c.d, weight=1), c.geo)
    return [D_sigma[M] - c.d * c.I[M] for M in range(c.n)]


def thomas_d_canonical(c):
    D_X = thomas_D(canonical_X(c.d), c.geo)
    return [D_X[M, R] - c.d * c.eta[M, R] for M, R in c.pairs()]


def x_dot_d(c):
    return c.D_phi[0] - c.w * (c.d + 2 * c.w - 2) * c.phi.as_scalar()


def d_dot_x(c):
    trace = sum(c.eta[M, N] * c.D_X_phi[M, N] for M, N in c.pairs() if c.eta[M, N] != 0)
    return trace - (c.d + c.w) * (c.d + 2 * c.w + 2) * c.phi.as_scalar()


def thomas_d_critical(c):
    """At ``w = 1 - d/2`` only the bottom slot survives: the conformal wave operator."""
    geo, d = c.geo, c.d
    weight = 1 - sp.Rational(d, 2)
    phi = generic_scalar(geo, "phi", weight)
    D_phi = thomas_D(phi, geo)
    box = sum(
        geo.inverse_metric[m, n] * second
        for (m, n), second in _second_derivatives(phi, geo).items()
        if geo.inverse_metric[m, n] != 0
    )
    expected_bottom = -(box - sp.Rational(d - 2, 2) * geo.schouten_trace * phi.as_scalar())
    return [D_phi[M] for M in range(c.n - 1)] + [D_phi[c.n - 1] - expected_bottom]


def _second_derivatives(phi, geo):
    second = covariant_derivative(covariant_derivative(phi, geo), geo)
    return {(m, n): second[m, n] for m in range(geo.dim) for n in range(geo.dim)}


def null_thomas(c):
    """``D_M D^M = 0``."""
    return sum(c.eta[M, N] * c.D_D_phi[M, N] for M, N in c.pairs() if c.eta[M, N] != 0)


def thomas_commute(c):
    return [c.D_D_phi[M, N] - c.D_D_phi[N, M] for M, N in c.pairs() if M < N]


# Double D on special tractors

def double_d_scale(c):
    """``D^{MN} sigma = X^N I^M - X^M I^N``."""
    DD_sigma = double_D(TensorField.scalar(c.sigma, c.d, weight=1), c.geo)
    return [DD_sigma[M, N] - (c.X[N] * c.I[M] - c.X[M] * c.I[N]) for M, N in c.pairs()]


def double_d_canonical(c):
    DD_X = double_D(canonical_X(c.d), c.geo)
    return [
        DD_X[M, N, R] - (c.X[N] * c.eta[M, R] - c.X[M] * c.eta[N, R])
        for M, N in c.pairs() for R in range(c.n)
    ]


def double_d_thomas(c):
    """``D_{MN} D^N = (w - 1) D_M``."""
    DD_D = double_D(c.D_phi, c.geo)
    return [
        sum(c.eta[N, R] * DD_D[M, N, R] for N, R in c.pairs() if c.eta[N, R] != 0) - (c.w - 1) * c.D_phi[M]
        for M in range(c.n)
    ]


def x_double_d(c):
    """``X_M D^{MN} = w X^N``."""
    return [c.DD_phi[0, N] - c.w * c.X[N] * c.phi.as_scalar() for N in range(c.n)]


def double_d_leibniz(c):
    f = generic_scalar(c.geo, "f", 2)
    product = TensorField.scalar(f.as_scalar() * c.phi.as_scalar(), c.d, weight=c.w + 2)
    DD_product, DD_f = double_D(product, c.geo), double_D(f, c.geo)
    return [
        DD_product[M, N] - f.as_scalar() * c.DD_phi[M, N] - c.phi.as_scalar() * DD_f[M, N]
        for M, N in c.pairs()
    ]


def double_d_symmetric_input(c):
    """A pure trace ``eta^{RS}`` input is killed by symmetrizing the double D pair."""
    xi = TensorField((down(IndexKind.TRACTOR),) * 2, c.d,
                     {(a, b): c.eta[a, b] for a, b in c.pairs()})
    DD_xi = double_D(xi, c.geo)
    return [DD_xi[M, N, R, S] + DD_xi[N, M, R, S] for M, N in c.pairs() for R, S in c.pairs()
            if M <= N]


# Scale commutators

def scale_commutator(c):
    """``[D^M, sigma] = (d+2w) I^M + 2 I_N D^{MN}``."""
    D_product = thomas_D(c.times_sigma_power(1), c.geo)
    shift = (c.d + 2 * c.w) * c.phi.as_scalar()
    return [
        D_product[M] - c.sigma * c.D_phi[M] - shift * c.I[M]
        - 2 * sum(c.I_lower[N] * c.DD_phi[M, N] for N in range(c.n))
        for M in range(c.n)
    ]


def scale_power_commutator(k):
    def residual(c):
        D_product = thomas_D(c.times_sigma_power(k), c.geo)
        commutator = sum(
            c.I_lower[M] * (D_product[M] - c.sigma**k * c.D_phi[M]) for M in range(c.n)
        )
        expected = c.scale.norm * c.sigma**(k - 1) * k * (c.d + 2 * c.w + k - 1) * c.phi.as_scalar()
        return commutator - expected
    return residual


# Scale tractor, projectors and the connection

def projector_decomposition(c):
    canonical = CanonicalTractors(c.geo, c.scale)
    metric = canonical.metric
    V = [generic_tractor(c.geo, "V")[a] for a in range(c.n)]
    reassembled = canonical.reassemble(*canonical.decompose(V))
    pi = canonical.projector()
    residuals = [r - v for r, v in zip(reassembled, V)]
    residuals += [metric.dot(c.X, canonical.Y) - 1, metric.dot(canonical.Y, canonical.Y), metric.dot(c.X, c.X)]
    residuals += [pi.trace() - c.d]
    residuals += list(pi * pi - pi)
    return residuals


def scale_norm(c):
    return c.scale.norm - c.scale.norm_from_b()


def metric_parallel(c):
    eta = TensorField((down(IndexKind.TRACTOR),) * 2, c.d, {(a, b): c.eta[a, b] for a, b in c.pairs()})
    return tractor_connection(eta, c.geo)


def parallel_scale(c):
    return c.scale.gradient()


def diagonal_basis(c):
    B, diag = tractor_metric(c.geo).diagonal_basis()
    return list(B.T * diag * B - c.eta)


def curvature_blocks(c):
    return tractor_curvature(c.geo) - tractor_curvature_blocks(c.geo)


def curvature_commutator(c):
    return tractor_curvature_from_commutator(c.geo) - tractor_curvature(c.geo)


def curvature_flat(c):
    return tractor_curvature(c.geo)


IDENTITIES = [
    Identity("double-d-definition", "tractor-identities/double-d-x-d", double_d_definition),
    Identity("double-d-from-x", "tractor-identities/double-d-d-x", double_d_from_x),
    Identity("double-d-compatibility", "tractor-identities/double-d-compatibility", double_d_compatibility),
    Identity("x-d-commutator", "tractor-identities/x-d-commutator", x_d_commutator),
    Identity("d-x-relation", "tractor-identities/d-x", d_x_relation),
    Identity("thomas-d-scale", "tractor-identities/d-sigma", thomas_d_scale),
    Identity("thomas-d-canonical", "tractor-identities/d-x-canonical", thomas_d_canonical),
    Identity("x-dot-d", "tractor-identities/x-dot-d", x_dot_d),
    Identity("d-dot-x", "tractor-identities/d-dot-x", d_dot_x),
    Identity("thomas-d-critical-weight", "tractor-identities/conformal-wave-operator", thomas_d_critical),
    Identity("null-thomas", "tractor-identities/null-operator", null_thomas),
    Identity("thomas-commute", "tractor-identities/thomas-d-commute", thomas_commute, CONFORMALLY_FLAT),
    Identity("double-d-scale", "tractor-identities/double-d-sigma", double_d_scale),
    Identity("double-d-canonical", "tractor-identities/double-d-x", double_d_canonical),
    Identity("double-d-thomas", "tractor-identities/double-d-thomas-d", double_d_thomas),
    Identity("x-double-d", "tractor-identities/x-double-d", x_double_d),
    Identity("double-d-leibniz", "tractor-identities/double-d-leibniz", double_d_leibniz),
    Identity("double-d-symmetric-input", "tractor-identities/double-d-antisymmetry", double_d_symmetric_input),
    Identity("scale-commutator", "tractor-identities/d-sigma-commutator", scale_commutator),
] + [
    Identity(f"scale-power-commutator/k={k}", "tractor-identities/i-dot-d-sigma-k", scale_power_commutator(k))
    for k in range(4)
] + [
    Identity("projector-decomposition", "tractor-identities/projectors", projector_decomposition),
    Identity("scale-tractor-norm", "tractor-identities/gravitational-mass", scale_norm),
    Identity("metric-parallel", "tractor-identities/metric-parallel", metric_parallel),
    Identity("parallel-scale", "tractor-identities/parallel-scale", parallel_scale, EINSTEIN_SCALE),
    Identity("diagonal-basis", "tractor-identities/diagonal-metric-basis", diagonal_basis),
    Identity("curvature-blocks", "tractor-identities/curvature-blocks", curvature_blocks),
    Identity("curvature-commutator", "tractor-identities/curvature-commutator", curvature_commutator),
    Identity("curvature-conformally-flat", "tractor-identities/flat-connection", curvature_flat, CONFORMALLY_FLAT),
]


def _alternatives_record(identity, alternatives, suite=SUITE):
    """Pass when at least one normalization holds; the detail lists each verdict."""
    records = {label: check(suite, identity.name, identity.anchor, residual)
               for label, residual in alternatives.items()}
    holding = [label for label, record in records.items() if record.status.passed]
    detail = "; ".join(f"{label}: {record.status.value}" for label, record in records.items())
    if holding:
        best = records[holding[0]]
        return CheckRecord(suite, identity.name, identity.anchor, best.status, detail=f"holds: {detail}")
    failing = next(iter(records.values()))
    return CheckRecord(suite, identity.name, identity.anchor, Status.FAIL, failing.residual, detail)


def run_identity(context, identity, suite=SUITE):
    try:
        context.require(identity.hypothesis)
        value = identity.residual(context)
    except (HypothesisError, GeometryUnavailable) as exc:
        return skipped(suite, identity.name, identity.anchor, str(exc))
    if isinstance(value, dict):
        return _alternatives_record(identity, value, suite)
    detail = "" if identity.hypothesis == NO_HYPOTHESIS else f"assumes {identity.hypothesis}"
    return check(suite, identity.name, identity.anchor, value, detail)


def identity_suite(geo, sigma=None, weight=None, names=None, weyl=None):
    """
    Run the ledger on ``geo`` at scale ``sigma`` (constant 1 by default).  With a
    Weyl factor the gauge covariance checks are appended.
    """
    report = Report(title="Tractor identities")
    if geo.dim < 3:
        report.add(skipped(SUITE, "background", "tractor-identities/preamble", "tractors need d >= 3"))
        return report
    context = IdentityContext(geo, sigma, weight)
    selected = [i for i in IDENTITIES if names is None or i.name in names]
    logger.info("Running %s tractor identities on %s", len(selected), geo.ctx)

    def run(identity):
        start = time.monotonic()
        record = run_identity(context, identity)
        return record, time.monotonic() - start

    for record, seconds in parallel_map(run, selected):
        report.add(record)
        report.time(f"{SUITE}/{record.name}", seconds)
    if weyl is not None:
        report.extend(gauge_covariance_checks(geo, weyl, context.sigma, context.w))
    return report


# Gauge covariance

def gauge_covariance_checks(geo, weyl, sigma=1, weight=None):
    """
    Tractor objects built on ``(Omega^2 g, Omega sigma)`` against ``Omega^w U``
    applied to the objects built on ``(g, sigma)``.
    """
    d = geo.dim
    weight = geo.ctx.param("w") if weight is None else sp.sympify(weight)
    new = rescale(geo, weyl)
    U = gauge_U(weyl, geo)
    eta = tractor_metric(geo).matrix

    def metric_invariance():
        return list((U.T * eta * U - eta).applyfunc(simplify))

    def scale_tractor():
        before = ScaleTractor(geo, sigma).components
        after = ScaleTractor(new, weyl.omega * sp.sympify(sigma)).components
        return [a - b for a, b in zip(after, list(U * sp.Matrix(before)))]

    def connection():
        V = generic_tractor(geo, "V")
        moved = transform_tractor(V, weyl, geo)
        return tractor_connection(moved, new) - apply_matrix(tractor_connection(V, geo), 1, U)

    def thomas():
        phi = generic_scalar(geo, "phi", weight)
        moved = TensorField.scalar(weyl.power(weight) * phi.as_scalar(), d, weight=weight)
        return thomas_D(moved, new) - transform_tractor(thomas_D(phi, geo), weyl, geo)

    def curvature():
        return tractor_curvature(new) - transform_tractor(tractor_curvature(geo), weyl, geo)

    def composition():
        second = WeylFactor(1 + geo.coords[0], geo.ctx)
        composed = gauge_U(weyl * second, geo)
        stepwise = gauge_U(second, new) * U
        return list((composed - stepwise).applyfunc(simplify))

    checks = [
        ("gauge/metric-invariance", "tractor-identities/gauge-metric", metric_invariance),
        ("gauge/scale-tractor", "tractor-identities/gauge-scale-tractor", scale_tractor),
        ("gauge/connection", "tractor-identities/gauge-connection", connection),
        ("gauge/thomas-d", "tractor-identities/gauge-thomas-d", thomas),
        ("gauge/curvature", "tractor-identities/gauge-curvature", curvature),
        ("gauge/composition", "tractor-identities/gauge-composition", composition),
    ]

    def run(item):
        name, anchor, residual = item
        try:
            return check(SUITE, name, anchor, residual())
        except GeometryUnavailable as exc:
            return skipped(SUITE, name, anchor, str(exc))

    return parallel_map(run, checks)
