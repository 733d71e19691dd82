"""
Metric to curvature pipeline.

Conventions:

* ``R^rho_{sigma mu nu} = d_mu Gamma^rho_{nu sigma} - d_nu Gamma^rho_{mu sigma} + ...``,
  so ``[D_mu, D_nu] v^rho = R^rho_{sigma mu nu} v^sigma`` and round spheres have ``R > 0``.
* ``R_{sigma nu} = R^rho_{sigma rho nu}``.
* Schouten ``P_{mu nu} = (R_{mu nu} - R g_{mu nu} / (2(d-1))) / (d-2)`` with trace ``P = R / (2(d-1))``.
* Cotton ``C_{mu nu lambda} = D_mu P_{nu lambda} - D_nu P_{mu lambda}``.
* Vielbein ``g_{mu nu} = e_mu^m eta_{mn} e_nu^n`` stored as ``e[mu, m]``; inverse ``E[m, mu]``.
"""
import logging
from importlib import import_module

import sympy as sp

from conformal.expr import PatchContext, ZeroStatus, simplify, worst, zero_test
from conformal.tensor import (
    Connection,
    IndexKind,
    Symmetry,
    TensorField,
    connection_builder,
    covariant_derivative,
    down,
    register_connection,
    up,
)
from conformal.utils import GeometryUnavailable, UnsupportedInput, memoized, new_lock, parallel_map


logger = logging.getLogger(__name__)


class GeometryCache:

    def __init__(self, ctx: PatchContext, metric, vielbein=None):
        if isinstance(metric, TensorField):
            metric = sp.Matrix(ctx.dimension, ctx.dimension, lambda i, j: metric[i, j])
        metric = sp.Matrix(metric).applyfunc(simplify)
        d = ctx.dimension
        if metric.shape != (d, d):
            raise UnsupportedInput(f"Metric shape {metric.shape} does not match dimension {d}")
        for i in range(d):
            for j in range(i + 1, d):
                if simplify(metric[i, j] - metric[j, i]) != 0:
                    raise UnsupportedInput(f"Metric is not symmetric in ({i}, {j})")
        if zero_test(metric.det()).passed:
            raise GeometryUnavailable("Metric is not invertible on the patch")
        self.ctx = ctx
        self.dim = d
        self.coords = ctx.coord_symbols
        self.metric = metric
        self._user_vielbein = None if vielbein is None else sp.Matrix(vielbein).applyfunc(simplify)
        self._lock = new_lock()
        self._connections = {}
        logger.info("Built geometry over %s", ctx)

    # Levi-Civita data

    @memoized
    def inverse_metric(self):
        if self.metric.is_diagonal():
            return sp.diag(*[simplify(1 / self.metric[i, i]) for i in range(self.dim)])
        return self.metric.inv().applyfunc(simplify)

    @memoized
    def metric_field(self):
        return TensorField.from_function(
            (down(IndexKind.CURVED), down(IndexKind.CURVED)), self.dim,
            lambda i, j: self.metric[i, j], weight=2, symmetries=[(Symmetry.SYMMETRIC, (0, 1))],
        )

    @memoized
    def inverse_metric_field(self):
        return TensorField.from_function(
            (up(IndexKind.CURVED), up(IndexKind.CURVED)), self.dim,
            lambda i, j: self.inverse_metric[i, j], weight=-2, symmetries=[(Symmetry.SYMMETRIC, (0, 1))],
        )

    @memoized
    def christoffel(self):
        """``Gamma^rho_{mu nu}`` as a (up, down, down) field."""
        g, ginv, x = self.metric, self.inverse_metric, self.coords
        d = self.dim
        dg = [[[sp.diff(g[a, b], x[c]) for c in range(d)] for b in range(d)] for a in range(d)]

        def component(rho, mu, nu):
            return simplify(sum(
                ginv[rho, lam] * (dg[lam][nu][mu] + dg[lam][mu][nu] - dg[mu][nu][lam])
                for lam in range(d) if ginv[rho, lam] != 0
            ) / 2)

        return TensorField.from_function(
            (up(IndexKind.CURVED), down(IndexKind.CURVED), down(IndexKind.CURVED)), d, component,
            symmetries=[(Symmetry.SYMMETRIC, (1, 2))],
        )

    @memoized
    def riemann(self):
        """``R^rho_{sigma mu nu}``."""
        gamma, x, d = self.christoffel, self.coords, self.dim

        def component(rho, sigma, mu, nu):
            value = sp.diff(gamma[rho, nu, sigma], x[mu]) - sp.diff(gamma[rho, mu, sigma], x[nu])
            for lam in range(d):
                value += gamma[rho, mu, lam] * gamma[lam, nu, sigma] - gamma[rho, nu, lam] * gamma[lam, mu, sigma]
            return simplify(value)

        return TensorField.from_function(
            (up(IndexKind.CURVED),) + (down(IndexKind.CURVED),) * 3, d, component,
            symmetries=[(Symmetry.ANTISYMMETRIC, (2, 3))],
        )

    @memoized
    def riemann_lowered(self):
        """``R_{mu nu rho sigma} = g_{mu alpha} R^alpha_{nu rho sigma}``."""
        g, riemann, d = self.metric, self.riemann, self.dim
        return TensorField.from_function(
            (down(IndexKind.CURVED),) * 4, d,
            lambda m, n, r, s: simplify(sum(g[m, a] * riemann[a, n, r, s] for a in range(d) if g[m, a] != 0)),
            symmetries=[(Symmetry.ANTISYMMETRIC, (0, 1)), (Symmetry.ANTISYMMETRIC, (2, 3))],
        )

    @memoized
    def ricci(self):
        d = self.dim
        return sp.Matrix(d, d, lambda s, n: simplify(sum(self.riemann[r, s, r, n] for r in range(d))))

    @memoized
    def scalar_curvature(self):
        d = self.dim
        return simplify(sum(self.inverse_metric[a, b] * self.ricci[a, b]
                            for a in range(d) for b in range(d) if self.inverse_metric[a, b] != 0))

    def _require_schouten(self):
        if self.dim == 2:
            raise GeometryUnavailable("Schouten, Weyl and Cotton tensors need d >= 3 (pole at d = 2)")

    @memoized
    def schouten(self):
        self._require_schouten()
        d = self.dim
        R = self.scalar_curvature
        return sp.Matrix(d, d, lambda a, b: simplify(
            (self.ricci[a, b] - R * self.metric[a, b] / (2 * (d - 1))) / (d - 2)
        ))

    @memoized
    def schouten_trace(self):
        self._require_schouten()
        return simplify(self.scalar_curvature / (2 * (self.dim - 1)))

    @memoized
    def schouten_field(self):
        return TensorField.from_function(
            (down(IndexKind.CURVED), down(IndexKind.CURVED)), self.dim,
            lambda a, b: self.schouten[a, b], symmetries=[(Symmetry.SYMMETRIC, (0, 1))],
        )

    @memoized
    def weyl(self):
        """Fully lowered ``W_{mu nu rho sigma}``."""
        self._require_schouten()
        P, g, R = self.schouten, self.metric, self.riemann_lowered

        def component(m, n, r, s):
            return simplify(R[m, n, r, s] - (P[m, r] * g[n, s] - P[n, r] * g[m, s]
                                             - P[m, s] * g[n, r] + P[n, s] * g[m, r]))

        return TensorField.from_function(
            (down(IndexKind.CURVED),) * 4, self.dim, component,
            symmetries=[(Symmetry.ANTISYMMETRIC, (0, 1)), (Symmetry.ANTISYMMETRIC, (2, 3))],
        )

    @memoized
    def weyl_mixed(self):
        """``W^rho_{sigma mu nu}``."""
        ginv, W, d = self.inverse_metric, self.weyl, self.dim
        return TensorField.from_function(
            (up(IndexKind.CURVED),) + (down(IndexKind.CURVED),) * 3, d,
            lambda r, s, m, n: simplify(sum(ginv[r, a] * W[a, s, m, n] for a in range(d) if ginv[r, a] != 0)),
            symmetries=[(Symmetry.ANTISYMMETRIC, (2, 3))],
        )

    @memoized
    def cotton(self):
        """``C_{mu nu lambda}``, antisymmetric in the first pair."""
        self._require_schouten()
        dP = covariant_derivative(self.schouten_field, self)
        return TensorField.from_function(
            (down(IndexKind.CURVED),) * 3, self.dim,
            lambda m, n, lam: simplify(dP[m, n, lam] - dP[n, m, lam]),
            symmetries=[(Symmetry.ANTISYMMETRIC, (0, 1))],
        )

    # Predicates

    def einstein_status(self):
        P, g, d = self.schouten, self.metric, self.dim
        trace = self.schouten_trace
        residuals = [P[a, b] - trace * g[a, b] / d for a in range(d) for b in range(a, d)]
        return worst(parallel_map(zero_test, residuals))

    def conformally_flat_status(self):
        if self.dim == 2:
            return ZeroStatus.EXACT
        if self.dim == 3:
            return self.cotton.zero_status()
        return self.weyl.zero_status()

    @memoized
    def is_constant_curvature(self):
        """Einstein with constant P; the setting of the symmetric tensor algebra."""
        if not _verdict(self.einstein_status()):
            return False
        return all(simplify(sp.diff(self.schouten_trace, x)) == 0 for x in self.coords)

    # Frames

    @memoized
    def vielbein(self):
        """``e[mu, m]`` with ``e eta e^T = g`` checked exactly."""
        eta = self.ctx.eta
        if self._user_vielbein is not None:
            e = self._user_vielbein
        elif self.metric.is_diagonal():
            # factor first so squares of positive polynomials come out of the root
            e = sp.diag(*[sp.sqrt(sp.factor(self.metric[i, i] / eta[i, i])) for i in range(self.dim)])
        else:
            raise UnsupportedInput("Non-diagonal metric needs a user supplied vielbein")
        residual = (e * eta * e.T - self.metric).applyfunc(simplify)
        if any(not zero_test(v).passed for v in residual):
            raise UnsupportedInput("Vielbein does not reproduce the metric")
        return e

    @memoized
    def inverse_vielbein(self):
        """``E[m, mu]`` with ``E e = 1``."""
        e = self.vielbein
        if e.is_diagonal():
            return sp.diag(*[simplify(1 / e[i, i]) for i in range(self.dim)])
        return e.inv().applyfunc(simplify)

    @memoized
    def spin_connection(self):
        """``omega[mu][a, b] = omega_mu^a_b = e^a_nu (d_mu E_b^nu + Gamma^nu_{mu lam} E_b^lam)``."""
        e, E, gamma, x, d = self.vielbein, self.inverse_vielbein, self.christoffel, self.coords, self.dim
        matrices = []
        for mu in range(d):
            def entry(a, b, mu=mu):
                total = sp.S.Zero
                for nu in range(d):
                    if e[nu, a] == 0:
                        continue
                    inner = sp.diff(E[b, nu], x[mu])
                    inner += sum(gamma[nu, mu, lam] * E[b, lam] for lam in range(d))
                    total += e[nu, a] * inner
                return simplify(total)
            matrices.append(sp.Matrix(d, d, entry))
        return matrices

    @memoized
    def spin_connection_lowered(self):
        """``omega_{mu ab} = eta_{ac} omega_mu^c_b``, antisymmetric in ab."""
        eta = self.ctx.eta
        return [eta * omega for omega in self.spin_connection]

    def torsion(self):
        """``d e^m + omega^m_n ^ e^n`` as components ``T[mu, nu, m]``."""
        e, omega, x, d = self.vielbein, self.spin_connection, self.coords, self.dim
        return TensorField.from_function(
            (down(IndexKind.CURVED), down(IndexKind.CURVED), up(IndexKind.FRAME)), d,
            lambda mu, nu, m: simplify(
                sp.diff(e[nu, m], x[mu]) - sp.diff(e[mu, m], x[nu])
                + sum(omega[mu][m, n] * e[nu, n] - omega[nu][m, n] * e[mu, n] for n in range(d))
            ),
            symmetries=[(Symmetry.ANTISYMMETRIC, (0, 1))],
        )

    @memoized
    def frame_schouten(self):
        """``P_mu^m`` as a matrix ``[mu, m]``."""
        P, ginv, e, d = self.schouten, self.inverse_metric, self.vielbein, self.dim
        return sp.Matrix(d, d, lambda mu, m: simplify(sum(
            P[mu, nu] * ginv[nu, lam] * e[lam, m] for nu in range(d) for lam in range(d)
            if ginv[nu, lam] != 0
        )))

    @memoized
    def frame_schouten_lowered(self):
        """``P_{mu n} = P_{mu nu} E_n^nu``."""
        P, E, d = self.schouten, self.inverse_vielbein, self.dim
        return sp.Matrix(d, d, lambda mu, n: simplify(sum(P[mu, nu] * E[n, nu] for nu in range(d))))

    def frame_up(self, covector):
        """``V^m = eta^{mn} E_n^mu V_mu`` for a list of curved lower components."""
        eta, E, d = self.ctx.eta, self.inverse_vielbein, self.dim
        return [simplify(eta[m, m] * sum(E[m, mu] * covector[mu] for mu in range(d))) for m in range(d)]

    def frame_down(self, covector):
        """``V_m = E_m^mu V_mu``."""
        E, d = self.inverse_vielbein, self.dim
        return [simplify(sum(E[m, mu] * covector[mu] for mu in range(d))) for m in range(d)]

    def curved_down(self, frame_vector):
        """``V_mu = e_mu^m eta_{mn} V^n`` from frame upper components."""
        eta, e, d = self.ctx.eta, self.vielbein, self.dim
        return [simplify(sum(e[mu, m] * eta[m, m] * frame_vector[m] for m in range(d))) for mu in range(d)]

    def gradient(self, f):
        return [sp.diff(f, x) for x in self.coords]

    # Connections for every slot kind

    def connection(self, kind):
        kind = IndexKind(kind)
        with self._lock:
            if kind not in self._connections:
                builder = connection_builder(kind)
                if builder is None:
                    import_module("conformal.tractor")
                    import_module("conformal.spinor")
                    builder = connection_builder(kind)
                self._connections[kind] = builder(self)
            return self._connections[kind]

    @memoized
    def clifford(self):
        from conformal.spinor import build_clifford
        return build_clifford(self.dim, self.ctx.signature)


def _verdict(status):
    if status is ZeroStatus.UNDECIDED:
        return None
    return status.passed


@register_connection(IndexKind.CURVED)
def _levi_civita(geo):
    gamma, d = geo.christoffel, geo.dim
    rows = []
    for mu in range(d):
        per_mu = {}
        for a in range(d):
            entries = [(b, gamma[a, mu, b]) for b in range(d) if gamma[a, mu, b] != 0]
            if entries:
                per_mu[a] = entries
        rows.append(per_mu)
    return Connection(rows)


@register_connection(IndexKind.FRAME)
def _frame(geo):
    return Connection.from_matrices(geo.spin_connection)


def build_geometry(metric, ctx, vielbein=None):
    return GeometryCache(ctx, metric, vielbein)


def cotton(geo):
    return geo.cotton


def is_einstein(geo):
    """True, False, or None when the zero test is undecided."""
    return _verdict(geo.einstein_status())


def is_conformally_flat(geo):
    return _verdict(geo.conformally_flat_status())


def vielbein(geo):
    return geo.vielbein


def riemann_pair_symmetry(geo):
    """``R_{abcd} - R_{cdab}``; only the antisymmetries are imposed when the tensor is built."""
    R = geo.riemann_lowered
    return TensorField.from_function(
        (down(IndexKind.CURVED),) * 4, geo.dim,
        lambda a, b, c, e: R[a, b, c, e] - R[c, e, a, b],
    )


def weyl_trace(geo):
    """``g^{mr} W_{mnrs}``, which vanishes only when ``P`` is the right trace adjustment of Riemann."""
    d, ginv, W = geo.dim, geo.inverse_metric, geo.weyl
    return TensorField.from_function(
        (down(IndexKind.CURVED),) * 2, d,
        lambda n, s: sum(ginv[m, r] * W[m, n, r, s] for m in range(d) for r in range(d) if ginv[m, r] != 0),
    )


def bianchi_residuals(geo):
    """First and second Bianchi identities for the lowered Riemann tensor."""
    d, R = geo.dim, geo.riemann_lowered
    first = TensorField.from_function(
        (down(IndexKind.CURVED),) * 4, d,
        lambda a, b, c, e: R[a, b, c, e] + R[a, c, e, b] + R[a, e, b, c],
    )
    dR = covariant_derivative(R, geo)
    second = TensorField.from_function(
        (down(IndexKind.CURVED),) * 5, d,
        lambda lam, a, b, c, e: dR[lam, a, b, c, e] + dR[c, a, b, e, lam] + dR[e, a, b, lam, c],
    )
    return first, second
