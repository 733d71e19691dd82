"""
Shared plumbing for the field equation suites: a context with scalar calculus
helpers on top of :class:`~conformal.identities.IdentityContext`, and the
runner that turns ledger entries into a report.
"""
import logging
import time

import sympy as sp
from sympy.core.function import AppliedUndef

from conformal.expr import simplify
from conformal.identities import IdentityContext, run_identity
from conformal.reports import Report, skipped
from conformal.tensor import IndexKind, TensorField, apply_matrix, covariant_derivative, down, laplacian, up
from conformal.tractor import contract_with, thomas_D
from conformal.utils import HypothesisError, PoleWeightError, UnsupportedInput, parallel_map


logger = logging.getLogger(__name__)

CONSTANT_CURVATURE = "constant-curvature"
FLAT = "flat"
CONSTANT_SCALE = "constant-scale"


class SystemContext(IdentityContext):

    def require(self, hypothesis):
        geo = self.geo
        if hypothesis == CONSTANT_CURVATURE:
            if not geo.is_constant_curvature or not self.constant_scale:
                raise HypothesisError("needs a constant curvature background at constant scale")
            return
        if hypothesis == FLAT:
            if any(simplify(v) != 0 for v in geo.schouten) or not self.constant_scale:
                raise HypothesisError("needs a flat background at constant scale")
            return
        if hypothesis == CONSTANT_SCALE:
            if not self.constant_scale:
                raise HypothesisError("needs a constant scale")
            return
        super().require(hypothesis)

    @property
    def constant_scale(self):
        return all(simplify(sp.diff(self.sigma, x)) == 0 for x in self.geo.coords)

    @property
    def P(self):
        return self.geo.schouten_trace

    def i_dot_d(self, t):
        """``I_M D^M t``."""
        return contract_with(thomas_D(t, self.geo), 0, self.I, self.geo)

    # Scalar calculus

    def box(self, f):
        return laplacian(TensorField.scalar(f, self.d), self.geo).as_scalar()

    def dot(self, a, b):
        """``g^{mu nu} a_mu b_nu`` on curved lower components."""
        ginv, d = self.geo.inverse_metric, self.d
        return sum(ginv[m, n] * a[m] * b[n] for m in range(d) for n in range(d) if ginv[m, n] != 0)

    def divergence(self, covector):
        field = TensorField((down(IndexKind.CURVED),), self.d, dict(enumerate(covector)))
        derivative = covariant_derivative(field, self.geo)
        ginv, d = self.geo.inverse_metric, self.d
        return sum(ginv[m, n] * derivative[m, n] for m in range(d) for n in range(d) if ginv[m, n] != 0)

    # Frame calculus

    def frame_gradient(self, t):
        """``D_m t`` with a lower frame index first."""
        derivative = covariant_derivative(t, self.geo)
        return apply_matrix(derivative, 0, self.geo.inverse_vielbein, down(IndexKind.FRAME))

    def frame_grad_up(self, f):
        """``D^m f`` for a scalar expression."""
        eta = self.geo.ctx.eta
        return [eta[m, m] * v for m, v in enumerate(self.geo.frame_down(self.geo.gradient(f)))]

    def frame_vector(self, components, weight=0):
        return TensorField((up(IndexKind.FRAME),), self.d, dict(enumerate(components)), weight=weight)

    def frame_divergence(self, components):
        """``D_m V^m`` for frame upper components."""
        gradient = self.frame_gradient(self.frame_vector(components))
        return sum(gradient[m, m] for m in range(self.d))

    def frame_laplacian(self, components):
        """Bochner Laplacian of a frame vector, as frame upper components."""
        field = laplacian(self.frame_vector(components), self.geo)
        return [field[m] for m in range(self.d)]


def solve_linear(expr, unknown):
    """
    Solve ``expr = 0`` for a generic field ``unknown`` entering algebraically.
    Raises :class:`PoleWeightError` when the coefficient vanishes.
    """
    expr = sp.expand(expr)
    _check_algebraic(expr, [unknown])
    coefficient = simplify(sp.diff(expr, unknown))
    if coefficient == 0:
        raise PoleWeightError(f"The constraint does not determine {unknown}")
    return simplify(-expr.subs(unknown, 0) / coefficient)


def _check_algebraic(expr, unknowns):
    for derivative in expr.atoms(sp.Derivative):
        if derivative.expr in unknowns:
            raise UnsupportedInput(f"{derivative.expr} enters differentiated; the constraint is not algebraic")


def solve_linear_system(exprs, unknowns):
    """Solve ``exprs = 0`` for generic fields ``unknowns`` entering algebraically and linearly."""
    exprs = [sp.expand(e) for e in exprs]
    for expr in exprs:
        _check_algebraic(expr, unknowns)
    symbols = [sp.Dummy(f"u{i}") for i in range(len(unknowns))]
    replaced = [e.xreplace(dict(zip(unknowns, symbols))) for e in exprs]
    matrix, rhs = sp.linear_eq_to_matrix(replaced, symbols)
    matrix = matrix.applyfunc(simplify)
    if simplify(matrix.det()) == 0:
        raise PoleWeightError(f"The constraints do not determine {', '.join(map(str, unknowns))}")
    return [simplify(v) for v in matrix.LUsolve(rhs)]


def substitute(expr, rules):
    """Replace generic fields by expressions, derivatives included."""
    return simplify(sp.sympify(expr).subs(rules).doit())


def proportional(actual, expected):
    """
    ``(factor, residuals)`` with ``actual = factor * expected`` slot by slot.
    The factor is read off the first nonzero expected slot and must not depend
    on the fields; a field dependent factor is appended to the residuals.
    """
    pairs = [(sp.sympify(a), sp.sympify(e)) for a, e in zip(actual, expected)]
    reference = next(((a, e) for a, e in pairs if simplify(e) != 0), None)
    if reference is None:
        return sp.S.Zero, [a for a, _ in pairs]
    factor = simplify(reference[0] / reference[1])
    residuals = [a - factor * e for a, e in pairs]
    if factor.atoms(AppliedUndef):
        residuals.append(factor)
    return factor, residuals


def run_system(context, entries, suite, title):
    """Run ``entries`` (``Identity`` tuples) into a report; pole weights become skipped records."""
    report = Report(title=title)
    if context.d < 3:
        report.add(skipped(suite, "background", f"{suite}/preamble", "tractor systems need d >= 3"))
        return report
    logger.info("Running %s %s checks on %s", len(entries), suite, context.geo.ctx)

    def run(entry):
        start = time.monotonic()
        try:
            record = run_identity(context, entry, suite=suite)
        except (PoleWeightError, UnsupportedInput) as exc:
            record = skipped(suite, entry.name, entry.anchor, str(exc))
        return record, time.monotonic() - start

    for record, seconds in parallel_map(run, entries):
        report.add(record)
        report.time(f"{suite}/{record.name}", seconds)
    return report
