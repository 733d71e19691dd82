"""
Spin one half and three halves from tractor spinors.

Dirac: ``I^M Gamma^N D_MN Psi = 0`` with ``Pi_+ Psi = 0``.  In canonical
components the projector ties the bottom spinor to the top one,
``chi = -sqrt(-P/d) psi``, and the top slot becomes the massive Dirac equation
with ``m = sqrt(-P/2d)(d+2w)``.

Rarita-Schwinger: a tractor vector-spinor ``Psi^M`` with ``D.Psi = 0`` and
``Pi_+ Psi^M = 0``, field strength ``R^MNR = 3 D^[MN Psi^R]`` and equation
``R_M = Gamma_MNR I_S R^SNR``.  Its middle slot is the Townsend-covariantized
Rarita-Schwinger operator with the Stueckelberg spinor ``psi^+``.
"""
import itertools
import logging
from functools import lru_cache

import sympy as sp
from sympy.combinatorics import Permutation

from conformal import app_settings
from conformal.backgrounds import random_weyl_factor
from conformal.identities import CONFORMALLY_FLAT, Identity
from conformal.physics.base import (
    CONSTANT_CURVATURE,
    CONSTANT_SCALE,
    SystemContext,
    proportional,
    run_system,
    solve_linear_system,
)
from conformal.physics.mass import (
    HALF,
    THREE_HALVES,
    Convention,
    MassWeightQuery,
    bf_bound,
    linear_mass,
    mass_from_weight,
)
from conformal.spinor import (
    SPINOR_UP,
    TRACTOR_SPINOR_UP,
    Projectors,
    act,
    curved_gamma,
    dirac,
    dirac_thomas,
    generic_spinor,
    generic_tractor_spinor,
    halves,
    slash,
    tractor_spinor,
)
from conformal.tensor import IndexKind, TensorField, apply_matrix, covariant_derivative, down, permute, up
from conformal.tractor import (
    PLUS,
    TRACTOR_DOWN,
    TRACTOR_UP,
    canonical_X,
    contract_with,
    divergence,
    double_D,
    mid,
    minus,
    thomas_D,
    tractor_contract,
)
from conformal.utils import PoleWeightError, memoized
from conformal.weyl import WeylFactor, rescale


logger = logging.getLogger(__name__)

DIRAC_SUITE = "dirac"
RS_SUITE = "rs"

SQRT2 = sp.sqrt(2)


class FermionContext(SystemContext):
    """Clifford data and spinor calculus shared by the Dirac and Rarita-Schwinger systems."""

    def __init__(self, geo, sigma=None, weight=None):
        super().__init__(geo, sigma, weight)
        self.rep = geo.clifford
        self.size = self.rep.size

    @memoized
    def alpha(self):
        """``chi = alpha psi`` on the image of ``Pi_-``."""
        return -sp.sqrt(-self.P / self.d)

    @memoized
    def townsend(self):
        """``sqrt(-P/2d)``, the shift in ``D~_mu = D_mu - sqrt(-P/2d) gamma_mu``."""
        return sp.sqrt(-self.P / (2 * self.d))

    @memoized
    def projectors(self):
        return Projectors(self.scale, self.rep)

    @memoized
    def X_slash(self):
        return self.rep.tractor_gammas_lower[minus(self.d)]

    @memoized
    def I_slash(self):
        return self.rep.slash_tractor(self.I)

    def column(self, t, prefix=()):
        return sp.Matrix([t[prefix + (a,)] for a in range(t.shape[len(prefix)])])

    def slashed(self, field):
        """``D-slash`` of a spinor field, as a column."""
        return self.column(dirac(covariant_derivative(field, self.geo), self.geo))

    def spinor_field(self, column, weight=None):
        return TensorField((SPINOR_UP,), self.d, {(a,): v for a, v in enumerate(column)},
                           weight=self.w if weight is None else weight)

    def frame_spinor_field(self, columns, weight=None):
        """A vector-spinor from frame upper spinor columns."""
        return TensorField((up(IndexKind.FRAME), SPINOR_UP), self.d,
                           {(m, a): column[a] for m, column in enumerate(columns) for a in range(self.size)},
                           weight=self.w if weight is None else weight)

    def townsend_up(self, gradient, field, prefix=()):
        """``D~^n`` at frame index ``n`` from a frame gradient, for each ``n``."""
        eta, gammas = self.geo.ctx.eta, self.rep.gammas_lower
        return [
            eta[n, n] * (self.column(gradient, (n,) + prefix) - self.townsend * gammas[n] * self.column(field, prefix))
            for n in range(self.d)
        ]


def dirac_operator(psi, geo, scale):
    """``I_M Gamma_N D^{MN} Psi``."""
    return slash(contract_with(double_D(psi, geo), 0, scale, geo), 0, geo.clifford)


def weyl_factor(geo):
    """The Weyl factor used for rescale-and-recompute covariance checks."""
    return WeylFactor(random_weyl_factor(geo.ctx, seed=app_settings.CONFORMAL_RANDOM_SEED), geo.ctx)


# Dirac

class DiracSystem(FermionContext):
    """A generic weight ``w`` tractor spinor ``Psi = (psi, chi)``."""

    @memoized
    def psi(self):
        return generic_spinor(self.geo, "psi", self.w)

    @memoized
    def chi(self):
        return generic_spinor(self.geo, "chi", self.w)

    @memoized
    def Psi(self):
        return tractor_spinor(self.column(self.psi), self.column(self.chi), self.d, self.w)

    @memoized
    def projected(self):
        """``Psi = (psi, alpha psi)``, solving ``Pi_+ Psi = 0`` at constant scale."""
        psi = self.column(self.psi)
        return tractor_spinor(psi, self.alpha * psi, self.d, self.w)

    @memoized
    def E(self):
        return dirac_operator(self.Psi, self.geo, self.I)

    def halves_of(self, t):
        top, bottom = halves(t)
        return sp.Matrix(top[()]), sp.Matrix(bottom[()])


def component_pair(c):
    """``-sigma (D-slash psi + ((d+2w)/sqrt2) chi, -D-slash chi + ((d+2w) P/(sqrt2 d)) psi)``."""
    top, bottom = c.halves_of(c.E)
    shift = c.d + 2 * c.w
    psi, chi = c.column(c.psi), c.column(c.chi)
    expected_top = -c.sigma * (c.slashed(c.psi) + shift / SQRT2 * chi)
    expected_bottom = -c.sigma * (-c.slashed(c.chi) + shift * c.P / (SQRT2 * c.d) * psi)
    return list(top - expected_top) + list(bottom - expected_bottom)


def massive_dirac(c):
    """On ``Pi_+ Psi = 0`` both slots are multiples of ``(D-slash - m) psi``."""
    top, bottom = c.halves_of(dirac_operator(c.projected, c.geo, c.I))
    mass = linear_mass(c.d, c.w, c.P)
    wave = c.slashed(c.psi) - mass * c.column(c.psi)
    projector = c.projectors.plus() * c.column(c.projected)
    return list(top + c.sigma * wave) + list(bottom - c.sigma * c.alpha * wave) + list(projector)


def thomas_dirac_top(c):
    """Top slot of ``I^M Gamma^N D_MN Psi`` is ``-sigma/(d+2w-2)`` times the top slot of ``Gamma.D Psi``."""
    factor = c.d + 2 * c.w - 2
    if sp.simplify(factor) == 0:
        raise PoleWeightError("d + 2w = 2: Gamma.D Psi has no top slot")
    top, _ = c.halves_of(c.E)
    thomas_top, _ = c.halves_of(dirac_thomas(c.Psi, c.geo))
    return list(top + c.sigma / factor * thomas_top)


def thomas_dirac_solution(c):
    """``chi = -sqrt2 D-slash psi/(d+2w)`` solves the top slot of ``Gamma.D Psi = 0``."""
    shift = c.d + 2 * c.w
    if sp.simplify(shift) == 0 or sp.simplify(shift - 2) == 0:
        raise PoleWeightError("d + 2w in {0, 2}: Gamma.D Psi does not fix chi")
    chi = -SQRT2 * c.slashed(c.psi) / shift
    solved = tractor_spinor(c.column(c.psi), chi, c.d, c.w)
    top, _ = c.halves_of(dirac_thomas(solved, c.geo))
    return list(top)


def double_d_scale(c):
    """``D^{MN} sigma = X^N I^M - X^M I^N``."""
    dd = double_D(TensorField.scalar(c.sigma, c.d, weight=1), c.geo)
    X, I = c.X, c.I
    return [dd[M, N] - (X[N] * I[M] - X[M] * I[N]) for M, N in c.pairs()]


def double_d_scale_tractor(c):
    """``D_{MN} I^N = 0``."""
    return tractor_contract(double_D(c.scale.field, c.geo), 1, 2, c.geo)


def double_d_canonical(c):
    """``D^{MN} X^R = X^N eta^{MR} - X^M eta^{NR}``."""
    dd = double_D(canonical_X(c.d), c.geo)
    X, eta = c.X, c.eta
    return [dd[M, N, R] - (X[N] * eta[M, R] - X[M] * eta[N, R]) for M, N in c.pairs() for R in range(c.n)]


def x_double_d(c):
    """``X_M D^{MN} phi = w X^N phi``."""
    contracted = contract_with(c.DD_phi, 0, c.X, c.geo)
    return [contracted[N] - c.w * c.X[N] * c.phi.as_scalar() for N in range(c.n)]


def projector_hermiticity(c):
    """``Pi_- X-slash I-slash Pi_- = sigma Pi_-``."""
    minus_projector = c.projectors.minus()
    return list(minus_projector * c.X_slash * c.I_slash * minus_projector - c.sigma * minus_projector)


def massless_weight(c):
    """At ``w = -d/2``, ``X-slash I^M Gamma^N D_MN Psi / sigma = (0, -sqrt2 D-slash psi)`` for any scale."""
    system = DiracSystem(c.geo, c.geo.ctx.field("s"), -sp.Rational(c.d, 2))
    lifted = act(system.E, system.X_slash)
    top, bottom = system.halves_of(lifted)
    return list(top) + list(bottom + SQRT2 * system.sigma * system.slashed(system.psi))


def dirac_weyl_covariance(c):
    """``psi -> Omega^{(1-d)/2} psi`` sends ``D-slash psi -> Omega^{-(d+1)/2} D-slash psi``."""
    weyl = weyl_factor(c.geo)
    new = rescale(c.geo, weyl)
    psi = generic_spinor(c.geo)
    moved = psi * weyl.power(sp.Rational(1 - c.d, 2))
    lhs = dirac(covariant_derivative(moved, new), new)
    rhs = dirac(covariant_derivative(psi, c.geo), c.geo) * weyl.power(-sp.Rational(c.d + 1, 2))
    return lhs - rhs


def arbitrary_scale(c):
    """
    At any scale the top slot is ``-sigma (D-slash psi + ((d+2w)/sqrt2) chi)`` and
    ``Pi_+ Psi = 0`` reads ``sqrt(I.I) psi + sqrt2 sigma chi + (D-slash sigma) psi = 0``.
    """
    top, _ = c.halves_of(c.E)
    psi, chi = c.column(c.psi), c.column(c.chi)
    shift = c.d + 2 * c.w
    sigma_slash = c.rep.slash_frame(c.geo.frame_down(c.geo.gradient(c.sigma)))
    scale_top = (c.I_slash * c.column(c.Psi))[:c.size, :]
    return (list(top + c.sigma * (c.slashed(c.psi) + shift / SQRT2 * chi))
            + list(scale_top - (SQRT2 * c.sigma * chi + sigma_slash * psi)))


def dirac_mass_relation(c):
    d, w, P = sp.symbols("d w P")
    standard = mass_from_weight(MassWeightQuery.build(HALF, d, w, P))
    laplacian = mass_from_weight(MassWeightQuery.build(HALF, d, w, P, Convention.LAPLACIAN))
    return [
        sp.expand(linear_mass(d, w, P)**2 - standard),
        sp.expand(laplacian - standard - P * (d - 1) / 2),
        standard.subs(w, -d / 2),
    ]


DIRAC_ENTRIES = [
    Identity("component-pair", "dirac/component-pair", component_pair, CONSTANT_SCALE),
    Identity("massive-dirac", "dirac/massive-dirac", massive_dirac, CONSTANT_CURVATURE),
    Identity("thomas-dirac-top", "dirac/gamma-d-equivalence", thomas_dirac_top),
    Identity("thomas-dirac-solution", "dirac/gamma-d-equivalence", thomas_dirac_solution),
    Identity("double-d-scale", "dirac/hermiticity", double_d_scale),
    Identity("double-d-scale-tractor", "dirac/hermiticity", double_d_scale_tractor),
    Identity("double-d-canonical", "dirac/hermiticity", double_d_canonical),
    Identity("x-double-d", "dirac/hermiticity", x_double_d),
    Identity("projector-hermiticity", "dirac/hermiticity", projector_hermiticity),
    Identity("massless-weight", "dirac/massless-dirac", massless_weight),
    Identity("weyl-covariance", "dirac/massless-dirac", dirac_weyl_covariance),
    Identity("arbitrary-scale", "dirac/arbitrary-scale", arbitrary_scale),
    Identity("mass-relation", "dirac/mass-weight-relation", dirac_mass_relation),
]


def dirac_system(geo, sigma=None, weight=None, names=None):
    context = DiracSystem(geo, sigma, weight)
    entries = [e for e in DIRAC_ENTRIES if names is None or e.name in names]
    report = run_system(context, entries, DIRAC_SUITE, "Dirac")
    d, w, P = sp.symbols("d w P")
    report.set_quantity("dirac/mass", linear_mass(d, w, P))
    report.set_quantity("dirac/mass-squared", mass_from_weight(MassWeightQuery.build(HALF, d, w, P)))
    report.set_quantity("dirac/arbitrary-scale", "[D-slash - ((d+2w)/2)(b-slash + sqrt(I.I)/sigma)] psi = 0")
    return report


# Rarita-Schwinger

@lru_cache(maxsize=None)
def gamma_triple(rep, a, b, c):
    """``Gamma_[A Gamma_B Gamma_C]`` with lowered tractor indices."""
    G = rep.tractor_gammas_lower
    indices = (a, b, c)
    total = sp.zeros(2 * rep.size)
    for perm in itertools.permutations(range(3)):
        sign = Permutation(list(perm)).signature()
        total += sign * G[indices[perm[0]]] * G[indices[perm[1]]] * G[indices[perm[2]]]
    return total / 6


def rs_curvature(psi, geo):
    """``3 D^[MN Psi^R]``; the double D is antisymmetric so the cyclic sum suffices."""
    dd = double_D(psi, geo)
    return dd + permute(dd, (1, 2, 0, 3)) + permute(dd, (2, 0, 1, 3))


def rs_equation(curvature, scale, geo, slots=None, rows=None):
    """
    ``R_M = Gamma_MNR I_S R^SNR`` at the tractor indices ``slots`` and the
    first ``rows`` tractor spinor components (everything by default).
    """
    rep, n = geo.clifford, geo.dim + 2
    size = 2 * rep.size
    rows = size if rows is None else rows
    J = dict(contract_with(curvature, 0, scale, geo).items())
    columns = {}
    for N, R in itertools.combinations(range(n), 2):
        column = sp.Matrix([J.get((N, R, a), 0) for a in range(size)])
        if any(v != 0 for v in column):
            columns[N, R] = column
    components = {}
    for M in range(n) if slots is None else slots:
        total = sp.zeros(rows, 1)
        for (N, R), column in columns.items():
            if M not in (N, R):
                total += 2 * gamma_triple(rep, M, N, R)[:rows, :] * column
        components.update({(M, a): total[a] for a in range(rows)})
    return TensorField((TRACTOR_DOWN, TRACTOR_SPINOR_UP), geo.dim, components, weight=curvature.weight).simplify()


class RaritaSchwingerSystem(FermionContext):
    """
    ``Psi^M`` with top and middle slots ``(psi^M, alpha psi^M)``; the bottom
    slot is solved from ``D.Psi = 0``.  Without ``stueckelberg`` the top slot
    is zero.
    """

    def __init__(self, geo, sigma=None, weight=None, stueckelberg=True):
        super().__init__(geo, sigma, weight)
        self.stueckelberg = stueckelberg

    @memoized
    def top(self):
        if not self.stueckelberg:
            return generic_spinor(self.geo, "psip", self.w).map(lambda v: sp.S.Zero)
        return generic_spinor(self.geo, "psip", self.w)

    @memoized
    def middle(self):
        """Frame upper ``psi^m``."""
        ctx = self.geo.ctx
        return TensorField.from_function((up(IndexKind.FRAME), SPINOR_UP), self.d,
                                         lambda m, a: ctx.field(f"psi{m}_{a}"), weight=self.w)

    def assemble(self, bottom):
        d, n = self.d, self.size
        components = {}
        slots = [(PLUS, self.column(self.top))]
        slots += [(mid(m), self.column(self.middle, (m,))) for m in range(d)]
        for M, column in slots:
            for a in range(n):
                components[M, a] = column[a]
                components[M, n + a] = self.alpha * column[a]
        for a, value in enumerate(bottom):
            components[minus(d), a] = value
        return TensorField((TRACTOR_UP, TRACTOR_SPINOR_UP), d, components, weight=self.w)

    @memoized
    def solution(self):
        unknowns = [self.geo.ctx.field(f"psim{a}") for a in range(2 * self.size)]
        constraint = divergence(self.assemble(unknowns), self.geo)
        return solve_linear_system([constraint[a] for a in range(2 * self.size)], unknowns)

    @memoized
    def Psi(self):
        return self.assemble(self.solution)

    @memoized
    def curvature(self):
        return rs_curvature(self.Psi, self.geo)

    @memoized
    def equation(self):
        return rs_equation(self.curvature, self.I, self.geo)

    def equation_middle(self):
        """Top halves of the middle slots of ``R_M``, by lower frame index."""
        slots = [mid(m) for m in range(self.d)]
        equation = rs_equation(self.curvature, self.I, self.geo, slots=slots, rows=self.size)
        return [sp.Matrix([equation[M, a] for a in range(self.size)]) for M in slots]


def rarita_schwinger_operator(c, middle, top, weight=None):
    """
    ``gamma_mnr D~^n psi^r + sqrt(-2P/d) gamma_mn ((w+1) psi^n - D~^n psi^+)``
    for each lower frame index ``m``.
    """
    w = c.w if weight is None else weight
    gammas = c.rep.gammas_lower
    gradient = c.frame_gradient(middle)
    tilde = [c.townsend_up(gradient, middle, (r,)) for r in range(c.d)]
    tilde_top = c.townsend_up(c.frame_gradient(top), top)
    shifted = [(w + 1) * c.column(middle, (n,)) - tilde_top[n] for n in range(c.d)]
    result = []
    for m in range(c.d):
        total = sp.zeros(c.size, 1)
        for n, r in itertools.permutations(range(c.d), 2):
            if m in (n, r):
                continue
            total += gammas[m] * gammas[n] * gammas[r] * tilde[r][n]
        for n in range(c.d):
            if n != m:
                total += 2 * c.townsend * gammas[m] * gammas[n] * shifted[n]
        result.append(total)
    return result


def townsend_derivative(field, geo, shift):
    """``D~_mu = D_mu - shift gamma_mu`` on a field whose last slot is a spinor; the new index comes first."""
    first = covariant_derivative(field, geo)
    size = geo.clifford.size
    products, components = {}, {}
    for idx, value in first.items():
        mu, outer, a = idx[0], idx[1:-1], idx[-1]
        if (mu, outer) not in products:
            column = sp.Matrix([field[outer + (b,)] for b in range(size)])
            products[mu, outer] = curved_gamma(geo, mu) * column
        components[idx] = value - shift * products[mu, outer][a]
    return first.like(components)


def townsend_commutator(c):
    """``[D~_mu, D~_nu] epsilon = 0`` on spinors."""
    eps = generic_spinor(c.geo, "eps")
    twice = townsend_derivative(townsend_derivative(eps, c.geo, c.townsend), c.geo, c.townsend)
    return [twice[mu, nu, a] - twice[nu, mu, a]
            for mu in range(c.d) for nu in range(mu + 1, c.d) for a in range(c.size)]


def townsend_vector_spinor(c):
    """``[D~_mu, D~_nu] psi_rho = (2P/d)(g_{rho mu} psi_nu - g_{rho nu} psi_mu)``: no gamma term survives."""
    psi = generic_spinor(c.geo, curved=True)
    twice = townsend_derivative(townsend_derivative(psi, c.geo, c.townsend), c.geo, c.townsend)
    g, ratio = c.geo.metric, c.P / c.d
    residuals = []
    for mu in range(c.d):
        for nu in range(mu + 1, c.d):
            for rho in range(c.d):
                for a in range(c.size):
                    expected = 2 * ratio * (g[rho, mu] * psi[nu, a] - g[rho, nu] * psi[mu, a])
                    residuals.append(twice[mu, nu, rho, a] - twice[nu, mu, rho, a] - expected)
    return residuals


def field_constraint(c):
    """The solved bottom slot satisfies ``D.Psi = 0`` and every slot lies in the kernel of ``Pi_+``."""
    plus = c.projectors.plus()
    residuals = list(divergence(c.Psi, c.geo).values())
    for M in range(c.n):
        residuals += list(plus * c.column(c.Psi, (M,)))
    return residuals


def component_equation(c):
    """Middle top slots of ``R_M`` are proportional to the component operator."""
    actual = [v for column in c.equation_middle() for v in column]
    expected = [v for column in rarita_schwinger_operator(c, c.middle, c.top) for v in column]
    _, residuals = proportional(actual, expected)
    return residuals


def gauge_invariance(c):
    """``Psi -> D Xi`` leaves ``R^MNR`` unchanged."""
    xi = generic_tractor_spinor(c.geo, c.w + 1, top="xi", bottom="zeta")
    return rs_curvature(thomas_D(xi, c.geo), c.geo)


def gauge_constraint(c):
    """``D.(D Xi) = 0``, so the gauge shift preserves the field constraint."""
    xi = generic_tractor_spinor(c.geo, c.w + 1, top="xi", bottom="zeta")
    return divergence(thomas_D(xi, c.geo), c.geo)


def _gauge_parameter(c):
    eps = c.column(generic_spinor(c.geo, "eps", c.w + 1))
    return eps, tractor_spinor(eps, c.alpha * eps, c.d, c.w + 1)


def component_gauge(c):
    """``Xi = (eps, alpha eps)``: ``D^+ Xi`` tops ``(d+2w)(w+1) eps`` and ``D^m Xi`` tops ``(d+2w) D~^m eps``."""
    eps, xi = _gauge_parameter(c)
    shift = thomas_D(xi, c.geo)
    top, _ = halves(shift)
    eps_field = c.spinor_field(eps, c.w + 1)
    tilde = c.townsend_up(c.frame_gradient(eps_field), eps_field)
    factor = c.d + 2 * c.w
    residuals = list(sp.Matrix(top[(PLUS,)]) - factor * (c.w + 1) * eps)
    for m in range(c.d):
        residuals += list(sp.Matrix(top[(mid(m),)]) - factor * tilde[m])
    return residuals


def component_gauge_invariance(c):
    """``psi^m -> (d+2w) D~^m eps``, ``psi^+ -> (d+2w)(w+1) eps`` leaves the component operator unchanged."""
    eps, _ = _gauge_parameter(c)
    eps_field = c.spinor_field(eps, c.w + 1)
    factor = c.d + 2 * c.w
    tilde = c.townsend_up(c.frame_gradient(eps_field), eps_field)
    middle = c.frame_spinor_field([factor * t for t in tilde])
    top = c.spinor_field(factor * (c.w + 1) * eps)
    return [v for column in rarita_schwinger_operator(c, middle, top) for v in column]


def standard_mass_form(c):
    """With ``psi^+ = 0`` the operator is ``gamma_mnr D^n psi^r + m gamma_mn psi^n``."""
    zero = c.top.map(lambda v: sp.S.Zero)
    operator = rarita_schwinger_operator(c, c.middle, zero)
    gammas, eta = c.rep.gammas_lower, c.geo.ctx.eta
    gradient = c.frame_gradient(c.middle)
    mass = linear_mass(c.d, c.w, c.P)
    residuals = []
    for m in range(c.d):
        expected = sp.zeros(c.size, 1)
        for n, r in itertools.permutations(range(c.d), 2):
            if m not in (n, r):
                expected += eta[n, n] * gammas[m] * gammas[n] * gammas[r] * c.column(gradient, (n, r))
        for n in range(c.d):
            if n != m:
                expected += mass * gammas[m] * gammas[n] * c.column(c.middle, (n,))
        residuals += list(operator[m] - expected)
    return residuals


def integrability(c):
    """
    Divergence and gamma trace of the operator ``E_m`` without ``psi^+``, for
    generic ``psi^m`` with ``tr = gamma.psi`` and ``div = D.psi``:

        E_m = (D-slash - m) psi_m + gamma_m (D-slash + m) tr - D_m tr - gamma_m div
        gamma^m E_m = (d-2)(D-slash tr - div) + (d-1) m tr
        D^m E_m = -(P/2d)(d-1)(d-2) tr + m (D-slash tr - div)

    On shell and away from ``w = -1, 1 - d`` this forces ``tr = div = 0`` and
    then ``(D-slash - m) psi_m = 0``.
    """
    d, size, eta = c.d, c.size, c.geo.ctx.eta
    gammas, gammas_up = c.rep.gammas_lower, c.rep.gammas
    mass = linear_mass(d, c.w, c.P)
    operator = rarita_schwinger_operator(c, c.middle, c.top.map(lambda v: sp.S.Zero))
    gradient = c.frame_gradient(c.middle)
    slashed = dirac(covariant_derivative(c.middle, c.geo), c.geo)
    zero = sp.zeros(size, 1)
    trace = sum((gammas[r] * c.column(c.middle, (r,)) for r in range(d)), zero)
    div = sum((c.column(gradient, (r, r)) for r in range(d)), zero)
    trace_field = c.spinor_field(trace)
    trace_gradient = c.frame_gradient(trace_field)
    slashed_trace = c.slashed(trace_field)
    residuals = []
    for m in range(d):
        expected = (eta[m, m] * (c.column(slashed, (m,)) - mass * c.column(c.middle, (m,)))
                    + gammas[m] * (slashed_trace + mass * trace)
                    - c.column(trace_gradient, (m,)) - gammas[m] * div)
        residuals += list(operator[m] - expected)
    gamma_trace = sum((gammas_up[m] * operator[m] for m in range(d)), zero)
    residuals += list(gamma_trace - ((d - 2) * (slashed_trace - div) + (d - 1) * mass * trace))
    E = TensorField((down(IndexKind.FRAME), SPINOR_UP), d,
                    {(m, a): operator[m][a] for m in range(d) for a in range(size)}, weight=c.w - 1)
    E_gradient = c.frame_gradient(E)
    div_E = sum((eta[m, m] * c.column(E_gradient, (m, m)) for m in range(d)), zero)
    curvature_term = -c.P * (d - 1) * (d - 2) / (2 * d)
    residuals += list(div_E - (curvature_term * trace + mass * (slashed_trace - div)))
    return residuals


def weyl_tractor_constraints(c):
    """
    ``X.Psi = (psi^+, chi^+)`` and ``Gamma.X Gamma.Psi = (0, sqrt2 gamma.psi + 2 chi^+)``,
    so at ``w = -d/2`` the pair of constraints is ``psi^+ = chi^+ = gamma.psi = 0``.
    """
    d, size = c.d, c.size
    ctx = c.geo.ctx
    Psi = TensorField.from_function((TRACTOR_UP, TRACTOR_SPINOR_UP), d,
                                    lambda M, a: ctx.field(f"Psi{M}_{a}"), weight=-sp.Rational(d, 2))
    top_plus = [Psi[PLUS, a] for a in range(size)]
    bottom_plus = [Psi[PLUS, size + a] for a in range(size)]
    x_dot = contract_with(Psi, 0, c.X, c.geo)
    residuals = [x_dot[a] - v for a, v in enumerate(top_plus + bottom_plus)]
    trace = sum((c.rep.gammas_lower[m] * sp.Matrix([Psi[mid(m), a] for a in range(size)]) for m in range(d)),
                sp.zeros(size, 1))
    doubled = c.column(act(slash(Psi, 0, c.rep), c.X_slash))
    expected = list(sp.zeros(size, 1)) + list(SQRT2 * trace + 2 * sp.Matrix(bottom_plus))
    return residuals + [a - b for a, b in zip(doubled, expected)]


def massless_limit(c):
    """At ``w = -1`` without ``psi^+`` the equation is ``gamma_mnr D~^n psi^r = 0``."""
    system = RaritaSchwingerSystem(c.geo, c.sigma, -1, stueckelberg=False)
    actual = [v for column in system.equation_middle() for v in column]
    expected = [v for column in rarita_schwinger_operator(system, system.middle, system.top) for v in column]
    _, residuals = proportional(actual, expected)
    return residuals


def _gamma_traceless(c):
    """Frame upper ``psi^m`` with ``gamma_m psi^m = 0``, the last slot solved."""
    gammas, last = c.rep.gammas_lower, c.d - 1
    columns = [sp.Matrix([c.geo.ctx.field(f"psi{m}_{a}") for a in range(c.size)]) for m in range(last)]
    trace = sum((gammas[m] * columns[m] for m in range(last)), sp.zeros(c.size, 1))
    columns.append(-c.geo.ctx.eta[last, last] * gammas[last] * trace)
    return columns


def weyl_invariant_operator(c, field, geo):
    """``D-slash psi^m - (2/d) gamma^m D.psi`` on a frame upper vector-spinor."""
    first = covariant_derivative(field, geo)
    slashed = dirac(first, geo)
    gradient = apply_matrix(first, 0, geo.inverse_vielbein, down(IndexKind.FRAME))
    div = sum((c.column(gradient, (m, m)) for m in range(c.d)), sp.zeros(c.size, 1))
    return [c.column(slashed, (m,)) - sp.Rational(2, c.d) * c.rep.gammas[m] * div for m in range(c.d)]


def weyl_invariant(c):
    """
    At ``w = -d/2`` with ``gamma.psi = 0``, ``psi^m -> Omega^{(1-d)/2} psi^m``
    sends the operator to ``Omega^{-(d+1)/2}`` times itself.
    """
    weyl = weyl_factor(c.geo)
    new = rescale(c.geo, weyl)
    columns = _gamma_traceless(c)
    field = c.frame_spinor_field(columns, -sp.Rational(c.d, 2))
    moved = field * weyl.power(sp.Rational(1 - c.d, 2))
    lhs = weyl_invariant_operator(c, moved, new)
    rhs = weyl_invariant_operator(c, field, c.geo)
    factor = weyl.power(-sp.Rational(c.d + 1, 2))
    return [v for a, b in zip(lhs, rhs) for v in a - factor * b]


def rs_mass_relation(c):
    """``mu^2 = -(2P/d)[(w + 1/2 + (d-1)/2)^2 - d(d-1)/4 - 1]`` and its bound."""
    d, w, P = sp.symbols("d w P")
    laplacian = mass_from_weight(MassWeightQuery.build(THREE_HALVES, d, w, P, Convention.LAPLACIAN))
    tabulated = -2 * P / d * ((w + sp.Rational(1, 2) + (d - 1) / 2)**2 - d * (d - 1) / 4 - 1)
    bound = bf_bound(THREE_HALVES, d, P, Convention.LAPLACIAN)
    return [
        sp.expand(laplacian - tabulated),
        sp.expand(bound - P * (d * (d - 1) + 4) / (2 * d)),
        sp.expand(linear_mass(d, w, P)**2 - mass_from_weight(MassWeightQuery.build(THREE_HALVES, d, w, P))),
    ]


RS_ENTRIES = [
    Identity("townsend-commutator", "rs/townsend-derivative", townsend_commutator, CONSTANT_CURVATURE),
    Identity("townsend-vector-spinor", "rs/townsend-derivative", townsend_vector_spinor, CONSTANT_CURVATURE),
    Identity("field-constraint", "rs/field-constraint", field_constraint, CONSTANT_CURVATURE),
    Identity("component-equation", "rs/component-equation", component_equation, CONSTANT_CURVATURE),
    Identity("gauge-invariance", "rs/gauge", gauge_invariance, CONFORMALLY_FLAT),
    Identity("gauge-constraint", "rs/gauge", gauge_constraint, CONFORMALLY_FLAT),
    Identity("component-gauge", "rs/component-gauge", component_gauge, CONSTANT_CURVATURE),
    Identity("component-gauge-invariance", "rs/component-gauge", component_gauge_invariance, CONSTANT_CURVATURE),
    Identity("standard-mass-form", "rs/massive-form", standard_mass_form, CONSTANT_CURVATURE),
    Identity("integrability", "rs/massive-form", integrability, CONSTANT_CURVATURE),
    Identity("massless-limit", "rs/massless-limit", massless_limit, CONSTANT_CURVATURE),
    Identity("weyl-invariant", "rs/weyl-invariant", weyl_invariant),
    Identity("weyl-tractor-constraints", "rs/weyl-invariant", weyl_tractor_constraints),
    Identity("mass-relation", "rs/mass-weight-relation", rs_mass_relation),
]


def rarita_schwinger_system(geo, sigma=None, weight=None, names=None):
    context = RaritaSchwingerSystem(geo, sigma, weight)
    entries = [e for e in RS_ENTRIES if names is None or e.name in names]
    report = run_system(context, entries, RS_SUITE, "Rarita-Schwinger")
    d, w, P = sp.symbols("d w P")
    report.set_quantity("rs/mass", linear_mass(d, w, P))
    report.set_quantity("rs/mu-squared",
                        mass_from_weight(MassWeightQuery.build(THREE_HALVES, d, w, P, Convention.LAPLACIAN)))
    report.set_quantity("rs/bf-bound", bf_bound(THREE_HALVES, d, P, Convention.LAPLACIAN))
    report.set_quantity(
        "rs/arbitrary-scale",
        "gamma^mnr D_n psi_r + ((d+2w)/2) gamma^mn (b-slash + sqrt(I.I)/sigma) psi_n - (w+1) gamma^m b.psi = 0",
    )
    return report


def component_equation_for(geo, spin, sigma=None, weight=None):
    """The tractor equation of the fermionic system, for the ``eom`` command."""
    if spin == HALF:
        return DiracSystem(geo, sigma, weight).E
    return RaritaSchwingerSystem(geo, sigma, weight).equation
