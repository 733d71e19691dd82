"""
Spinor identity ledger: Clifford invariants, slashed tractor relations,
curvature identities on constant curvature backgrounds and the component
form of tractor spinor operators.
"""
import logging
import time

import sympy as sp

from conformal.identities import (
    CONFORMALLY_FLAT,
    EINSTEIN_SCALE,
    Identity,
    IdentityContext,
    run_identity,
)
from conformal.reports import Report, apply_discrepancies, check, load_discrepancies, skipped
from conformal.tensor import TensorField, covariant_derivative, laplacian
from conformal.tractor import contract_with, double_D, minus, thomas_D, transform_tractor
from conformal.spinor import (
    Projectors,
    act,
    curved_gamma,
    curved_to_frame,
    dirac,
    dirac_thomas,
    generic_spinor,
    generic_tractor_spinor,
    halves,
    slash,
    spinor_gauge_U,
    spinor_gauge_residuals,
    gamma_parallel_residuals,
)
from conformal.utils import GeometryUnavailable, HypothesisError, UnsupportedInput, memoized, parallel_map
from conformal.weyl import rescale


logger = logging.getLogger(__name__)

SUITE = "spinor-identities"

CONSTANT_CURVATURE = "constant-curvature"
LORENTZIAN = "lorentzian"


class SpinorContext(IdentityContext):
    """Adds a generic tractor spinor ``Psi = (psi, chi)`` of weight ``w``."""

    def __init__(self, geo, sigma=None, weight=None):
        super().__init__(geo, sigma, weight)
        self.rep = geo.clifford
        self.size = 2 * self.rep.size

    def require(self, hypothesis):
        if hypothesis == CONSTANT_CURVATURE and not self.geo.is_constant_curvature:
            raise HypothesisError("background is not of constant curvature")
        if hypothesis == LORENTZIAN and self.rep.conjugation() is None:
            raise HypothesisError("conjugation needs Lorentzian signature")
        super().require(hypothesis)

    @memoized
    def psi(self):
        return generic_tractor_spinor(self.geo, self.w)

    @memoized
    def X_slash(self):
        return self.rep.tractor_gammas_lower[minus(self.d)]

    @memoized
    def I_slash(self):
        return self.rep.slash_tractor(self.I)

    @memoized
    def D_psi(self):
        return thomas_D(self.psi, self.geo)

    @memoized
    def D_slash_psi(self):
        return slash(self.D_psi, 0, self.rep)

    @memoized
    def DD_psi(self):
        return double_D(self.psi, self.geo)

    def x_slash(self, t):
        result = act(t, self.X_slash)
        result.weight = t.weight + 1
        return result

    def times_sigma(self, t):
        return TensorField(t.slots, t.dim, {k: self.sigma * v for k, v in t.items()}, weight=t.weight + 1)

    def d_slash(self, t):
        return dirac_thomas(t, self.geo)

    def i_dot_d(self, t):
        return contract_with(thomas_D(t, self.geo), 0, self.I, self.geo)

    def gamma_gamma_dd(self, t):
        """``Gamma_M Gamma_N D^{MN} t``."""
        dd = double_D(t, self.geo)
        return slash(slash(dd, 1, self.rep), 0, self.rep)

    def gamma_i_dd(self, t):
        """``Gamma_M I_N D^{MN} t``."""
        return slash(contract_with(double_D(t, self.geo), 1, self.I, self.geo), 0, self.rep)

    def matrix(self, t, matrix):
        return act(t, matrix)


# Clifford algebra

def clifford(c):
    return c.rep.clifford_residuals() + c.rep.tractor_clifford_residuals()


def closure(c):
    return c.rep.closure_residuals()


def null_x_slash(c):
    return c.rep.null_square_residuals()


def conjugation(c):
    return c.rep.conjugation_residuals()


def gamma_parallel(c):
    return gamma_parallel_residuals(c.geo)


def x_slash_gamma_pair(c):
    """``[X-slash, Gamma_RS] = 2 (X_R Gamma_S - X_S Gamma_R)``."""
    G = c.rep.tractor_gammas_lower
    X_lower = [1 if a == 0 else 0 for a in range(c.n)]
    residuals = []
    for R in range(c.n):
        for S in range(R + 1, c.n):
            pair = c.rep.tractor_pair(R, S, lower=True)
            lhs = c.X_slash * pair - pair * c.X_slash
            residuals += list(lhs - 2 * (X_lower[R] * G[S] - X_lower[S] * G[R]))
    return residuals


def projectors(c):
    return Projectors(c.scale, c.rep).residuals()


# Slashed tractor relations

def slashed_d_sigma(c):
    """``[D-slash, sigma] = 2 Gamma^M I^N D_MN + (d+2w) I-slash``."""
    commutator = c.d_slash(c.times_sigma(c.psi)) - c.times_sigma(c.D_slash_psi)
    expected = c.gamma_i_dd(c.psi) * 2 + c.matrix(c.psi, c.I_slash) * (c.d + 2 * c.w)
    return commutator - expected


def x_slash_i_dot_d(c):
    """``[X-slash, I.D] = 2 Gamma^M I^N D_MN - (d+2w) I-slash``."""
    commutator = c.x_slash(c.i_dot_d(c.psi)) - c.i_dot_d(c.x_slash(c.psi))
    expected = c.gamma_i_dd(c.psi) * 2 - c.matrix(c.psi, c.I_slash) * (c.d + 2 * c.w)
    return commutator - expected


def _x_slash_d_slash_commutator(c):
    return c.x_slash(c.D_slash_psi) - c.d_slash(c.x_slash(c.psi))


def x_slash_d_slash_commutator(c):
    """``[X-slash, D-slash] = 2 Gamma^M Gamma^N D_MN - (d+2w)(d+2)``."""
    expected = c.gamma_gamma_dd(c.psi) * 2 - c.psi * ((c.d + 2 * c.w) * (c.d + 2))
    return _x_slash_d_slash_commutator(c) - expected


def x_slash_d_slash_commutator_corrected(c):
    """``[X-slash, D-slash] = -(d+2w)(Gamma^M Gamma^N D_MN + d + 2)``."""
    expected = (c.gamma_gamma_dd(c.psi) + c.psi * (c.d + 2)) * -(c.d + 2 * c.w)
    return _x_slash_d_slash_commutator(c) - expected


def _d_slash_x_slash_twice(c):
    """``2 (D-slash X-slash - D.X)``, that is ``{X-slash, D-slash} - [X-slash, D-slash] - 2 D.X``."""
    d_dot_x = c.psi * ((c.d + c.w) * (c.d + 2 * c.w + 2))
    return (c.d_slash(c.x_slash(c.psi)) - d_dot_x) * 2


def x_slash_d_slash_anticommutator(c):
    """``{X-slash, D-slash} = [X-slash, D-slash] + 2 D.X``."""
    return _d_slash_x_slash_twice(c)


def x_slash_d_slash_anticommutator_corrected(c):
    """``{X-slash, D-slash} = [X-slash, D-slash] + 2 D.X + (d+2w+2) Gamma^M Gamma^N D_MN``."""
    return _d_slash_x_slash_twice(c) - c.gamma_gamma_dd(c.psi) * (c.d + 2 * c.w + 2)


def x_slash_d_index(c):
    """``[X-slash, D^M] = 2 Gamma_N D^{NM} - (d+2w) Gamma^M``."""
    commutator = act(c.D_psi, c.X_slash) - thomas_D(c.x_slash(c.psi), c.geo)
    gammas = TensorField(c.D_psi.slots, c.d, {
        (M, a): sum(c.rep.tractor_gammas[M][a, b] * c.psi[b] for b in range(c.size))
        for M in range(c.n) for a in range(c.size)
    })
    return commutator - (slash(c.DD_psi, 0, c.rep) * 2 - gammas * (c.d + 2 * c.w))


def gamma_gamma_double_d(c):
    """``Gamma^M Gamma^N D_MN = 2 (w - X-slash D-slash/(d+2w-2))``."""
    expected = (c.psi * c.w - c.x_slash(c.D_slash_psi) * (1 / (c.d + 2 * c.w - 2))) * 2
    return c.gamma_gamma_dd(c.psi) - expected


def gamma_i_double_d(c):
    """``Gamma^M I^N D_MN = (sigma D-slash - X-slash I.D)/(d+2w-2)``."""
    expected = (c.times_sigma(c.D_slash_psi) - c.x_slash(c.i_dot_d(c.psi))) * (1 / (c.d + 2 * c.w - 2))
    return c.gamma_i_dd(c.psi) - expected


def gamma_i_double_d_dirac(c):
    """``Gamma^M I^N D_MN D-slash = -X-slash I.D D-slash/(d+2w-4)``."""
    inner = c.D_slash_psi
    expected = c.x_slash(c.i_dot_d(inner)) * (-1 / (c.d + 2 * c.w - 4))
    return c.gamma_i_dd(inner) - expected


def gamma_i_double_d_x_slash(c):
    """``Gamma^M I^N D_MN X-slash = (sigma(d+2) - X-slash I-slash)/d``."""
    lhs = c.gamma_i_dd(c.x_slash(c.psi))
    x_i = c.matrix(c.psi, c.X_slash * c.I_slash)
    return lhs - (c.psi * (c.sigma * (c.d + 2)) - x_i) * sp.Rational(1, c.d)


def gamma_i_double_d_x_slash_corrected(c):
    """``Gamma^M I^N D_MN X-slash = sigma(d+2w+2) - X-slash I-slash - X-slash Gamma^M I^N D_MN``."""
    lhs = c.gamma_i_dd(c.x_slash(c.psi))
    x_i = c.matrix(c.psi, c.X_slash * c.I_slash)
    return lhs - (c.psi * (c.sigma * (c.d + 2 * c.w + 2)) - x_i - c.x_slash(c.gamma_i_dd(c.psi)))


def _projector_pairs(c):
    """``(Gamma^M I^N D_MN Pi_pm, Pi_mp Gamma^M I^N D_MN)`` for both signs."""
    pi = Projectors(c.scale, c.rep)
    return [
        (c.gamma_i_dd(c.matrix(c.psi, this)), c.matrix(c.gamma_i_dd(c.psi), other))
        for this, other in ((pi.plus(), pi.minus()), (pi.minus(), pi.plus()))
    ]


def gamma_i_double_d_projector(c):
    """``Gamma^M I^N D_MN Pi_pm = -Pi_mp Gamma^M I^N D_MN``."""
    return [lhs + rhs for lhs, rhs in _projector_pairs(c)]


def gamma_i_double_d_projector_corrected(c):
    """``Gamma^M I^N D_MN Pi_pm = Pi_mp Gamma^M I^N D_MN``, so it anticommutes with ``I-slash``."""
    return [lhs - rhs for lhs, rhs in _projector_pairs(c)]


def x_slash_projector(c):
    """``X-slash Pi_pm = 2 sigma - Pi_mp X-slash``."""
    pi = Projectors(c.scale, c.rep)
    X = c.X_slash
    identity = sp.eye(c.size)
    return (list(X * pi.plus() - (2 * c.sigma * identity - pi.minus() * X))
            + list(X * pi.minus() - (2 * c.sigma * identity - pi.plus() * X)))


def x_slash_projector_corrected(c):
    """``X-slash Pi_pm = Pi_mp X-slash pm sigma/sqrt(I.I)`` from ``{X-slash, I-slash} = 2 sigma``."""
    pi = Projectors(c.scale, c.rep)
    X = c.X_slash
    shift = c.sigma / pi.root * sp.eye(c.size)
    return list(X * pi.plus() - (pi.minus() * X + shift)) + list(X * pi.minus() - (pi.plus() * X - shift))


def x_slash_d_slash(c):
    """``X-slash D-slash = (d+2w)(d+2w-2) - ((d+2w-2)/(d+2w+2)) D-slash X-slash``."""
    dx = c.d_slash(c.x_slash(c.psi))
    lhs = c.x_slash(c.D_slash_psi)
    return lhs - (c.psi * ((c.d + 2 * c.w) * (c.d + 2 * c.w - 2))
                  - dx * ((c.d + 2 * c.w - 2) / (c.d + 2 * c.w + 2)))


# Curvature identities

def spinor_commutator(c):
    """``[D_mu, D_nu] psi = (P/d) gamma_{mu nu} psi``."""
    psi = generic_spinor(c.geo)
    second = covariant_derivative(covariant_derivative(psi, c.geo), c.geo)
    ratio = c.geo.schouten_trace / c.d
    residuals = []
    for mu in range(c.d):
        for nu in range(mu + 1, c.d):
            g_mu, g_nu = curved_gamma(c.geo, mu), curved_gamma(c.geo, nu)
            pair = (g_mu * g_nu - g_nu * g_mu) / 2
            rotated = pair * sp.Matrix([psi[a] for a in range(c.rep.size)])
            residuals += [second[mu, nu, a] - second[nu, mu, a] - ratio * rotated[a] for a in range(c.rep.size)]
    return residuals


def vector_spinor_commutator(c):
    """``[D_mu, D_nu] psi_rho = (P/d) gamma_{mu nu} psi_rho + (2P/d)(g_{rho mu} psi_nu - g_{rho nu} psi_mu)``."""
    psi = generic_spinor(c.geo, curved=True)
    second = covariant_derivative(covariant_derivative(psi, c.geo), c.geo)
    g, ratio, n = c.geo.metric, c.geo.schouten_trace / c.d, c.rep.size
    residuals = []
    for mu in range(c.d):
        for nu in range(mu + 1, c.d):
            g_mu, g_nu = curved_gamma(c.geo, mu), curved_gamma(c.geo, nu)
            pair = (g_mu * g_nu - g_nu * g_mu) / 2
            for rho in range(c.d):
                rotated = pair * sp.Matrix([psi[rho, a] for a in range(n)])
                for a in range(n):
                    expected = ratio * rotated[a] + 2 * ratio * (g[rho, mu] * psi[nu, a] - g[rho, nu] * psi[mu, a])
                    residuals.append(second[mu, nu, rho, a] - second[nu, mu, rho, a] - expected)
    return residuals


def dirac_square(c):
    """``D-slash^2 psi = [Delta - (P/2)(d-1)] psi``."""
    psi = generic_spinor(c.geo)
    once = dirac(covariant_derivative(psi, c.geo), c.geo)
    twice = dirac(covariant_derivative(once, c.geo), c.geo)
    P = c.geo.schouten_trace
    return twice - laplacian(psi, c.geo) + psi * (P * (c.d - 1) / 2)


def vector_spinor_dirac_square(c):
    """
    ``D-slash^2 psi_rho = [Delta - P(d^2-d+4)/(2d)] psi_rho + (2P/d) gamma_rho gamma.psi``;
    the last term drops for gamma-traceless fields.
    """
    psi = generic_spinor(c.geo, curved=True)
    once = dirac(covariant_derivative(psi, c.geo), c.geo, position=0)
    twice = dirac(covariant_derivative(once, c.geo), c.geo, position=0)
    P, d, n = c.geo.schouten_trace, c.d, c.rep.size
    trace = slash(curved_to_frame(psi, 0, c.geo), 0, c.rep)
    trace_column = sp.Matrix([trace[a] for a in range(n)])
    expected = laplacian(psi, c.geo) - psi * (P * (d * d - d + 4) / (2 * d))
    correction = TensorField(psi.slots, d, {
        (rho, a): (2 * P / d) * (curved_gamma(c.geo, rho) * trace_column)[a] for rho in range(d) for a in range(n)
    })
    return twice - expected - correction


# Tractor spinor components

class _Components:
    """Spinor-level ingredients of the tractor spinor component tables."""

    def __init__(self, c):
        geo, rep = c.geo, c.rep
        self.c = c
        self.n = rep.size
        self.psi = generic_spinor(geo, "psi")
        self.chi = generic_spinor(geo, "chi")
        self.d_psi = covariant_derivative(self.psi, geo)
        self.d_chi = covariant_derivative(self.chi, geo)
        E, eta, d = geo.inverse_vielbein, geo.ctx.eta, geo.dim
        P = geo.frame_schouten_lowered
        self.P_frame = sp.Matrix(d, d, lambda m, n: eta[m, m] * sum(E[m, mu] * P[mu, n] for mu in range(d)))

    def column(self, t, prefix=()):
        return sp.Matrix([t[prefix + (a,)] for a in range(self.n)])

    def frame_up(self, first, m):
        geo = self.c.geo
        E, eta = geo.inverse_vielbein, geo.ctx.eta
        return eta[m, m] * sum((E[m, mu] * self.column(first, (mu,)) for mu in range(geo.dim)),
                               sp.zeros(self.n, 1))

    def p_slash_up(self, m):
        """``P^m_n gamma^n``."""
        return self.c.rep.slash_frame([self.P_frame[m, k] for k in range(self.c.d)])

    def dirac(self, field):
        return self.column(dirac(covariant_derivative(field, self.c.geo), self.c.geo))

    def p_slash_gradient(self):
        """``P_{mu n} gamma^n D^mu psi``."""
        total = sp.zeros(self.n, 1)
        for m in range(self.c.d):
            total += self.p_slash_up(m) * self.frame_up(self.d_psi, m) * self.c.geo.ctx.eta[m, m]
        return total

    def divergence_p_slash(self):
        """``gamma^nu D^mu P_{mu nu}``."""
        geo = self.c.geo
        d, ginv = geo.dim, geo.inverse_metric
        dP = covariant_derivative(geo.schouten_field, geo)
        v = [sum(ginv[lam, mu] * dP[lam, mu, nu] for lam in range(d) for mu in range(d) if ginv[lam, mu] != 0)
             for nu in range(d)]
        return self.c.rep.slash_frame(geo.frame_down(v))

    def laplacian(self, field):
        return self.column(laplacian(field, self.c.geo))


def tractor_spinor_middle(c):
    """``D^m Psi = (d+2w-2)(D^m psi + gamma^m chi/sqrt2, D^m chi - Pslash^m psi/sqrt2)``."""
    parts = _Components(c)
    factor = c.d + 2 * c.w - 2
    top, bottom = halves(c.D_psi)
    residuals = []
    for m in range(c.d):
        expected_top = factor * (parts.frame_up(parts.d_psi, m) + c.rep.gammas[m] * parts.column(parts.chi) / sp.sqrt(2))
        expected_bottom = factor * (parts.frame_up(parts.d_chi, m)
                                    - parts.p_slash_up(m) * parts.column(parts.psi) / sp.sqrt(2))
        residuals += [a - b for a, b in zip(top[(m + 1,)], expected_top)]
        residuals += [a - b for a, b in zip(bottom[(m + 1,)], expected_bottom)]
    return residuals


def tractor_spinor_laplacian(c):
    """
    ``D.D Psi = ((Delta - P/2) psi + sqrt2 Dslash chi,
    (Delta - P/2) chi - sqrt2 Pslash_mu D^mu psi - (Dslash P) psi/sqrt2)``.
    """
    parts = _Components(c)
    P = c.geo.schouten_trace
    top, bottom = halves(laplacian(c.psi, c.geo))
    psi, chi = parts.column(parts.psi), parts.column(parts.chi)
    expected_top = parts.laplacian(parts.psi) - P / 2 * psi + sp.sqrt(2) * parts.dirac(parts.chi)
    expected_bottom = (parts.laplacian(parts.chi) - P / 2 * chi - sp.sqrt(2) * parts.p_slash_gradient()
                       - parts.divergence_p_slash() * psi / sp.sqrt(2))
    return [a - b for a, b in zip(top[()], expected_top)] + [a - b for a, b in zip(bottom[()], expected_bottom)]


def tractor_spinor_thomas(c):
    """Top ``w(d+2w-2) Psi`` and bottom ``-(D.D + w P) Psi`` of the Thomas D on a tractor spinor."""
    parts = _Components(c)
    P, w = c.geo.schouten_trace, c.w
    top, bottom = halves(c.D_psi)
    psi, chi = parts.column(parts.psi), parts.column(parts.chi)
    factor = w * (c.d + 2 * w - 2)
    residuals = [a - factor * b for a, b in zip(top[(0,)], psi)]
    residuals += [a - factor * b for a, b in zip(bottom[(0,)], chi)]
    shift = (w - sp.Rational(1, 2)) * P
    expected_top = -(parts.laplacian(parts.psi) + shift * psi) - sp.sqrt(2) * parts.dirac(parts.chi)
    expected_bottom = (-(parts.laplacian(parts.chi) + shift * chi) + sp.sqrt(2) * parts.p_slash_gradient()
                       + parts.divergence_p_slash() * psi / sp.sqrt(2))
    last = (c.n - 1,)
    residuals += [a - b for a, b in zip(top[last], expected_top)]
    residuals += [a - b for a, b in zip(bottom[last], expected_bottom)]
    return residuals


SPINOR_IDENTITIES = [
    Identity("clifford", "spinor-identities/clifford", clifford),
    Identity("so-d2-closure", "spinor-identities/so-d-2-closure", closure),
    Identity("x-slash-null", "spinor-identities/x-slash-null", null_x_slash),
    Identity("conjugation", "spinor-identities/conjugation", conjugation, LORENTZIAN),
    Identity("gamma-parallel", "spinor-identities/gamma-parallel", gamma_parallel),
    Identity("x-slash-gamma-pair", "spinor-identities/x-slash-gamma-pair", x_slash_gamma_pair),
    Identity("projectors", "spinor-identities/projectors", projectors),
    Identity("slashed-d-sigma", "spinor-identities/d-slash-sigma", slashed_d_sigma),
    Identity("x-slash-i-dot-d", "spinor-identities/x-slash-i-dot-d", x_slash_i_dot_d),
    Identity("x-slash-d-slash-commutator", "spinor-identities/x-slash-d-slash-commutator",
             x_slash_d_slash_commutator),
    Identity("x-slash-d-slash-commutator/corrected", "spinor-identities/x-slash-d-slash-commutator",
             x_slash_d_slash_commutator_corrected),
    Identity("x-slash-d-slash-anticommutator", "spinor-identities/x-slash-d-slash-anticommutator",
             x_slash_d_slash_anticommutator),
    Identity("x-slash-d-slash-anticommutator/corrected", "spinor-identities/x-slash-d-slash-anticommutator",
             x_slash_d_slash_anticommutator_corrected),
    Identity("x-slash-d-index", "spinor-identities/x-slash-d-index", x_slash_d_index),
    Identity("gamma-gamma-double-d", "spinor-identities/gamma-gamma-double-d", gamma_gamma_double_d),
    Identity("gamma-i-double-d", "spinor-identities/gamma-i-double-d", gamma_i_double_d),
    Identity("gamma-i-double-d-dirac", "spinor-identities/gamma-i-double-d-d-slash", gamma_i_double_d_dirac,
             CONFORMALLY_FLAT),
    Identity("gamma-i-double-d-x-slash", "spinor-identities/gamma-i-double-d-x-slash", gamma_i_double_d_x_slash),
    Identity("gamma-i-double-d-x-slash/corrected", "spinor-identities/gamma-i-double-d-x-slash",
             gamma_i_double_d_x_slash_corrected),
    Identity("gamma-i-double-d-projector", "spinor-identities/gamma-i-double-d-projector",
             gamma_i_double_d_projector, EINSTEIN_SCALE),
    Identity("gamma-i-double-d-projector/corrected", "spinor-identities/gamma-i-double-d-projector",
             gamma_i_double_d_projector_corrected, EINSTEIN_SCALE),
    Identity("x-slash-projector", "spinor-identities/x-slash-projector", x_slash_projector),
    Identity("x-slash-projector/corrected", "spinor-identities/x-slash-projector", x_slash_projector_corrected),
    Identity("x-slash-d-slash", "spinor-identities/x-slash-d-slash", x_slash_d_slash),
    Identity("spinor-commutator", "curvature-identities/spinor-commutator", spinor_commutator, CONSTANT_CURVATURE),
    Identity("vector-spinor-commutator", "curvature-identities/vector-spinor-commutator",
             vector_spinor_commutator, CONSTANT_CURVATURE),
    Identity("dirac-square", "curvature-identities/dirac-square", dirac_square, CONSTANT_CURVATURE),
    Identity("vector-spinor-dirac-square", "curvature-identities/vector-spinor-dirac-square",
             vector_spinor_dirac_square, CONSTANT_CURVATURE),
    Identity("tractor-spinor-middle", "tractor-spinor-components/d-middle", tractor_spinor_middle),
    Identity("tractor-spinor-laplacian", "tractor-spinor-components/laplacian", tractor_spinor_laplacian),
    Identity("tractor-spinor-thomas", "tractor-spinor-components/thomas-d", tractor_spinor_thomas),
]


def _run(context, identity):
    try:
        return run_identity(context, identity, suite=SUITE)
    except UnsupportedInput as exc:
        return skipped(SUITE, identity.name, identity.anchor, str(exc))


def spinor_identity_suite(geo, sigma=None, weight=None, names=None, weyl=None):
    """The spinor ledger; with a Weyl factor the spinor gauge checks are appended."""
    report = Report(title="Spinor identities")
    if geo.dim < 3:
        report.add(skipped(SUITE, "background", "spinor-identities/preamble", "tractor spinors need d >= 3"))
        return report
    context = SpinorContext(geo, sigma, weight)
    selected = [i for i in SPINOR_IDENTITIES if names is None or i.name in names]
    logger.info("Running %s spinor identities on %s", len(selected), geo.ctx)

    def run(identity):
        start = time.monotonic()
        record = _run(context, identity)
        return record, time.monotonic() - start

    for record, seconds in parallel_map(run, selected):
        report.add(record)
        report.time(f"{SUITE}/{record.name}", seconds)
    apply_discrepancies(report, load_discrepancies())
    if weyl is not None:
        report.extend(spinor_gauge_checks(geo, weyl, context.w))
    return report


def spinor_gauge_checks(geo, weyl, weight=None):
    weight = geo.ctx.param("w") if weight is None else sp.sympify(weight)
    new = rescale(geo, weyl)

    def gamma_compatibility():
        return spinor_gauge_residuals(weyl, geo)

    def connection():
        psi = generic_tractor_spinor(geo)
        moved = transform_tractor(psi, weyl, geo)
        U_s = spinor_gauge_U(weyl, geo)
        expected = act(covariant_derivative(psi, geo), U_s)
        return covariant_derivative(moved, new) - expected

    def thomas():
        psi = generic_tractor_spinor(geo, weight)
        moved = transform_tractor(psi, weyl, geo)
        return thomas_D(moved, new) - transform_tractor(thomas_D(psi, geo), weyl, geo)

    checks = [
        ("gauge/gamma-compatibility", "spinor-identities/gauge-gamma", gamma_compatibility),
        ("gauge/connection", "spinor-identities/gauge-connection", connection),
        ("gauge/thomas-d", "spinor-identities/gauge-thomas-d", thomas),
    ]

    def run(item):
        name, anchor, residual = item
        try:
            return check(SUITE, name, anchor, residual())
        except GeometryUnavailable as exc:
            return skipped(SUITE, name, anchor, str(exc))

    return parallel_map(run, checks)

