"""
Spinors and tractor spinors.

Frame gamma matrices come from the recursive Pauli construction with timelike
directions multiplied by ``i``.  Tractor spinors have ``2N`` components, a top
half ``psi`` and a bottom half ``chi``; the tractor gamma matrices in the light
cone basis are

    Gamma^+ = [[0, 0], [sqrt2, 0]],  Gamma^- = [[0, sqrt2], [0, 0]],
    Gamma^m = diag(gamma^m, -gamma^m).
"""
import logging
from functools import lru_cache

import sympy as sp

from conformal.expr import simplify
from conformal.tensor import Connection, IndexKind, TensorField, apply_matrix, down, register_connection, up
from conformal.tractor import PLUS, TractorMetric, gauge_U, mid, minus, thomas_D
from conformal.utils import GeometryUnavailable, UnsupportedInput


logger = logging.getLogger(__name__)

SIGMA = (
    sp.Matrix([[0, 1], [1, 0]]),
    sp.Matrix([[0, -sp.I], [sp.I, 0]]),
    sp.Matrix([[1, 0], [0, -1]]),
)

MIN_CLIFFORD_DIMENSION = 2
MAX_CLIFFORD_DIMENSION = 6

SPINOR_UP = up(IndexKind.SPINOR)
TRACTOR_SPINOR_UP = up(IndexKind.TRACTOR_SPINOR)


def euclidean_gammas(d):
    """Hermitian generators of ``Cl(d)``, of size ``2^(d//2)``."""
    check_clifford_dimension(d)
    k = d // 2
    gammas = [SIGMA[0], SIGMA[1]]
    for _ in range(k - 1):
        size = gammas[0].rows
        gammas = [sp.kronecker_product(g, SIGMA[2]) for g in gammas]
        gammas += [sp.kronecker_product(sp.eye(size), SIGMA[0]), sp.kronecker_product(sp.eye(size), SIGMA[1])]
    if d % 2:
        gammas.append(sp.I**k * sp.prod(gammas))
    return gammas


def check_clifford_dimension(d):
    if not MIN_CLIFFORD_DIMENSION <= d <= MAX_CLIFFORD_DIMENSION:
        raise UnsupportedInput(
            f"unsupported d = {d}: Clifford representations are built for "
            f"{MIN_CLIFFORD_DIMENSION} <= d <= {MAX_CLIFFORD_DIMENSION}"
        )


class CliffordRep:
    """Frame and tractor gamma matrices for one dimension and signature."""

    def __init__(self, d, signature=None):
        check_clifford_dimension(d)
        self.dim = d
        self.signature = tuple(signature) if signature is not None else (1,) * d
        self.eta = sp.diag(*self.signature)
        self.size = 2 ** (d // 2)
        self.gammas = [g * (sp.I if s == -1 else 1) for g, s in zip(euclidean_gammas(d), self.signature)]
        self.gammas_lower = [s * g for s, g in zip(self.signature, self.gammas)]
        self.tractor_eta = TractorMetric(d, self.eta).matrix
        self.tractor_gammas = self._tractor_gammas()
        self.tractor_gammas_lower = [
            sum((self.tractor_eta[a, b] * self.tractor_gammas[b] for b in range(d + 2) if self.tractor_eta[a, b]),
                sp.zeros(2 * self.size))
            for a in range(d + 2)
        ]

    def _tractor_gammas(self):
        n, d = self.size, self.dim
        zero, root = sp.zeros(n), sp.sqrt(2) * sp.eye(n)
        gammas = [None] * (d + 2)
        gammas[PLUS] = sp.BlockMatrix([[zero, zero], [root, zero]]).as_explicit()
        gammas[minus(d)] = sp.BlockMatrix([[zero, root], [zero, zero]]).as_explicit()
        for m, g in enumerate(self.gammas):
            gammas[mid(m)] = sp.BlockMatrix([[g, zero], [zero, -g]]).as_explicit()
        return gammas

    @property
    def identity(self):
        return sp.eye(self.size)

    def gamma_pair(self, a, b, lower=False):
        """``gamma^{ab} = (gamma^a gamma^b - gamma^b gamma^a)/2``."""
        g = self.gammas_lower if lower else self.gammas
        return (g[a] * g[b] - g[b] * g[a]) / 2

    def tractor_pair(self, a, b, lower=False):
        g = self.tractor_gammas_lower if lower else self.tractor_gammas
        return (g[a] * g[b] - g[b] * g[a]) / 2

    def slash_frame(self, frame_lower):
        """``v_m gamma^m`` for frame lower components."""
        return sum((v * g for v, g in zip(frame_lower, self.gammas) if v != 0), sp.zeros(self.size))

    def slash_tractor(self, upper):
        """``V^M Gamma_M``."""
        return sum((v * g for v, g in zip(upper, self.tractor_gammas_lower) if v != 0), sp.zeros(2 * self.size))

    # Invariants

    def clifford_residuals(self):
        residuals = []
        for a in range(self.dim):
            for b in range(a, self.dim):
                anti = self.gammas[a] * self.gammas[b] + self.gammas[b] * self.gammas[a]
                residuals += list(anti - 2 * self.eta[a, b] * self.identity)
        return residuals

    def tractor_clifford_residuals(self):
        n = self.dim + 2
        G, eta = self.tractor_gammas, self.tractor_eta
        identity = sp.eye(2 * self.size)
        residuals = []
        for a in range(n):
            for b in range(a, n):
                residuals += list(G[a] * G[b] + G[b] * G[a] - 2 * eta[a, b] * identity)
        return residuals

    def closure_residuals(self):
        """``[G^{AB}, G^{CD}] = 2 eta^{BC} G^{AD} - 2 eta^{AC} G^{BD} - 2 eta^{BD} G^{AC} + 2 eta^{AD} G^{BC}``."""
        n, eta = self.dim + 2, self.tractor_eta
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        G = {(a, b): self.tractor_pair(a, b) for a in range(n) for b in range(n)}
        residuals = []
        for i, (A, B) in enumerate(pairs):
            for C, D in pairs[i:]:
                lhs = G[A, B] * G[C, D] - G[C, D] * G[A, B]
                rhs = 2 * (eta[B, C] * G[A, D] - eta[A, C] * G[B, D] - eta[B, D] * G[A, C] + eta[A, D] * G[B, C])
                residuals += list(lhs - rhs)
        return residuals

    def conjugation(self):
        """
        ``Gamma^0 Gamma^u`` with ``Gamma^u = (Gamma^+ - Gamma^-)/sqrt2``; only
        defined for one timelike frame direction.
        """
        if self.signature.count(-1) != 1:
            return None
        time = self.signature.index(-1)
        G = self.tractor_gammas
        gamma_u = (G[PLUS] - G[minus(self.dim)]) / sp.sqrt(2)
        return G[mid(time)] * gamma_u

    def conjugation_residuals(self):
        """``A Gamma^M A^-1 = (Gamma^M)^dagger``."""
        A = self.conjugation()
        if A is None:
            return None
        A_inv = A.inv()
        return [c for G in self.tractor_gammas for c in (A * G * A_inv - G.H).applyfunc(simplify)]

    def null_square_residuals(self):
        """``(Gamma . X)^2 = 0``."""
        X_slash = self.tractor_gammas_lower[minus(self.dim)]
        return list(X_slash * X_slash)


@lru_cache(maxsize=None)
def build_clifford(d, signature=None):
    check_clifford_dimension(d)
    logger.info("Building Clifford representation for d=%s", d)
    return CliffordRep(d, signature)


# Connections

def _require_clifford(geo):
    if geo.dim < 2:
        raise GeometryUnavailable("Spinors need d >= 2")
    return geo.clifford


def spinor_connection_matrices(geo):
    """``S_mu = (1/4) omega_{mu ab} gamma^a gamma^b``."""
    rep = _require_clifford(geo)
    d = geo.dim
    matrices = []
    for omega in geo.spin_connection_lowered:
        S = sp.zeros(rep.size)
        for a in range(d):
            for b in range(d):
                if omega[a, b] != 0:
                    S += omega[a, b] * rep.gammas[a] * rep.gammas[b] / 4
        matrices.append(S.applyfunc(simplify))
    return matrices


def tractor_spinor_connection_matrices(geo):
    """``diag(S, S) + [[0, gamma_mu/sqrt2], [-Pslash_mu/sqrt2, 0]]``."""
    rep = _require_clifford(geo)
    d, n = geo.dim, rep.size
    e, eta, P = geo.vielbein, geo.ctx.eta, geo.frame_schouten_lowered
    matrices = []
    for mu, S in enumerate(spinor_connection_matrices(geo)):
        gamma_mu = sum((e[mu, m] * eta[m, m] * rep.gammas[m] for m in range(d) if e[mu, m] != 0), sp.zeros(n))
        P_slash = rep.slash_frame([P[mu, m] for m in range(d)])
        A = sp.zeros(2 * n)
        A[:n, :n] = S
        A[n:, n:] = S
        A[:n, n:] = gamma_mu / sp.sqrt(2)
        A[n:, :n] = -P_slash / sp.sqrt(2)
        matrices.append(A.applyfunc(simplify))
    return matrices


@register_connection(IndexKind.SPINOR)
def _spinor_connection(geo):
    return Connection.from_matrices(spinor_connection_matrices(geo))


@register_connection(IndexKind.TRACTOR_SPINOR)
def _tractor_spinor_connection(geo):
    return Connection.from_matrices(tractor_spinor_connection_matrices(geo))


def gamma_parallel_residuals(geo):
    """
    ``[S_mu, gamma^a] + omega_mu^a_b gamma^b`` and the tractor analogue
    ``[A_mu, Gamma^M] + A_mu^M_N Gamma^N``; both vanish.
    """
    rep = geo.clifford
    d = geo.dim
    residuals = []
    for mu, S in enumerate(spinor_connection_matrices(geo)):
        omega = geo.spin_connection[mu]
        for a in range(d):
            rotated = sum((omega[a, b] * rep.gammas[b] for b in range(d) if omega[a, b] != 0), sp.zeros(rep.size))
            residuals += list((S * rep.gammas[a] - rep.gammas[a] * S + rotated).applyfunc(simplify))
    tractor = geo.connection(IndexKind.TRACTOR)
    for mu, A in enumerate(tractor_spinor_connection_matrices(geo)):
        T = tractor.matrix(mu, d + 2)
        for a in range(d + 2):
            rotated = sum((T[a, b] * rep.tractor_gammas[b] for b in range(d + 2) if T[a, b] != 0),
                          sp.zeros(2 * rep.size))
            residuals += list((A * rep.tractor_gammas[a] - rep.tractor_gammas[a] * A + rotated).applyfunc(simplify))
    return residuals


# Gauge transformations

def spinor_gauge_U(weyl, geo):
    """``[[sqrt(Omega), 0], [-Upsilon-slash/sqrt(2 Omega), 1/sqrt(Omega)]]``."""
    rep = geo.clifford
    n = rep.size
    omega = weyl.omega
    root = sp.sqrt(sp.factor(omega))
    upsilon_slash = rep.slash_frame(geo.frame_down(weyl.upsilon))
    U = sp.zeros(2 * n)
    U[:n, :n] = root * sp.eye(n)
    U[n:, :n] = -upsilon_slash / (sp.sqrt(2) * root)
    U[n:, n:] = sp.eye(n) / root
    return U.applyfunc(simplify)


def spinor_gauge_residuals(weyl, geo):
    """``U_s Gamma_M U_s^-1 = Gamma_N U^N_M`` for every ``M``."""
    rep = geo.clifford
    U_s, U = spinor_gauge_U(weyl, geo), gauge_U(weyl, geo)
    U_s_inv = U_s.inv().applyfunc(simplify)
    n = geo.dim + 2
    residuals = []
    for M in range(n):
        lhs = U_s * rep.tractor_gammas_lower[M] * U_s_inv
        rhs = sum((rep.tractor_gammas_lower[N] * U[N, M] for N in range(n) if U[N, M] != 0),
                  sp.zeros(2 * rep.size))
        residuals += list((lhs - rhs).applyfunc(simplify))
    return residuals


# Fields and slashing

def generic_spinor(geo, name="psi", weight=0, curved=False):
    """A spinor (or vector-spinor with ``curved``) of generic functions."""
    rep = geo.clifford
    if curved:
        return TensorField.from_function(
            (down(IndexKind.CURVED), SPINOR_UP), geo.dim,
            lambda mu, a: geo.ctx.field(f"{name}{mu}_{a}"), weight=weight,
        )
    return TensorField((SPINOR_UP,), geo.dim, {(a,): geo.ctx.field(f"{name}{a}") for a in range(rep.size)},
                       weight=weight)


def generic_tractor_spinor(geo, weight=0, top="psi", bottom="chi"):
    n = geo.clifford.size
    components = {(a,): geo.ctx.field(f"{top}{a}") for a in range(n)}
    components.update({(n + a,): geo.ctx.field(f"{bottom}{a}") for a in range(n)})
    return TensorField((TRACTOR_SPINOR_UP,), geo.dim, components, weight=weight)


def tractor_spinor(psi, chi, dim, weight=0):
    """Assemble ``(psi, chi)`` from two lists of spinor components."""
    components = dict(enumerate(list(psi) + list(chi)))
    return TensorField((TRACTOR_SPINOR_UP,), dim, components, weight=weight)


def halves(t, spinor_position=None):
    """Split a field with one tractor-spinor slot into its ``psi`` and ``chi`` parts, keyed by the other indices."""
    position = _spinor_position(t, spinor_position)
    n = t.shape[position] // 2
    top, bottom = {}, {}
    for idx, value in t.items():
        key = idx[:position] + idx[position + 1:]
        a = idx[position]
        (top if a < n else bottom).setdefault(key, [sp.S.Zero] * n)[a % n] = value
    return top, bottom


def _spinor_position(t, spinor_position=None):
    if spinor_position is not None:
        return spinor_position
    for position in reversed(range(t.rank)):
        if t.slots[position].kind in (IndexKind.TRACTOR_SPINOR, IndexKind.SPINOR):
            return position
    raise UnsupportedInput("Field has no spinor slot")


def act(t, matrix, spinor_position=None):
    """Apply a matrix on the spinor slot."""
    return apply_matrix(t, _spinor_position(t, spinor_position), matrix)


def slash(t, position, rep, spinor_position=None):
    """
    Contract the tractor (or frame, or curved via the frame) slot at
    ``position`` with the matching gamma matrix acting on the spinor slot.
    """
    spinor = _spinor_position(t, spinor_position)
    slot = t.slots[position]
    if slot.kind is IndexKind.TRACTOR:
        gammas = rep.tractor_gammas_lower if slot.up else rep.tractor_gammas
    elif slot.kind is IndexKind.FRAME:
        gammas = rep.gammas_lower if slot.up else rep.gammas
    else:
        raise UnsupportedInput("Slash a curved index after converting it to the frame")
    components = {}
    for idx, value in t.items():
        if value == 0:
            continue
        G = gammas[idx[position]]
        for beta in range(G.rows):
            coeff = G[beta, idx[spinor]]
            if coeff == 0:
                continue
            key = list(idx)
            key[spinor] = beta
            del key[position]
            key = tuple(key)
            components[key] = components.get(key, 0) + coeff * value
    slots = t.slots[:position] + t.slots[position + 1:]
    return TensorField(slots, t.dim, components, weight=t.weight)


def curved_to_frame(t, position, geo):
    """``V_m = E_m^mu V_mu`` on a lower curved slot."""
    if t.slots[position] != down(IndexKind.CURVED):
        raise UnsupportedInput("Expected a lower curved slot")
    return apply_matrix(t, position, geo.inverse_vielbein, down(IndexKind.FRAME))


def curved_gamma(geo, mu):
    """``gamma_mu = e_mu^m gamma_m``."""
    e, rep = geo.vielbein, geo.clifford
    return sum((e[mu, m] * rep.gammas_lower[m] for m in range(geo.dim) if e[mu, m] != 0), sp.zeros(rep.size))


def dirac(t, geo, position=0):
    """``gamma^mu D_mu`` applied to a derivative slot at ``position``."""
    return slash(curved_to_frame(t, position, geo), position, geo.clifford)


# Dirac-Thomas operator and projectors

def dirac_thomas(psi, geo, weight=None):
    """``Gamma_M D^M Psi``, weight ``w - 1``."""
    return slash(thomas_D(psi, geo, weight), 0, geo.clifford)


class Projectors:
    """
    ``Pi_pm = (1 pm I-slash / sqrt(I.I))/2`` for a scale tractor with ``I.I``
    not identically zero.
    """

    def __init__(self, scale, rep):
        self.scale = scale
        self.rep = rep
        if simplify(scale.norm) == 0:
            raise UnsupportedInput("Projectors need a non-null scale tractor")
        self.root = sp.sqrt(scale.norm)
        self.I_slash = rep.slash_tractor(scale.components)

    def plus(self):
        return (sp.eye(2 * self.rep.size) + self.I_slash / self.root) / 2

    def minus(self):
        return (sp.eye(2 * self.rep.size) - self.I_slash / self.root) / 2

    def residuals(self):
        """Idempotent, complementary and orthogonal."""
        P, M = self.plus(), self.minus()
        identity = sp.eye(2 * self.rep.size)
        return list(P * P - P) + list(M * M - M) + list(P + M - identity) + list(P * M)
