"""
Spin 2: a weight ``w`` symmetric tractor ``V^{MN}`` with ``D.V^N = D^N V^M_M / 2``.

The independent slots are ``A = V^{++}``, ``B^m = V^{m+}`` and the physical
``C^{mn}``; the constraint is triangular in the remaining slots ``a = V^{+-}``,
``b^m = V^{m-}`` and ``c = V^{--}``.  The tractor Christoffels

    2 Gamma^{RMN} = D^M V^{NR} + D^N V^{MR} - D^R V^{MN}

give ``G^{MN} = -2 I_R Gamma^{RMN}``, gauge invariant under
``V -> V + D^(M xi^N)`` with ``I.xi = 0``.  Combinations of its ``++``, ``m+``
and ``mn`` slots follow from an action; fixing ``A = B = 0`` leaves the
cosmological Einstein and Pauli-Fierz operators.

Curved tensors in the symmetric algebra follow :mod:`conformal.symalg`:
``tr`` carries ``s(s-1)`` and ``div`` carries ``s``.
"""
import logging
from typing import Callable, NamedTuple

import sympy as sp

from conformal.expr import simplify, to_display
from conformal.identities import CONFORMALLY_FLAT, Identity
from conformal.physics.base import (
    CONSTANT_CURVATURE,
    SystemContext,
    proportional,
    run_system,
    solve_linear,
    solve_linear_system,
    substitute,
)
from conformal.physics.mass import (
    MassWeightQuery,
    bf_bound,
    convention_shift,
    cosmological_constant,
    mass_from_weight,
    schouten_from_lambda,
)
from conformal.reports import apply_discrepancies as apply_report_discrepancies, load_discrepancies
from conformal.symalg import SymAlgebraState, apply_word, generic_symmetric, sym_ops
from conformal.tensor import IndexKind, TensorField, apply_matrix, down, laplacian, symmetrize, up
from conformal.tractor import (
    PLUS,
    TRACTOR_UP,
    contract_with,
    divergence,
    mid,
    minus,
    thomas_D,
    tractor_contract,
    tractor_vector,
)
from conformal.utils import PoleWeightError, UnsupportedInput, memoized


logger = logging.getLogger(__name__)

SUITE = "spin2"

CONSTRAINT_TABLE = "constraint-solutions"
CHRISTOFFEL_TABLE = "christoffels"
EQUATION_TABLE = "equations"


def excluded_weights(d):
    """The constraint solution divides by ``d + 2w``, ``d + w`` and ``d + w - 1``."""
    return [-sp.Rational(d, 2), sp.Integer(-d), sp.Integer(1 - d)]


def spin2_mass(d, w, schouten):
    return mass_from_weight(MassWeightQuery.build(2, d, w, schouten))


# Tractor operations on any rank two field

def field_constraint(V, geo):
    """``D_M V^{MN} - D^N V^M_M / 2``."""
    trace = tractor_contract(V, 0, 1, geo)
    return divergence(V, geo) - thomas_D(trace, geo) * sp.Rational(1, 2)


def christoffels(DV):
    """``2 Gamma^{RMN}`` at ``[R, M, N]`` from ``DV[M, N, R] = D^M V^{NR}``."""
    n = DV.shape[0]
    components = {
        (R, M, N): DV[M, N, R] + DV[N, M, R] - DV[R, M, N]
        for R in range(n) for M in range(n) for N in range(n)
    }
    return TensorField(DV.slots, DV.dim, components, weight=DV.weight)


def equation(gamma2, scale, geo):
    """``G^{MN} = -I_R (2 Gamma^{RMN})``."""
    return contract_with(gamma2, 0, scale, geo) * -1


def gauge_shift(xi, geo):
    """``D^(M xi^N)``."""
    D_xi = thomas_D(xi, geo)
    return symmetrize(D_xi, (0, 1))


class Spin2System(SystemContext):
    """
    Generic ``A``, ``B_mu`` and ``C_{mu nu}`` (curved, lower) at weight ``w``.
    ``gauge_fixed`` drops ``A`` and ``B``.
    """

    def __init__(self, geo, sigma=None, weight=None, gauge_fixed=False):
        super().__init__(geo, sigma, weight)
        self.gauge_fixed = gauge_fixed

    def guard(self):
        if any(sp.simplify(self.w - pole) == 0 for pole in excluded_weights(self.d)):
            raise PoleWeightError(f"w = {self.w}: the constraint does not fix V^{{+-}}, V^- and V^{{--}}")

    def require_generic(self, *factors):
        """Divisions by ``factors`` in the action combinations."""
        for factor in factors:
            if sp.simplify(factor) == 0:
                raise PoleWeightError(f"w = {self.w}: the action combinations divide by {factor}")

    # Frames

    @memoized
    def to_frame(self):
        """``eta^{mm} E_m^mu``: curved lower to frame upper."""
        eta, E = self.geo.ctx.eta, self.geo.inverse_vielbein
        return sp.Matrix(self.d, self.d, lambda m, mu: eta[m, m] * E[m, mu])

    @memoized
    def to_curved(self):
        """``e_mu^m eta_{mm}``: frame upper to curved lower."""
        eta, e = self.geo.ctx.eta, self.geo.vielbein
        return sp.Matrix(self.d, self.d, lambda mu, m: e[mu, m] * eta[m, m])

    def frame_tensor(self, field):
        frame = up(IndexKind.FRAME)
        result = apply_matrix(field, 0, self.to_frame, frame)
        result = apply_matrix(result, 1, self.to_frame, frame)
        return [[simplify(result[m, n]) for n in range(self.d)] for m in range(self.d)]

    def curved_tensor(self, rows):
        """A frame upper rank two array as a curved lower field."""
        curved = down(IndexKind.CURVED)
        field = TensorField((up(IndexKind.FRAME),) * 2, self.d,
                            {(m, n): rows[m][n] for m in range(self.d) for n in range(self.d)})
        field = apply_matrix(field, 0, self.to_curved, curved)
        return apply_matrix(field, 1, self.to_curved, curved).simplify()

    def curved_vector(self, components):
        return TensorField((down(IndexKind.CURVED),), self.d, dict(enumerate(self.geo.curved_down(components))))

    def state(self, field):
        return SymAlgebraState(self.geo, field, check_background=False)

    def scalar_state(self, value):
        return self.state(TensorField.scalar(value, self.d))

    # Independent slots

    @memoized
    def A(self):
        return sp.S.Zero if self.gauge_fixed else self.geo.ctx.field("Vpp")

    @memoized
    def curved_B(self):
        if self.gauge_fixed:
            return TensorField((down(IndexKind.CURVED),), self.d)
        return generic_symmetric(self.geo, 1, "Vp", self.w)

    @memoized
    def curved_C(self):
        return generic_symmetric(self.geo, 2, "V", self.w)

    @memoized
    def B(self):
        return self.geo.frame_up([self.curved_B[mu] for mu in range(self.d)])

    @memoized
    def C(self):
        return self.frame_tensor(self.curved_C)

    def assemble(self, a, b, c):
        d = self.d
        components = {(PLUS, PLUS): self.A, (PLUS, minus(d)): a, (minus(d), PLUS): a, (minus(d), minus(d)): c}
        for m in range(d):
            components[PLUS, mid(m)] = components[mid(m), PLUS] = self.B[m]
            components[mid(m), minus(d)] = components[minus(d), mid(m)] = b[m]
            for n in range(d):
                components[mid(m), mid(n)] = self.C[m][n]
        return TensorField((TRACTOR_UP, TRACTOR_UP), d, components, weight=self.w)

    # Constraint solution

    @memoized
    def solution(self):
        """``(a, b, c)`` solved from the ``+``, middle and ``-`` rows of the constraint in turn."""
        self.guard()
        ctx, d = self.geo.ctx, self.d
        a, c = ctx.field("Va"), ctx.field("Vc")
        b = [ctx.field(f"Vb{m}") for m in range(d)]
        K = field_constraint(self.assemble(a, b, c), self.geo)
        later = set(b) | {c}
        a_value = solve_linear(K[PLUS], a)
        if a_value.atoms(sp.Function) & later:
            raise UnsupportedInput("The + row of the constraint involves V^- or V^--")
        b_values = solve_linear_system([substitute(K[mid(m)], {a: a_value}) for m in range(d)], b)
        if any(c in v.atoms(sp.Function) for v in b_values):
            raise UnsupportedInput("The middle rows of the constraint involve V^--")
        rules = {a: a_value, **dict(zip(b, b_values))}
        c_value = solve_linear(substitute(K[minus(d)], rules), c)
        logger.info("Solved the spin 2 constraint at w = %s on %s", self.w, ctx)
        return a_value, b_values, c_value

    @memoized
    def V(self):
        return self.assemble(*self.solution)

    @memoized
    def DV(self):
        return thomas_D(self.V, self.geo)

    @memoized
    def gamma2(self):
        return christoffels(self.DV)

    @memoized
    def G(self):
        return equation(self.gamma2, self.I, self.geo)

    # Frame calculus

    def grad_up(self, f):
        return self.frame_grad_up(f)

    def vector_gradient(self, components):
        """``D^m V^n`` at ``[m][n]``."""
        eta = self.geo.ctx.eta
        gradient = self.frame_gradient(self.frame_vector(components))
        return [[eta[m, m] * gradient[m, n] for n in range(self.d)] for m in range(self.d)]

    def tensor_gradient(self, rows):
        """``D^r T^{mn}`` at ``[r][m][n]``."""
        eta, d = self.geo.ctx.eta, self.d
        field = TensorField((up(IndexKind.FRAME),) * 2, d, {(m, n): rows[m][n] for m in range(d) for n in range(d)})
        gradient = self.frame_gradient(field)
        return [[[eta[r, r] * gradient[r, m, n] for n in range(d)] for m in range(d)] for r in range(d)]

    # Equations as symmetric algebra states

    @memoized
    def equation_states(self):
        """``(G^{++}, G^{m+}, G^{mn})`` as curved lower states."""
        G, d = self.G, self.d
        top = self.scalar_state(G[PLUS, PLUS])
        vector = self.state(self.curved_vector([G[mid(m), PLUS] for m in range(d)]))
        tensor = self.state(self.curved_tensor([[G[mid(m), mid(n)] for n in range(d)] for m in range(d)]))
        return top, vector, tensor

    @memoized
    def reduced_equations(self):
        """Combinations free of the higher derivatives carried by ``V^-`` and ``V^{--}``."""
        d, w = self.d, self.w
        f = d + 2 * w - 2
        self.require_generic(w, d + w, f, d + w - 1, d + 2 * w)
        top, vector, tensor = self.equation_states
        vector_o = vector - sym_ops(top, "grad") * (1 / (d + w))
        trace_part = sym_ops(vector, "div") - sym_ops(top, "box") * (1 / (d + 2 * w))
        tensor_o = (tensor - sym_ops(vector, "grad") * (2 / f)
                    + sym_ops(trace_part, "g") * (2 * (d + 2 * w - 1) / (w * (d + w - 1) * f)))
        return top, vector_o, tensor_o

    @memoized
    def action_equations(self):
        """``(G^{++}, G^+, G)`` obeying the Bianchi identities of the gauge symmetry."""
        d, w, P = self.d, self.w, self.P
        f = d + 2 * w - 2
        self.require_generic(w + 1)
        top_o, vector_o, tensor_o = self.reduced_equations
        top = (top_o * (2 * (d + w - 2) * (d - 1) * P / (w + 1)) - sym_ops(vector_o, "div") * (d + w)) \
            * (4 * P / (d * w * f))
        vector = vector_o * (-8 * (d + w - 1) * (d + w) * P / (d * w * f))
        shift = P / f * (1 - sp.Integer(2) / w * (1 - (w + 1) / (d + 2 * w) - sp.Rational((d - 1)**2, d)))
        tensor = tensor_o - apply_word(tensor_o, ["g", "tr"]) * sp.Rational(1, 4) - sym_ops(top_o, "g") * shift
        return top, vector, tensor


# Symmetric algebra forms

def pauli_fierz(V, mass):
    """``G_Einstein + G_mass`` on a rank two state at mass squared ``mass``."""
    geo = V.geo
    d, P = geo.dim, geo.schouten_trace
    bochner = V._derived(laplacian(V.field, geo))
    einstein = (bochner - V * (4 * P / d) - apply_word(V, ["grad", "div"])
                + (apply_word(V, ["g", "div", "div"]) + apply_word(V, ["grad", "grad", "tr"])) * sp.Rational(1, 2)
                - (apply_word(V, ["g", "box", "tr"]) + apply_word(V, ["g", "tr"]) * (2 * P / d * (d - 3)))
                * sp.Rational(1, 2))
    return einstein - (V - apply_word(V, ["g", "tr"]) * sp.Rational(1, 2)) * mass


def _scalar(state):
    return sp.S.Zero if state.is_null else state.field.as_scalar()


def _vector(state, d):
    return [sp.S.Zero] * d if state.is_null else [state.field[mu] for mu in range(d)]


# Table rows: each returns ``(direct, tabulated)`` pairs slot by slot

def constraint_top(s):
    d, w, P = s.d, s.w, s.P
    B, C = s.state(s.curved_B), s.state(s.curved_C)
    tabulated = (s.box(s.A) - (d + w) * P * s.A - (d + 2 * w + 2) * _scalar(sym_ops(B, "div"))
               + (w**2 + w + d + w * d / sp.Integer(2)) / 2 * _scalar(sym_ops(C, "tr"))) / (d * (d + 2 * w))
    return [(s.solution[0], tabulated)]


def constraint_middle(s):
    d, w, P = s.d, s.w, s.P
    B, C = s.state(s.curved_B), s.state(s.curved_C)
    top = s.scalar_state(s.box(s.A) - (d + w - 2) * P * s.A)
    trace = sym_ops(C, "tr")
    tabulated = (B._derived(laplacian(s.curved_B, s.geo)) - B * (P / d * (d * (d + w) + 2 * (w + 1)))
               - sym_ops(C, "div") * ((d + 2 * w) / sp.Integer(2)) + sym_ops(top, "grad") * (sp.Integer(1) / d)
               - apply_word(B, ["grad", "div"]) * ((d + 2 * w + 2) / sp.Integer(d))
               + sym_ops(trace, "grad") * ((d * (d + 2 * w) + w * (d + 2 * w + 2)) / sp.Integer(4 * d)))
    tabulated = tabulated * (1 / ((d + w) * (d + 2 * w)))
    direct = s.geo.curved_down(s.solution[1])
    return list(zip(direct, _vector(tabulated, d)))


def constraint_bottom(s):
    d, w, P = s.d, s.w, s.P
    B, C = s.state(s.curved_B), s.state(s.curved_C)
    A = s.A
    trace = _scalar(sym_ops(C, "tr"))
    div_B = _scalar(sym_ops(B, "div"))
    tabulated = (
        sp.Rational(d, 2) * (d + 2 * w) * _scalar(apply_word(C, ["div", "div"]))
        - ((((d + w)**2 + w) * s.box(trace) + w * (d + w) * (d + w - 1) * P * trace)) / 2
        + 2 * ((w + 1) * s.box(div_B) + ((d + w) * (d + w - 1) + 2 * (w + 1)) * P * div_B)
        - (s.box(s.box(A)) + 2 * P * s.box(A) - (d + w) * (d + w - 1) * P**2 * A)
    ) / (d * (d + w) * (d + w - 1) * (d + 2 * w))
    return [(s.solution[2], tabulated)]


def _christoffel_context(s):
    d, w = s.d, s.w
    return d, w, d + 2 * w - 2, s.gamma2, s.geo.ctx.eta


def christoffel_ppp(s):
    d, w, f, gamma, _ = _christoffel_context(s)
    return [(gamma[PLUS, PLUS, PLUS], w * f * s.A)]


def christoffel_ppn(s):
    d, w, f, gamma, _ = _christoffel_context(s)
    grad = s.grad_up(s.A)
    return [(gamma[PLUS, PLUS, mid(n)], f * (grad[n] - 2 * s.B[n])) for n in range(d)]


def christoffel_rpp(s):
    """Printed with ``grad^n`` on ``V^{++}``; the free index is ``r``."""
    d, w, f, gamma, _ = _christoffel_context(s)
    grad = s.grad_up(s.A)
    return [(gamma[mid(r), PLUS, PLUS], -f * (grad[r] - 2 * (w + 1) * s.B[r])) for r in range(d)]


def christoffel_pmn(s):
    d, w, f, gamma, eta = _christoffel_context(s)
    grad_B = s.vector_gradient(s.B)
    a = s.solution[0]
    return [
        (gamma[PLUS, mid(m), mid(n)],
         -(w + 2) * f * s.C[m][n] + f * (grad_B[m][n] + grad_B[n][m]) + 2 * f * eta[m, n] * (s.P / d * s.A + a))
        for m in range(d) for n in range(d)
    ]


def christoffel_rpn(s):
    d, w, f, gamma, _ = _christoffel_context(s)
    grad_B = s.vector_gradient(s.B)
    return [
        (gamma[mid(r), PLUS, mid(n)], f * (w * s.C[r][n] + grad_B[n][r] - grad_B[r][n]))
        for r in range(d) for n in range(d)
    ]


def christoffel_rmn(s):
    """Printed with ``2 grad^m V^{rn}`` for the symmetrized ``grad^m C^{nr} + grad^n C^{mr}``."""
    d, w, f, gamma, eta = _christoffel_context(s)
    grad_C = s.tensor_gradient(s.C)
    b = s.solution[1]
    schouten = s.P / d
    return [
        (gamma[mid(r), mid(m), mid(n)],
         f * (grad_C[m][n][r] + grad_C[n][m][r] - grad_C[r][m][n]
              + 2 * schouten * eta[m, n] * s.B[r] + 2 * eta[m, n] * b[r]))
        for r in range(d) for m in range(d) for n in range(d)
    ]


def _tabulated_equations(s):
    d, w, P = s.d, s.w, s.P
    A = s.scalar_state(s.A)
    B, C = s.state(s.curved_B), s.state(s.curved_C)
    top = (sym_ops(A, "box") * (8 * (d + 2 * w - 1) * (d - 1) * P**2 / (d**2 * w * (w + 1)))
           - A * (16 * (d + w - 2) * (d - 1) * P**3 / (d**2 * (w + 1)))
           - sym_ops(B, "div") * (16 * (d - 1) * (d + w - 1) * P**2 / (d**2 * w))
           - apply_word(C, ["box", "tr"]) * (2 * P / d) + apply_word(C, ["div", "div"]) * (2 * P / d)
           + sym_ops(C, "tr") * (4 * (d - 1) * (d + w - 2) * P**2 / d**2))
    vector = (sym_ops(A, "grad") * (-2 * (d - 1) * P / d)
              - (sym_ops(C, "div") - apply_word(C, ["grad", "tr"])) * (w / sp.Integer(2))
              + sym_ops(B, "box") - apply_word(B, ["grad", "div"]) + B * (4 * P * (d - 1) / d)) \
        * (-8 * (d + w - 1) * P / (d * w))
    tensor = (pauli_fierz(C, spin2_mass(d, w, P))
              - (sym_ops(B, "grad") - apply_word(B, ["g", "div"])) * (4 * (d + w - 1) * P / d)
              - apply_word(A, ["g", "box"]) * (2 * P / d) + apply_word(A, ["grad", "grad"]) * (2 * P / d)
              + sym_ops(A, "g") * (4 * (d - 1) * (d + w - 2) * P**2 / d**2))
    return top, vector, tensor


def _state_pairs(direct, tabulated, d):
    if direct.rank == 0:
        return [(_scalar(direct), _scalar(tabulated))]
    keys = sorted(set(direct.field.keys()) if not direct.is_null else set(tabulated.field.keys()))

    def value(state, key):
        return sp.S.Zero if state.is_null else state.field[key]

    return [(value(direct, k), value(tabulated, k)) for k in keys]


def equation_top(s):
    return _state_pairs(s.action_equations[0], _tabulated_equations(s)[0], s.d)


def equation_vector(s):
    return _state_pairs(s.action_equations[1], _tabulated_equations(s)[1], s.d)


def equation_tensor(s):
    return _state_pairs(s.action_equations[2], _tabulated_equations(s)[2], s.d)


class TableRow(NamedTuple):
    table: str
    row: str
    pairs: Callable

    @property
    def key(self):
        return f"{SUITE}/{self.table}/{self.row}"


TABLE_ROWS = [
    TableRow(CONSTRAINT_TABLE, "V+-", constraint_top),
    TableRow(CONSTRAINT_TABLE, "V-", constraint_middle),
    TableRow(CONSTRAINT_TABLE, "V--", constraint_bottom),
    TableRow(CHRISTOFFEL_TABLE, "+++", christoffel_ppp),
    TableRow(CHRISTOFFEL_TABLE, "++n", christoffel_ppn),
    TableRow(CHRISTOFFEL_TABLE, "r++", christoffel_rpp),
    TableRow(CHRISTOFFEL_TABLE, "+mn", christoffel_pmn),
    TableRow(CHRISTOFFEL_TABLE, "r+n", christoffel_rpn),
    TableRow(CHRISTOFFEL_TABLE, "rmn", christoffel_rmn),
    TableRow(EQUATION_TABLE, "G++", equation_top),
    TableRow(EQUATION_TABLE, "G+", equation_vector),
    TableRow(EQUATION_TABLE, "G", equation_tensor),
]


def _table_residual(row):
    """Equation rows are compared up to a field independent normalization."""
    def residual(s):
        pairs = row.pairs(s)
        if row.table == EQUATION_TABLE:
            return proportional([a for a, _ in pairs], [b for _, b in pairs])[1]
        return [a - b for a, b in pairs]
    return residual


# Identities

def christoffel_trace(s):
    """``Gamma^{RM}_M = 0``."""
    return tractor_contract(s.gamma2, 1, 2, s.geo)


def christoffel_divergence(s):
    """``D_M Gamma^{RMN} = 0``."""
    return divergence(s.gamma2, s.geo, position=1)


def equation_trace(s):
    return tractor_contract(s.G, 0, 1, s.geo)


def equation_divergence(s):
    return divergence(s.G, s.geo)


def scale_contraction(s):
    """
    ``I_M G^{MN} = -D^N X`` with ``X = I_M I_N V^{MN}``.  The first and last
    terms of ``G`` cancel under ``I_M I_R`` by symmetry of ``V``, and a parallel
    weight zero ``I`` passes through ``D``.
    """
    I_dot_G = contract_with(s.G, 0, s.I, s.geo)
    X = contract_with(contract_with(s.V, 0, s.I, s.geo), 0, s.I, s.geo)
    D_X = thomas_D(X, s.geo)
    return I_dot_G + D_X


def _bianchi(s):
    d, w, P = s.d, s.w, s.P
    top, vector, tensor = s.action_equations
    first = vector * (w / sp.Integer(2)) - sym_ops(tensor, "div")
    second = sym_ops(tensor, "tr") * (2 * P / d) - sym_ops(vector, "div") * sp.Rational(1, 2) + top * (w + 1)
    return first, second


def bianchi_vector(s):
    return _bianchi(s)[0].residual()


def bianchi_scalar(s):
    return _bianchi(s)[1].residual()


def pauli_fierz_extraction(s):
    """With ``A = B = 0`` the action tensor equation is ``G_Einstein + G_mass`` up to normalization."""
    fixed = Spin2System(s.geo, s.sigma, s.w, gauge_fixed=True)
    tensor = fixed.action_equations[2]
    expected = pauli_fierz(fixed.state(fixed.curved_C), spin2_mass(s.d, s.w, s.P))
    pairs = _state_pairs(tensor, expected, s.d)
    return proportional([a for a, _ in pairs], [b for _, b in pairs])[1]


def _generic_pauli_fierz(s):
    m2 = sp.Symbol("m2")
    V = s.state(generic_symmetric(s.geo, 2, "V"))
    return V, m2, pauli_fierz(V, m2)


def divergence_constraint(s):
    """``div G_PF = -m^2 (div - grad tr) V``."""
    V, m2, field_equation = _generic_pauli_fierz(s)
    expected = (sym_ops(V, "div") - apply_word(V, ["grad", "tr"])) * -m2
    return (sym_ops(field_equation, "div") - expected).residual()


def trace_constraint(s):
    """``div^2 G_PF + m^2 tr G_PF/(d-2) = (d-1)/(d-2) m^2 (m^2 - (2P/d)(d-2)) tr V``."""
    d, P = s.d, s.P
    V, m2, field_equation = _generic_pauli_fierz(s)
    left = apply_word(field_equation, ["div", "div"]) + sym_ops(field_equation, "tr") * (m2 / (d - 2))
    right = sym_ops(V, "tr") * (sp.Rational(d - 1, d - 2) * m2 * (m2 - 2 * P / d * (d - 2)))
    return (left - right).residual()


def linearized_diffeomorphism(s):
    """At ``m^2 = 0`` the Pauli-Fierz operator annihilates ``grad xi``."""
    xi = s.state(generic_symmetric(s.geo, 1, "xi"))
    return pauli_fierz(sym_ops(xi, "grad"), 0).residual()


def partially_massless_gauge(s):
    """At ``m^2 = (2P/d)(d-2)`` it annihilates ``(grad^2 + 2P/d g) xi``."""
    d, P = s.d, s.P
    xi = s.scalar_state(s.geo.ctx.field("xi"))
    shift = apply_word(xi, ["grad", "grad"]) + sym_ops(xi, "g") * (2 * P / d)
    return pauli_fierz(shift, 2 * P / d * (d - 2)).residual()


def _gauge_parameter(s, middle=None):
    """``xi^M = (xi^+, xi^m, (P/d) xi^+)``, so ``I.xi = 0`` at constant scale."""
    ctx, d = s.geo.ctx, s.d
    plus = ctx.field("xip")
    middle = [ctx.field(f"xi{m}") for m in range(d)] if middle is None else middle
    return plus, middle, tractor_vector([plus] + middle + [s.P / d * plus], d, s.w + 1)


def gauge_components(s):
    """Slots of ``D^(M xi^N)``: ``(d+2w)(w+1) xi^+``, ``(d+2w)(w xi^m + D^m xi^+)/2``, ..."""
    d, w, P = s.d, s.w, s.P
    eta = s.geo.ctx.eta
    plus, middle, xi = _gauge_parameter(s)
    shift = gauge_shift(xi, s.geo)
    grad = s.grad_up(plus)
    grad_xi = s.vector_gradient(middle)
    residuals = [shift[PLUS, PLUS] - (d + 2 * w) * (w + 1) * plus]
    residuals += [shift[mid(m), PLUS] - (d + 2 * w) * (w * middle[m] + grad[m]) / 2 for m in range(d)]
    residuals += [
        shift[mid(m), mid(n)] - (d + 2 * w) * ((grad_xi[m][n] + grad_xi[n][m]) / 2 + 2 * P / d * eta[m, n] * plus)
        for m in range(d) for n in range(d)
    ]
    return residuals


def gauge_invariance(s):
    """``D^(M xi^N)`` with ``I.xi = 0`` satisfies the constraint and leaves ``G^{MN}`` unchanged."""
    _, _, xi = _gauge_parameter(s)
    shift = gauge_shift(xi, s.geo)
    constraint = field_constraint(shift, s.geo)
    G = equation(christoffels(thomas_D(shift, s.geo)), s.I, s.geo)
    return [constraint, G]


def partially_massless_tractor(s):
    """At ``w = -1`` with ``xi^m = D^m xi^+`` only ``(d-2)(D^m D^n + (2P/d) eta^{mn}) xi^+`` survives."""
    d, P = s.d, s.P
    eta = s.geo.ctx.eta
    system = Spin2System(s.geo, s.sigma, -1)
    plus = s.geo.ctx.field("xip")
    _, _, xi = _gauge_parameter(system, middle=system.grad_up(plus))
    shift = gauge_shift(xi, s.geo)
    hessian = system.vector_gradient(system.grad_up(plus))
    residuals = [shift[PLUS, PLUS]] + [shift[mid(m), PLUS] for m in range(d)]
    residuals += [
        shift[mid(m), mid(n)] - (d - 2) * (hessian[m][n] + 2 * P / d * eta[m, n] * plus)
        for m in range(d) for n in range(d)
    ]
    return residuals


def conformal_weight_decoupling(s):
    """
    At ``w = 1 - d/2`` only ``D^-`` survives and the top left block of ``G^{MN}``
    is ``sigma D^- V^{MN}`` at any scale: the equations reduce to the scale
    free ``Gamma^{RMN} = 0`` system.
    """
    d = s.d
    sigma = s.geo.ctx.field("s")
    system = Spin2System(s.geo, sigma, 1 - sp.Rational(d, 2))
    DV, G = system.DV, system.G
    n = d + 2
    residuals = [DV[M, N, R] for M in range(n - 1) for N in range(n) for R in range(n)]
    residuals += [G[M, N] - sigma * DV[minus(d), M, N] for M in range(n - 1) for N in range(n - 1)]
    return residuals


def mass_relation(s):
    d, w, P = sp.Symbol("d"), sp.Symbol("w"), sp.Symbol("P")
    mass = spin2_mass(d, w, P)
    return [
        mass + 2 * P / d * w * (w + d - 1),
        mass.subs(w, 0),
        mass.subs(w, -1) - 2 * P / d * (d - 2),
        spin2_mass(4, -1, P) - P,
        convention_shift(2, d, P) - 4 * P / d,
    ]


ENTRIES = [
    Identity(f"table/{row.table}/{row.row}", f"spin2/table/{row.table}", _table_residual(row), CONSTANT_CURVATURE)
    for row in TABLE_ROWS
] + [
    Identity("christoffel-trace", "spin2/christoffel-identities", christoffel_trace, CONFORMALLY_FLAT),
    Identity("christoffel-divergence", "spin2/christoffel-identities", christoffel_divergence, CONFORMALLY_FLAT),
    Identity("equation-trace", "spin2/equation-identities", equation_trace, CONSTANT_CURVATURE),
    Identity("equation-divergence", "spin2/equation-identities", equation_divergence, CONSTANT_CURVATURE),
    Identity("scale-contraction", "spin2/equation-identities", scale_contraction, CONSTANT_CURVATURE),
    Identity("bianchi-vector", "spin2/bianchi-identities", bianchi_vector, CONSTANT_CURVATURE),
    Identity("bianchi-scalar", "spin2/bianchi-identities", bianchi_scalar, CONSTANT_CURVATURE),
    Identity("pauli-fierz", "spin2/pauli-fierz-extraction", pauli_fierz_extraction, CONSTANT_CURVATURE),
    Identity("divergence-constraint", "spin2/pauli-fierz-constraints", divergence_constraint, CONSTANT_CURVATURE),
    Identity("trace-constraint", "spin2/pauli-fierz-constraints", trace_constraint, CONSTANT_CURVATURE),
    Identity("linearized-diffeomorphism", "spin2/massless-gauge", linearized_diffeomorphism, CONSTANT_CURVATURE),
    Identity("partially-massless-gauge", "spin2/partially-massless-gauge", partially_massless_gauge,
             CONSTANT_CURVATURE),
    Identity("partially-massless-tractor", "spin2/partially-massless-gauge", partially_massless_tractor,
             CONSTANT_CURVATURE),
    Identity("gauge-components", "spin2/stueckelberg-gauge", gauge_components, CONSTANT_CURVATURE),
    Identity("gauge-invariance", "spin2/stueckelberg-gauge", gauge_invariance, CONSTANT_CURVATURE),
    Identity("conformal-weight", "spin2/conformal-weight-decoupling", conformal_weight_decoupling,
             CONFORMALLY_FLAT),
    Identity("mass-relation", "spin2/mass-weight-relation", mass_relation),
]


# Documented table discrepancies

def _table_key(record):
    return f"{SUITE}/{record.name[len('table/'):]}" if record.name.startswith("table/") else None


def apply_discrepancies(report, notes):
    """Failed table rows named in the whitelist become skipped records carrying the note."""
    return apply_report_discrepancies(report, notes, key=_table_key)


def spin2_system(geo, sigma=None, weight=None, names=None, context=None):
    context = context or Spin2System(geo, sigma, weight)
    entries = [e for e in ENTRIES if names is None or e.name in names]
    report = run_system(context, entries, SUITE, "Spin 2")
    apply_discrepancies(report, load_discrepancies())
    d, w, P = sp.Symbol("d"), sp.Symbol("w"), sp.Symbol("P")
    lam = sp.Symbol("Lambda")
    report.set_quantity("spin2/mass-squared", spin2_mass(d, w, P))
    report.set_quantity("spin2/bf-bound", bf_bound(2, d, P))
    report.set_quantity("spin2/partially-massless-mass", spin2_mass(d, -1, P))
    report.set_quantity("spin2/partially-massless-mass-d4-lambda", spin2_mass(4, -1, schouten_from_lambda(lam, 4)))
    report.set_quantity("spin2/lambda", cosmological_constant(P, d))
    return report


def spin2_tables(geo, sigma=None, weight=None):
    """Recompute the three tables: both sides of every row as quantities, a record per row."""
    context = Spin2System(geo, sigma, weight)
    names = {f"table/{row.table}/{row.row}" for row in TABLE_ROWS}
    report = spin2_system(geo, sigma, weight, names=names, context=context)
    report.title = "Spin 2 tables"
    for row in TABLE_ROWS:
        try:
            pairs = row.pairs(context)
        except (PoleWeightError, UnsupportedInput) as exc:
            report.set_quantity(f"{row.key}/direct", f"unavailable: {exc}")
            continue
        direct, tabulated = next(((a, b) for a, b in pairs if simplify(a - b) != 0), pairs[0])
        report.set_quantity(f"{row.key}/direct", to_display(simplify(direct)))
        report.set_quantity(f"{row.key}/tabulated", to_display(simplify(tabulated)))
    return report


def component_equation(geo, sigma=None, weight=None):
    """``G^{MN}`` with the constraint solved, for the ``eom`` command."""
    return Spin2System(geo, sigma, weight).G
