"""
Arbitrary integer spin: a totally symmetric rank ``s`` tractor of weight ``w``.

On-shell, ``D.V = X.V = I.D V = I.V = tr V = 0`` hold for a field living in
the middle slots only, and then reduce to a transverse traceless field with
Laplacian eigenvalue ``(2P/d)[((d-1)/2)^2 - (w + (d-1)/2)^2 + s]``.  Partially
massless points sit at ``w = s - t - 1`` for depths ``t = 1 .. s``.

Off-shell, ``G = I.D V - s D^(M1 I.V^{M2..Ms)}`` is a conjecture; its gauge
invariance is checked at rank three.
"""
import itertools
import logging

import sympy as sp

from conformal.identities import Identity
from conformal.physics.base import CONSTANT_CURVATURE, SystemContext, run_system
from conformal.physics.mass import (
    Convention,
    MassWeightQuery,
    bf_bound,
    depth_mass,
    depth_of_weight,
    depth_offset,
    depth_weight,
    mass_from_weight,
    residual_gauge_weights,
)
from conformal.reports import Report
from conformal.symalg import generic_symmetric
from conformal.tensor import IndexKind, TensorField, apply_matrix, laplacian, symmetrize, up
from conformal.tractor import (
    PLUS,
    TRACTOR_UP,
    contract_with,
    contracted_thomas_D,
    mid,
    minus,
    thomas_D,
)
from conformal.utils import UnsupportedInput, memoized


logger = logging.getLogger(__name__)

SUITE = "spin-s"

DEFAULT_RANKS = (1, 2, 3)
CONJECTURE_RANK = 3


def laplacian_mass(s, d, w, schouten):
    return mass_from_weight(MassWeightQuery.build(s, d, w, schouten, Convention.LAPLACIAN))


class SpinSSystem(SystemContext):
    """A rank ``s`` tractor whose only nonzero slots are the middle ones."""

    def __init__(self, geo, rank, sigma=None, weight=None):
        super().__init__(geo, sigma, weight)
        if rank < 1:
            raise UnsupportedInput("Spin s systems need s >= 1")
        self.rank = rank

    @memoized
    def curved(self):
        return generic_symmetric(self.geo, self.rank, "V", self.w)

    @memoized
    def frame(self):
        """Frame upper components of the curved field."""
        eta, E = self.geo.ctx.eta, self.geo.inverse_vielbein
        to_frame = sp.Matrix(self.d, self.d, lambda m, mu: eta[m, m] * E[m, mu])
        field = self.curved
        for position in range(self.rank):
            field = apply_matrix(field, position, to_frame, up(IndexKind.FRAME))
        return field.simplify()

    @memoized
    def V(self):
        components = {tuple(mid(m) for m in idx): value for idx, value in self.frame.items()}
        return TensorField((TRACTOR_UP,) * self.rank, self.d, components, weight=self.w)

    @memoized
    def DV(self):
        return thomas_D(self.V, self.geo)

    @memoized
    def divergence_field(self):
        """``D_k V^{k m2 .. ms}`` as frame components."""
        gradient = self.frame_gradient(self.frame)
        keys = itertools.product(range(self.d), repeat=self.rank - 1)
        return {idx: sum(gradient[(k, k) + idx] for k in range(self.d)) for idx in keys}

    def frame_laplacian_tensor(self, field):
        """Bochner Laplacian of a frame upper tensor, keyed by frame indices."""
        result = laplacian(field, self.geo)
        return {idx: result[idx] for idx in self.middle_keys()}

    def middle_keys(self, rank=None):
        return list(itertools.product(range(self.d), repeat=self.rank if rank is None else rank))


def tractor_divergence(c):
    """Middle slots of ``D_M V^{M ..}`` equal ``(d+2w) D.V``."""
    d, w = c.d, c.w
    DV, div = c.DV, c.divergence_field
    residuals = []
    for idx in c.middle_keys(c.rank - 1):
        tractor_idx = tuple(mid(m) for m in idx)
        value = DV[(minus(d), PLUS) + tractor_idx] + DV[(PLUS, minus(d)) + tractor_idx]
        value += sum(c.eta[mid(k), mid(k)] * DV[(mid(k), mid(k)) + tractor_idx] for k in range(d))
        residuals.append(value - (d + 2 * w) * div[idx])
    return residuals


def top_current(c):
    """``(I.D V)^{+ m2 .. ms} = 2 sigma D.V``."""
    I_DV = contract_with(c.DV, 0, c.I, c.geo)
    div = c.divergence_field
    return [I_DV[(PLUS,) + tuple(mid(m) for m in idx)] - 2 * c.sigma * div[idx]
            for idx in c.middle_keys(c.rank - 1)]


def wave_equation(c):
    """Middle slots of ``I.D V`` are ``-sigma [Delta + (2P/d)(w(w+d-1) - s)] V``."""
    d, w, P, s = c.d, c.w, c.P, c.rank
    I_DV = contract_with(c.DV, 0, c.I, c.geo)
    box = c.frame_laplacian_tensor(c.frame)
    return [
        I_DV[tuple(mid(m) for m in idx)] + c.sigma * (box[idx] + 2 * P / d * (w * (w + d - 1) - s) * c.frame[idx])
        for idx in c.middle_keys()
    ]


def eigenvalue(c):
    """The eigenvalue read off the wave equation is the Laplacian mass relation."""
    d, w, P, s = c.d, c.w, c.P, c.rank
    return -2 * P / d * (w * (w + d - 1) - s) - laplacian_mass(s, d, w, P)


def _conjecture_parameter(c):
    """Symmetric rank two ``xi`` of weight ``w + 1`` with ``I.xi = 0`` at constant scale."""
    ctx, d, P = c.geo.ctx, c.d, c.P
    ratio = P / d
    top = ctx.field("xipp")
    cross = [ctx.field(f"xip{m}") for m in range(d)]
    components = {(PLUS, PLUS): top}
    components[PLUS, minus(d)] = components[minus(d), PLUS] = ratio * top
    components[minus(d), minus(d)] = ratio**2 * top
    for m in range(d):
        components[PLUS, mid(m)] = components[mid(m), PLUS] = cross[m]
        components[minus(d), mid(m)] = components[mid(m), minus(d)] = ratio * cross[m]
        for n in range(m, d):
            components[mid(m), mid(n)] = components[mid(n), mid(m)] = ctx.field(f"xi{m}{n}")
    return TensorField((TRACTOR_UP, TRACTOR_UP), d, components, weight=c.w + 1)


def conjectured_equation(V, scale, geo, keys):
    """``I.D V - s D^(M1 I.V^{M2..Ms)}`` at ``keys``."""
    s = V.rank
    I_DV = contracted_thomas_D(V, geo, scale, keys)
    shifted = symmetrize(thomas_D(contract_with(V, 0, scale, geo), geo), range(s))
    return [I_DV[k] - s * shifted[k] for k in keys]


def conjecture_gauge(c):
    """Rank three: ``V -> V + D^(M1 xi^{M2 M3)}`` with ``I.xi = 0`` leaves the conjectured equation unchanged."""
    xi = _conjecture_parameter(c)
    shift = symmetrize(thomas_D(xi, c.geo), range(CONJECTURE_RANK))
    keys = list(itertools.combinations_with_replacement(range(c.n), CONJECTURE_RANK))
    return conjectured_equation(shift, c.I, c.geo, keys)


def residual_weights(c):
    """Gauge weights ``s-2, .., 0, -1`` are the depth ``t`` weights ``s - t - 1``."""
    residuals = []
    for s in range(1, 5):
        weights = residual_gauge_weights(s)
        residuals += [a - b for a, b in zip(weights, list(range(s - 2, -2, -1)))]
        residuals += [depth_of_weight(s, depth_weight(s, t)) - t for t in range(1, s + 1)]
    return residuals


def depth_labelings(c):
    """The Laplacian relation at ``w = s - t - 1`` exceeds the tabulated depth mass by ``4Ps/d``."""
    d, P = sp.Symbol("d"), sp.Symbol("P")
    residuals = []
    for s in range(1, 5):
        residuals.append(depth_offset(s, d, P) - 4 * P * s / d)
        for t in range(1, s + 1):
            q = MassWeightQuery.build(s, d, depth_weight(s, t), P, Convention.LAPLACIAN)
            residuals.append(mass_from_weight(q) - depth_mass(s, d, t, P) - 4 * P * s / d)
    return residuals


def single_derivative_gauge(c):
    """At depth one the gauge-zero mass vanishes."""
    d, P = sp.Symbol("d"), sp.Symbol("P")
    return [
        mass_from_weight(MassWeightQuery.build(s, d, depth_weight(s, 1), P, Convention.GAUGE_ZERO))
        for s in range(1, 5)
    ]


def reductions(c):
    """Spin one: the Proca eigenvalue; spin two at ``w = -1``: the Pauli-Fierz partially massless mass."""
    d, w, P = sp.Symbol("d"), sp.Symbol("w"), sp.Symbol("P")
    proca = 2 * (d - 1) * P / d - 2 * P / d * (w + 1) * (w + d - 2)
    pauli_fierz = laplacian_mass(2, d, -1, P) - 4 * P / d
    return [
        laplacian_mass(1, d, w, P) - proca,
        pauli_fierz - 2 * P / d * (d - 2),
        mass_from_weight(MassWeightQuery.build(2, d, -1, P)) - pauli_fierz,
    ]


def bounds(c):
    d, P = sp.Symbol("d"), sp.Symbol("P")
    residuals = []
    for s in range(0, 5):
        residuals.append(bf_bound(s, d, P, Convention.LAPLACIAN) - 2 * P / d * (((d - 1) / sp.Integer(2))**2 + s))
        if s:
            residuals.append(bf_bound(s, d, P, Convention.GAUGE_ZERO) - 2 * P / d * ((d - 5) / sp.Integer(2) + s)**2)
    return residuals


def _component_entries(rank):
    return [
        Identity(f"tractor-divergence/rank-{rank}", "spin-s/on-shell-components", tractor_divergence,
                 CONSTANT_CURVATURE),
        Identity(f"top-current/rank-{rank}", "spin-s/on-shell-components", top_current, CONSTANT_CURVATURE),
        Identity(f"wave-equation/rank-{rank}", "spin-s/on-shell-components", wave_equation, CONSTANT_CURVATURE),
        Identity(f"eigenvalue/rank-{rank}", "spin-s/mass-weight-relation", eigenvalue),
    ]


FORMULA_ENTRIES = [
    Identity("residual-weights", "spin-s/residual-gauge-weights", residual_weights),
    Identity("depth-labelings", "spin-s/depth-masses", depth_labelings),
    Identity("single-derivative-gauge", "spin-s/depth-masses", single_derivative_gauge),
    Identity("reductions", "spin-s/lower-spin-reductions", reductions),
    Identity("bounds", "spin-s/bf-bounds", bounds),
]

CONJECTURE_ENTRY = Identity(
    "conjecture-gauge/rank-3", "spin-s/conjectured-equation", conjecture_gauge, CONSTANT_CURVATURE
)


def spin_s_onshell(geo, ranks=DEFAULT_RANKS, sigma=None, weight=None, names=None):
    """Component checks for each rank, the formula ledger and the rank three conjecture."""
    report = Report(title="Spin s")
    for rank in ranks:
        context = SpinSSystem(geo, rank, sigma, weight)
        entries = [e for e in _component_entries(rank) if names is None or e.name in names]
        if rank == CONJECTURE_RANK and (names is None or CONJECTURE_ENTRY.name in names):
            entries.append(CONJECTURE_ENTRY)
        report.merge(run_system(context, entries, SUITE, "Spin s"))
    context = SpinSSystem(geo, 1, sigma, weight)
    entries = [e for e in FORMULA_ENTRIES if names is None or e.name in names]
    report.merge(run_system(context, entries, SUITE, "Spin s"))
    for record in report.records:
        if record.name.startswith("conjecture"):
            record.detail = "conjecture-grade; " + record.detail if record.detail else "conjecture-grade"
    d, w, P, s, t = sp.symbols("d w P s t")
    report.set_quantity("spin-s/laplacian-mass", 2 * P / d * (((d - 1) / 2)**2 - (w + (d - 1) / 2)**2 + s))
    report.set_quantity("spin-s/depth-mass", -2 * P / d * ((s - t - 1) * (s - t - 1 + d) + t + 1))
    report.set_quantity("spin-s/residual-weights", "w = s-2, s-3, .., 0, -1")
    return report
