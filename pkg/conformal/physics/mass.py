"""
Mass and Weyl weight relations.

Sign conventions: ``P > 0`` on de Sitter, ``P < 0`` on anti de Sitter and
``Lambda = P (2 - d)(d - 1)/d``.  Integer spins have three conventions:

``laplacian-eigenvalue``
    ``mu^2`` of ``(Delta - mu^2) V = 0`` for the middle slots of a traceless,
    divergence-free tractor field: ``(2P/d)[((d-1)/2)^2 - (w + (d-1)/2)^2 + s]``.
``single-derivative-gauge-zero``
    shifted so that ``m^2`` vanishes at ``w = s - 2``, where a single derivative
    gauge invariance appears: ``(2P/d)[((d-5)/2 + s)^2 - (w + (d-1)/2)^2]``.
``standard``
    the Laplacian eigenvalue for scalars, the gauge-zero form for ``s >= 1``
    (Proca at ``s = 1``, Pauli-Fierz at ``s = 2``).

Fermions use the linear mass ``m = sqrt(-P/2d)(d + 2w)``; ``standard`` is its
square and ``laplacian-eigenvalue`` the eigenvalue of the second order operator.
"""
import logging
from dataclasses import dataclass
from enum import Enum

import sympy as sp

from conformal.utils import ConventionError, UnsupportedInput


logger = logging.getLogger(__name__)

P = sp.Symbol("P", real=True)


class Convention(str, Enum):

    STANDARD = "standard"
    LAPLACIAN = "laplacian-eigenvalue"
    GAUGE_ZERO = "single-derivative-gauge-zero"


HALF = sp.Rational(1, 2)
THREE_HALVES = sp.Rational(3, 2)
FERMIONS = (HALF, THREE_HALVES)


def parse_spin(spin):
    """``0``, ``1``, ``"1/2"``, ``"3/2"``, ... as a sympy Rational."""
    try:
        value = sp.Rational(str(spin))
    except (TypeError, ValueError):
        raise UnsupportedInput(f"Spin {spin!r} is not a number")
    if value < 0 or not (value.is_integer or value in FERMIONS):
        raise UnsupportedInput(f"Spin {spin} is not supported; use an integer s >= 0, 1/2 or 3/2")
    return value


@dataclass(frozen=True)
class MassWeightQuery:

    spin: sp.Rational
    d: sp.Expr
    w: sp.Expr
    P: sp.Expr = P
    convention: Convention = Convention.STANDARD

    @classmethod
    def build(cls, spin, d, w, schouten=None, convention=Convention.STANDARD):
        return cls(
            parse_spin(spin),
            sp.sympify(d),
            sp.sympify(w),
            P if schouten is None else sp.sympify(schouten),
            Convention(convention),
        )

    @property
    def is_fermion(self):
        return self.spin in FERMIONS

    def with_weight(self, w):
        return MassWeightQuery(self.spin, self.d, sp.sympify(w), self.P, self.convention)


def _laplacian_bracket(d, w, s):
    return ((d - 1) / sp.Integer(2))**2 - (w + (d - 1) / sp.Integer(2))**2 + s


def _gauge_zero_bracket(d, w, s):
    return ((d - 5) / sp.Integer(2) + s)**2 - (w + (d - 1) / sp.Integer(2))**2


def linear_mass(d, w, schouten=P):
    """``sqrt(-P/2d)(d + 2w)``: the Dirac and gravitino mass."""
    d, w = sp.sympify(d), sp.sympify(w)
    return sp.sqrt(-sp.sympify(schouten) / (2 * d)) * (d + 2 * w)


def _fermion_shift(spin, d, schouten):
    """Laplacian eigenvalue minus the squared linear mass."""
    if spin == HALF:
        return schouten * (d - 1) / 2
    return schouten * (d * (d - 1) + 4) / (2 * d)


def mass_from_weight(q):
    d, w, s, schouten = q.d, q.w, q.spin, q.P
    if q.is_fermion:
        if q.convention is Convention.GAUGE_ZERO:
            raise ConventionError(f"The {q.convention.value} convention applies to integer spins only")
        squared = -schouten / (2 * d) * (d + 2 * w)**2
        if q.convention is Convention.LAPLACIAN:
            squared += _fermion_shift(s, d, schouten)
        return sp.factor(sp.expand(squared))
    if q.convention is Convention.LAPLACIAN or (q.convention is Convention.STANDARD and s == 0):
        return sp.factor(sp.expand(2 * schouten / d * _laplacian_bracket(d, w, s)))
    if s == 0:
        raise ConventionError("A scalar has no single derivative gauge invariance")
    return sp.factor(sp.expand(2 * schouten / d * _gauge_zero_bracket(d, w, s)))


def bf_bound(spin, d, schouten=P, convention=Convention.STANDARD):
    """The extremal value of ``mass_from_weight`` over real weights."""
    q = MassWeightQuery.build(spin, d, bf_saturating_weight(spin, d), schouten, convention)
    return mass_from_weight(q)


def bf_saturating_weight(spin, d):
    spin, d = parse_spin(spin), sp.sympify(d)
    return -d / 2 if spin in FERMIONS else (1 - d) / 2


def satisfies_bound(q):
    """Whether ``q`` lies on the stable side of its bound; needs a numeric ``P``."""
    if not q.P.is_number:
        raise UnsupportedInput("Bound comparisons need a numeric P")
    gap = sp.nsimplify(mass_from_weight(q) - bf_bound(q.spin, q.d, q.P, q.convention))
    return bool(gap * sp.sign(-q.P) >= 0) if q.P != 0 else gap == 0


def cosmological_constant(schouten, d):
    d = sp.sympify(d)
    return sp.sympify(schouten) * (2 - d) * (d - 1) / d


def schouten_from_lambda(cosmological, d):
    d = sp.sympify(d)
    return sp.sympify(cosmological) * d / ((2 - d) * (d - 1))


def convention_shift(spin, d, schouten=P):
    """``mu^2 - m^2_standard``: a constant in ``(d, s, P)``."""
    spin, d = parse_spin(spin), sp.sympify(d)
    if spin in FERMIONS:
        return sp.factor(_fermion_shift(spin, d, schouten))
    if spin == 0:
        return sp.S.Zero
    w = sp.Dummy("w")
    return sp.factor(sp.expand(2 * schouten / d * (_laplacian_bracket(d, w, spin) - _gauge_zero_bracket(d, w, spin))))


def convert_mass(value, spin, d, source, target, schouten=P):
    source, target = Convention(source), Convention(target)
    spin = parse_spin(spin)
    for convention in (source, target):
        if convention is Convention.GAUGE_ZERO and (spin == 0 or spin in FERMIONS):
            raise ConventionError(f"The {convention.value} convention does not apply to spin {spin}")

    def to_laplacian(v, convention):
        return v if convention is Convention.LAPLACIAN else v + convention_shift(spin, d, schouten)

    value = to_laplacian(sp.sympify(value), source)
    if target is Convention.LAPLACIAN:
        return sp.factor(value)
    return sp.factor(value - convention_shift(spin, d, schouten))


# Gauge ladders

def residual_gauge_weights(s):
    """Weights with a depth ``t`` gauge invariance, ``t = 1 .. s``: ``s-2, .., 0, -1``."""
    return [depth_weight(s, t) for t in range(1, int(s) + 1)]


def depth_weight(s, t):
    return sp.sympify(s) - t - 1


def depth_mass(s, d, t, schouten=P):
    """The tabulated depth ``t`` eigenvalue ``-(2P/d)[(s-t-1)(s-t-1+d) + t + 1]``."""
    d = sp.sympify(d)
    return sp.factor(-2 * schouten / d * ((s - t - 1) * (s - t - 1 + d) + t + 1))


def depth_offset(s, d, schouten=P):
    """``mu^2(depth_weight) - depth_mass``; the two labelings differ by ``4Ps/d``."""
    t = sp.Symbol("t")
    q = MassWeightQuery.build(s, d, depth_weight(s, t), schouten, Convention.LAPLACIAN)
    return sp.factor(sp.expand(mass_from_weight(q) - depth_mass(s, d, t, schouten)))


def depth_of_weight(s, w):
    """``t`` such that ``w = s - t - 1``, or ``None``."""
    t = sp.sympify(s) - sp.sympify(w) - 1
    if t.is_integer and 1 <= t <= s:
        return int(t)
    return None


# Special weights

def conformal_weight(spin, d):
    spin, d = parse_spin(spin), sp.sympify(d)
    return -d / 2 if spin in FERMIONS else 1 - d / 2


def pole_weights(spin, d):
    """Weights where the constraint solutions of the tractor system degenerate."""
    spin, d = parse_spin(spin), sp.sympify(d)
    poles = {-d / 2}
    if spin == 1:
        poles.add(1 - d)
    return sorted(poles, key=sp.default_sort_key)


def classify_weight(spin, d, w):
    """Tags naming what is special about ``w``: empty for a generic weight."""
    spin, d, w = parse_spin(spin), sp.sympify(d), sp.sympify(w)

    def equal(a, b):
        return sp.simplify(a - b) == 0

    tags = []
    if spin.is_integer and spin >= 1:
        t = depth_of_weight(spin, w)
        if t == 1:
            tags.append("massless")
        elif t is not None:
            tags.append(f"partially-massless depth {t}")
    if spin == 1 and equal(w, -1):
        tags.append("maxwell")
    if spin == THREE_HALVES and equal(w, -1):
        tags.append("massless")
    if equal(w, conformal_weight(spin, d)):
        tags.append("conformal")
    if equal(w, bf_saturating_weight(spin, d)):
        tags.append("bf-saturating")
    if any(equal(w, pole) for pole in pole_weights(spin, d)):
        tags.append("degenerate")
    return tags
