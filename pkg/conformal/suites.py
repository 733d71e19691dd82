"""
The suite registry and the report builders behind the ``conformal`` command.

Every builder returns a :class:`~conformal.reports.Report`; the command only
picks an exporter and an exit code.
"""
import logging

import sympy as sp

from conformal import app_settings
from conformal.backgrounds import random_weyl_factor
from conformal.expr import PatchContext, parse, simplify, to_display
from conformal.geometry import bianchi_residuals, is_conformally_flat, is_einstein, riemann_pair_symmetry, weyl_trace
from conformal.identities import identity_suite
from conformal.physics import fermions, killing, scalar, spin2, vector
from conformal.physics.mass import (
    FERMIONS,
    Convention,
    MassWeightQuery,
    bf_bound,
    classify_weight,
    conformal_weight,
    convention_shift,
    linear_mass,
    mass_from_weight,
    parse_spin,
)
from conformal.physics.spin_s import spin_s_onshell
from conformal.reports import Report, check, skipped
from conformal.spinor_identities import spinor_identity_suite
from conformal.symalg import verify_algebra
from conformal.tensor import TensorField
from conformal.utils import ConformalError, UnsupportedInput
from conformal.weyl import WeylFactor, verify_compendium


logger = logging.getLogger(__name__)

GEOMETRY = "geometry"


def _weyl_or_default(bundle):
    if bundle.weyl is not None:
        return bundle.weyl
    return WeylFactor(random_weyl_factor(bundle.ctx, seed=app_settings.CONFORMAL_RANDOM_SEED), bundle.ctx)


def _killing(bundle, weight):
    if bundle.killing is None:
        report = Report(title="Killing tractor")
        report.add(skipped(killing.SUITE, "candidate", "killing/vector-tractor", "no [killing] section"))
        return report
    return killing.killing_suite(bundle.geo, bundle.killing, bundle.sigma, weight)


SUITES = {
    "compendium": lambda b, w: verify_compendium(b.geo, _weyl_or_default(b), b.scale, w),
    "tractor-identities": lambda b, w: identity_suite(b.geo, b.sigma, w, weyl=b.weyl),
    "spinor-identities": lambda b, w: spinor_identity_suite(b.geo, b.sigma, w, weyl=b.weyl),
    "symtensor-algebra": lambda b, w: verify_algebra(b.geo),
    "spin0": lambda b, w: scalar.scalar_suite(b.geo, b.sigma, w),
    "spin1": lambda b, w: vector.spin1_system(b.geo, b.sigma, w),
    "spin2": lambda b, w: spin2.spin2_system(b.geo, b.sigma, w),
    "spin-s": lambda b, w: spin_s_onshell(b.geo, sigma=b.sigma, weight=w),
    "dirac": lambda b, w: fermions.dirac_system(b.geo, b.sigma, w),
    "rs": lambda b, w: fermions.rarita_schwinger_system(b.geo, b.sigma, w),
    "killing": _killing,
}

DEFAULT_SUITES = ("compendium", "tractor-identities", "spin0")


def parse_weight(value):
    """``None`` for ``symbolic`` (or nothing), otherwise an exact rational."""
    if value is None or str(value).strip() == "symbolic":
        return None
    try:
        return sp.Rational(str(value).strip())
    except (TypeError, ValueError):
        raise UnsupportedInput(f"Weight {value!r} is neither 'symbolic' nor a rational number")


def parse_dimension(value):
    """An integer ``d >= 3``, or ``d`` for a symbolic dimension."""
    value = str(value).strip()
    if value == "d":
        return sp.Symbol("d")
    try:
        d = int(value)
    except ValueError:
        raise UnsupportedInput(f"Dimension {value!r} is neither an integer nor 'd'")
    if d < 3:
        raise UnsupportedInput("Mass relations need d >= 3")
    return sp.Integer(d)


def parse_schouten(text):
    """A ``--P`` expression in ``d`` and ``Lambda``."""
    ctx = PatchContext(("x", "y"))
    ctx.add_param("d")
    ctx.add_param("Lambda")
    return parse(text, ctx)


def run_suites(bundle, names=None, weight=None):
    names = list(names or DEFAULT_SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise UnsupportedInput(f"Unknown suite {unknown[0]!r}; choose from {sorted(SUITES)}")
    report = Report(title="Verification", digest=Report.digest_of(bundle.spec.source))
    for name in names:
        logger.info("Suite %s started", name)
        try:
            report.merge(SUITES[name](bundle, weight))
        except ConformalError as exc:
            report.add(skipped(name, "suite", f"{name}/preamble", str(exc)))
        logger.info("Suite %s finished", name)
    return report


# Geometry report

def _nonzero(field):
    return "; ".join(f"{list(k)}: {to_display(v)}" for k, v in sorted(field.nonzero_components().items())) or "0"


def _matrix(m):
    """Rows of grammar text, or ``0``."""
    m = m.applyfunc(simplify)
    if all(v == 0 for v in m):
        return "0"
    rows = (", ".join(to_display(v) for v in m.row(i)) for i in range(m.rows))
    return "[" + ", ".join(f"[{row}]" for row in rows) + "]"


def _verdict(value):
    return {True: "true", False: "false", None: "undecided"}[value]


def geometry_report(bundle):
    """The full curvature pipeline in normal form, plus its self-consistency checks."""
    geo = bundle.geo
    report = Report(title="Geometry", digest=Report.digest_of(bundle.spec.source))
    report.set_quantity("geometry/metric", _matrix(geo.metric))
    report.set_quantity("geometry/christoffel", _nonzero(geo.christoffel))
    report.set_quantity("geometry/riemann", _nonzero(geo.riemann))
    report.set_quantity("geometry/ricci", _matrix(geo.ricci))
    report.set_quantity("geometry/scalar-curvature", geo.scalar_curvature)
    report.set_quantity("geometry/einstein", _verdict(is_einstein(geo) if geo.dim > 2 else None))
    first, second = bianchi_residuals(geo)
    report.add(check(GEOMETRY, "bianchi-first", "geometry/bianchi", first))
    report.add(check(GEOMETRY, "bianchi-second", "geometry/bianchi", second))
    if geo.dim == 2:
        report.add(skipped(GEOMETRY, "schouten", "geometry/schouten", "Schouten tensor needs d >= 3"))
        return report
    report.set_quantity("geometry/schouten", _matrix(geo.schouten))
    report.set_quantity("geometry/schouten-trace", geo.schouten_trace)
    report.set_quantity("geometry/weyl", _nonzero(geo.weyl))
    report.set_quantity("geometry/cotton", _nonzero(geo.cotton))
    report.set_quantity("geometry/conformally-flat", _verdict(is_conformally_flat(geo)))
    report.add(check(GEOMETRY, "riemann-pair-symmetry", "geometry/riemann-symmetries", riemann_pair_symmetry(geo)))
    report.add(check(GEOMETRY, "weyl-traceless", "geometry/riemann-decomposition", weyl_trace(geo)))
    return report


# Mass

def mass_report(spin, dim, weight=None, convention=Convention.STANDARD, schouten=None, argv=()):
    spin = parse_spin(spin)
    d = parse_dimension(dim)
    w = parse_weight(weight)
    w = sp.Symbol("w") if w is None else w
    P = sp.Symbol("P") if schouten is None else parse_schouten(schouten)
    convention = Convention(convention)
    q = MassWeightQuery.build(spin, d, w, P, convention)
    report = Report(title="Mass", digest=Report.digest_of(" ".join(argv)))
    report.set_quantity("mass/spin", str(spin))
    report.set_quantity("mass/convention", convention.value)
    report.set_quantity("mass/weight", w)
    report.set_quantity("mass/mass-squared", mass_from_weight(q))
    report.set_quantity("mass/bf-bound", bf_bound(spin, d, P, convention))
    report.set_quantity("mass/conformal-weight", conformal_weight(spin, d))
    report.set_quantity("mass/convention-shift", convention_shift(spin, d, P))
    if spin in FERMIONS:
        report.set_quantity("mass/linear-mass", linear_mass(d, w, P))
    tags = classify_weight(spin, d, w) if w.is_number else []
    report.set_quantity("mass/classification", ", ".join(tags) or "generic")
    return report


# Component equations

EOM_BUILDERS = {
    sp.Integer(0): scalar.component_equation,
    sp.Integer(1): vector.component_equation,
    sp.Integer(2): spin2.component_equation,
}


def eom_report(bundle, spin, weight=None):
    spin = parse_spin(spin)
    w = parse_weight(weight)
    if spin in FERMIONS:
        equation = fermions.component_equation_for(bundle.geo, spin, bundle.sigma, w)
    elif spin in EOM_BUILDERS:
        equation = EOM_BUILDERS[spin](bundle.geo, bundle.sigma, w)
    else:
        raise UnsupportedInput(f"No component equation for spin {spin}; use the spin-s suite")
    report = Report(title=f"Equation of motion, spin {spin}", digest=Report.digest_of(bundle.spec.source))
    if isinstance(equation, TensorField):
        for key, value in sorted(equation.nonzero_components().items()):
            report.set_quantity(f"eom/{','.join(map(str, key)) or 'scalar'}", value)
    else:
        report.set_quantity("eom/scalar", equation)
    return report


def tables_report(bundle, weight=None):
    report = spin2.spin2_tables(bundle.geo, bundle.sigma, parse_weight(weight))
    report.digest = Report.digest_of(bundle.spec.source)
    return report
