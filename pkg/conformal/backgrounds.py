"""
Ready-made backgrounds used by the suites, the tests and the bundled spec files.

Every builder returns a :class:`~conformal.geometry.GeometryCache` whose patch
lives in the positive orthant of its coordinates.
"""
import logging
import random

import sympy as sp

from conformal.expr import PatchContext
from conformal.geometry import GeometryCache
from conformal.utils import UnsupportedInput


logger = logging.getLogger(__name__)


def coordinate_names(d, first="t", last=None):
    """``t, x, y, z``-style names; longer patches use numbered spatial coordinates."""
    inner = d - 1 - (last is not None)
    if inner <= 2:
        spatial = ["x", "y"][:inner]
    else:
        spatial = [f"x{i}" for i in range(1, inner + 1)]
    names = [first] + spatial
    if last is not None:
        names.append(last)
    return names


def lorentzian(d):
    return (-1,) + (1,) * (d - 1)


def flat(d, signature=None):
    signature = tuple(signature) if signature is not None else lorentzian(d)
    ctx = PatchContext(coordinate_names(d), signature)
    return GeometryCache(ctx, ctx.eta)


def ads_poincare(d):
    """``z^-2 (-dt^2 + dx^2 + ... + dz^2)`` with ``P_{mu nu} = -g_{mu nu}/2``."""
    ctx = PatchContext(coordinate_names(d, last="z"), lorentzian(d))
    z = ctx.coord("z")
    return GeometryCache(ctx, ctx.eta / z**2, vielbein=sp.eye(d) / z)


def de_sitter(d):
    """Unit de Sitter in conformal time, ``tau^-2 (-dtau^2 + dx^2)``; ``P = d/2``."""
    ctx = PatchContext(coordinate_names(d, first="tau"), lorentzian(d))
    tau = ctx.coord("tau")
    return GeometryCache(ctx, ctx.eta / tau**2, vielbein=sp.eye(d) / tau)


def sphere_stereo(d, radius=1):
    """Round sphere of the given radius in stereographic coordinates."""
    names = ["x", "y", "z", "u"][:d] if d <= 4 else [f"x{i}" for i in range(1, d + 1)]
    ctx = PatchContext(names, (1,) * d)
    r2 = sum(x**2 for x in ctx.coord_symbols)
    factor = 2 * sp.sympify(radius) / (1 + r2)
    return GeometryCache(ctx, factor**2 * sp.eye(d), vielbein=factor * sp.eye(d))


def positive_polynomial(coords, rng, terms=2):
    """``1 + sum a_i x_i`` (plus a random product term) with positive rational coefficients."""
    chosen = rng.sample(list(coords), min(terms, len(coords)))
    poly = sp.S.One
    for x in chosen:
        poly += sp.Rational(rng.randint(1, 5), rng.randint(1, 4)) * x
    if len(chosen) > 1 and rng.random() < 0.5:
        poly += sp.Rational(1, rng.randint(2, 5)) * chosen[0] * chosen[1]
    return poly


def random_diagonal(d, seed=0, signature=None):
    """
    Diagonal metric ``g_{mu mu} = eta_{mu mu} p_mu(x)^2`` with random positive
    polynomials, so the vielbein stays rational.
    """
    signature = tuple(signature) if signature is not None else lorentzian(d)
    ctx = PatchContext(coordinate_names(d), signature)
    rng = random.Random(seed)
    factors = [positive_polynomial(ctx.coord_symbols, rng) for _ in range(d)]
    metric = sp.diag(*[s * p**2 for s, p in zip(signature, factors)])
    return GeometryCache(ctx, metric, vielbein=sp.diag(*factors))


def product_ds2_s2(sphere_radius=2):
    """``dS_2 x S^2`` with unequal radii: conformally flat factors, not Einstein."""
    ctx = PatchContext(["tau", "x", "u", "v"], (-1, 1, 1, 1))
    tau, x, u, v = ctx.coord_symbols
    sphere = 2 * sp.sympify(sphere_radius) / (1 + u**2 + v**2)
    factors = [1 / tau, 1 / tau, sphere, sphere]
    metric = sp.diag(-factors[0]**2, factors[1]**2, factors[2]**2, factors[3]**2)
    return GeometryCache(ctx, metric, vielbein=sp.diag(*factors))


def log_radial_slicing(d):
    """
    Flat space in ``d + 1`` dimensions sliced as ``e^{2u}(du^2 + g_dS)``, with
    the de Sitter factor in conformal time.  The slices carry :func:`de_sitter`.
    """
    if d + 1 > 8:
        raise UnsupportedInput("Slicing needs d + 1 <= 8")
    names = ["u"] + coordinate_names(d, first="tau")
    ctx = PatchContext(names, (1,) + lorentzian(d))
    u, tau = ctx.coord("u"), ctx.coord("tau")
    warp = sp.exp(u)
    factors = [warp] + [warp / tau] * d
    metric = sp.diag(*[s * f**2 for s, f in zip(ctx.signature, factors)])
    return GeometryCache(ctx, metric, vielbein=sp.diag(*factors))


def random_weyl_factor(ctx, seed=0):
    """A positive polynomial Weyl factor on the patch."""
    return positive_polynomial(ctx.coord_symbols, random.Random(seed), terms=3)


BACKGROUNDS = {
    "flat": flat,
    "ads": ads_poincare,
    "de-sitter": de_sitter,
    "sphere": sphere_stereo,
    "random": random_diagonal,
}


def get_background(name, d, **kwargs):
    try:
        builder = BACKGROUNDS[name]
    except KeyError:
        raise UnsupportedInput(f"Unknown background {name!r}; choose from {sorted(BACKGROUNDS)}")
    logger.info("Building %s background in d=%s", name, d)
    return builder(d, **kwargs)
