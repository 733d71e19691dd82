"""
Metric spec files.

A spec file is UTF-8, line oriented, with ``#`` comments::

    dimension = 4
    coordinates = t, x, y, z
    signature = -1, 1, 1, 1

    [params]
    L = symbolic

    [metric]
    g[t,t] = -L^2/z^2
    g[x,x] = L^2/z^2

    [scale]
    sigma = 1

    [weyl]
    omega = 1 + t^2

Indices are coordinate names or 0-based integers.  Off-diagonal metric
entries default to zero; a symmetric duplicate must agree with its partner.
``[vielbein]`` takes ``e[mu,m]`` entries and ``[killing]`` takes ``xi[mu]``
entries for the Killing tractor suite.
"""
import logging
import os
import re
from dataclasses import dataclass, field

import sympy as sp

from conformal import app_settings
from conformal.expr import PatchContext, parse, simplify
from conformal.geometry import GeometryCache
from conformal.utils import ConformalError, ExpressionError, SpecFileError
from conformal.weyl import ScaleField, WeylFactor


logger = logging.getLogger(__name__)

SECTIONS = ("metric", "vielbein", "scale", "weyl", "params", "killing")
HEADER_KEYS = ("dimension", "coordinates", "signature")

_SECTION_RE = re.compile(r"^\[(\w+)\]$")
_ENTRY_RE = re.compile(r"^(\w+)(?:\[([^\]]*)\])?\s*=\s*(.*)$")


@dataclass
class SpecLine:

    line: int
    name: str
    indices: tuple
    text: str


@dataclass
class MetricSpec:

    dimension: int
    coordinates: tuple
    signature: tuple
    metric: list = field(default_factory=list)
    vielbein: list = field(default_factory=list)
    scale: SpecLine = None
    weyl: SpecLine = None
    params: list = field(default_factory=list)
    killing: list = field(default_factory=list)
    source: str = ""

    def build(self):
        """The :class:`SpecBundle` of parsed objects; raises :class:`SpecFileError` on bad entries."""
        ctx = PatchContext(self.coordinates, self.signature)
        for entry in self.params:
            value = None if entry.text == "symbolic" else _parse(entry, ctx)
            ctx.add_param(entry.name, value)
        metric = self._matrix(self.metric, ctx, symmetric=True, label="g")
        vielbein = self._matrix(self.vielbein, ctx, label="e") if self.vielbein else None
        try:
            geo = GeometryCache(ctx, metric, vielbein=vielbein)
        except ConformalError as exc:
            raise SpecFileError(str(exc), self.metric[0].line if self.metric else None) from exc
        sigma = _parse(self.scale, ctx) if self.scale else sp.S.One
        omega = _parse(self.weyl, ctx) if self.weyl else None
        killing = self._vector(self.killing, ctx) if self.killing else None
        try:
            scale = ScaleField(sigma, ctx)
            weyl = WeylFactor(omega, ctx) if omega is not None else None
        except ConformalError as exc:
            line = self.weyl.line if omega is not None and self.weyl else getattr(self.scale, "line", None)
            raise SpecFileError(str(exc), line) from exc
        return SpecBundle(self, ctx, geo, scale, weyl, killing)

    def _index(self, entry, value):
        value = value.strip()
        if value.isdigit():
            position = int(value)
        elif value in self.coordinates:
            position = self.coordinates.index(value)
        else:
            raise SpecFileError(f"Unknown index {value!r}", entry.line)
        if position >= self.dimension:
            raise SpecFileError(f"Index {value} out of range", entry.line)
        return position

    def _matrix(self, entries, ctx, symmetric=False, label="g"):
        d = self.dimension
        values = {}
        for entry in entries:
            if len(entry.indices) != 2:
                raise SpecFileError(f"{label} entries take two indices", entry.line)
            a, b = (self._index(entry, i) for i in entry.indices)
            value = _parse(entry, ctx)
            keys = [(a, b), (b, a)] if symmetric else [(a, b)]
            for key in keys:
                if key in values and simplify(values[key][0] - value) != 0:
                    raise SpecFileError(
                        f"{label}[{key[0]},{key[1]}] disagrees with line {values[key][1]}", entry.line
                    )
                values.setdefault(key, (value, entry.line))
        return sp.Matrix(d, d, lambda i, j: values.get((i, j), (0, None))[0])

    def _vector(self, entries, ctx):
        values = [sp.S.Zero] * self.dimension
        for entry in entries:
            if len(entry.indices) != 1:
                raise SpecFileError("xi entries take one index", entry.line)
            values[self._index(entry, entry.indices[0])] = _parse(entry, ctx)
        return values


@dataclass
class SpecBundle:

    spec: MetricSpec
    ctx: PatchContext
    geo: GeometryCache
    scale: ScaleField
    weyl: WeylFactor = None
    killing: list = None

    @property
    def sigma(self):
        return self.scale.sigma


def _parse(entry, ctx):
    try:
        return parse(entry.text, ctx)
    except ExpressionError as exc:
        raise SpecFileError(f"{entry.name}: {exc}", entry.line) from exc


def _split(value):
    return [v for v in re.split(r"[\s,]+", value.strip()) if v]


def _signature(value, line):
    value = value.strip()
    if value and set(value) <= {"+", "-"}:
        return tuple(1 if c == "+" else -1 for c in value)
    try:
        return tuple(int(v) for v in _split(value))
    except ValueError:
        raise SpecFileError(f"Bad signature {value!r}", line)


def parse_spec(text):
    """Parse spec file text into a :class:`MetricSpec`."""
    header = {}
    section = None
    collected = {name: [] for name in SECTIONS}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _SECTION_RE.match(line)
        if match:
            section = match.group(1).lower()
            if section not in SECTIONS:
                raise SpecFileError(f"Unknown section [{section}]", number)
            continue
        match = _ENTRY_RE.match(line)
        if not match:
            raise SpecFileError(f"Cannot read {line!r}", number)
        name, indices, value = match.groups()
        if section is None:
            if name not in HEADER_KEYS:
                raise SpecFileError(f"Unknown key {name!r}", number)
            if name in header:
                raise SpecFileError(f"Duplicate key {name!r}", number)
            header[name] = (value, number)
            continue
        indices = tuple(_split(indices.replace(",", " "))) if indices else ()
        collected[section].append(SpecLine(number, name, indices, value.strip()))
    return _assemble(header, collected, text)


def _assemble(header, collected, text):
    missing = [key for key in ("dimension", "coordinates") if key not in header]
    if missing:
        raise SpecFileError(f"Missing {', '.join(missing)}")
    value, line = header["dimension"]
    try:
        dimension = int(value)
    except ValueError:
        raise SpecFileError(f"Bad dimension {value!r}", line)
    value, line = header["coordinates"]
    coordinates = tuple(_split(value))
    if len(coordinates) != dimension:
        raise SpecFileError(f"{len(coordinates)} coordinates for dimension {dimension}", line)
    if "signature" in header:
        signature = _signature(*header["signature"])
        if len(signature) != dimension:
            raise SpecFileError(f"Signature has {len(signature)} entries", header["signature"][1])
    else:
        signature = (1,) * dimension
    if not collected["metric"]:
        raise SpecFileError("The [metric] section is empty")

    def single(name, key):
        entries = collected[name]
        for entry in entries:
            if entry.name != key or entry.indices:
                raise SpecFileError(f"[{name}] takes a single {key} = <expr>", entry.line)
        if len(entries) > 1:
            raise SpecFileError(f"[{name}] takes a single entry", entries[1].line)
        return entries[0] if entries else None

    for entry in collected["metric"]:
        if entry.name != "g":
            raise SpecFileError(f"[metric] entries are g[a,b], not {entry.name}", entry.line)
    for entry in collected["vielbein"]:
        if entry.name != "e":
            raise SpecFileError(f"[vielbein] entries are e[mu,m], not {entry.name}", entry.line)
    for entry in collected["killing"]:
        if entry.name != "xi":
            raise SpecFileError(f"[killing] entries are xi[mu], not {entry.name}", entry.line)
    return MetricSpec(
        dimension=dimension,
        coordinates=coordinates,
        signature=signature,
        metric=collected["metric"],
        vielbein=collected["vielbein"],
        scale=single("scale", "sigma"),
        weyl=single("weyl", "omega"),
        params=collected["params"],
        killing=collected["killing"],
        source=text,
    )


def resolve_path(path):
    """A path as given, or a bundled spec file name such as ``ads4.spec``."""
    if os.path.exists(path):
        return path
    bundled = os.path.join(app_settings.CONFORMAL_SPEC_DIR, path)
    if os.path.exists(bundled):
        return bundled
    raise SpecFileError(f"No spec file at {path!r}")


def load_spec(path):
    path = resolve_path(path)
    logger.info("Reading spec file %s", path)
    with open(path, encoding="utf-8") as f:
        return parse_spec(f.read())
