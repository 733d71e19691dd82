"""
Scalar expression kernel.

Every component of every tensor in this package is a sympy expression over a
single coordinate patch.  This module owns the patch description, the text
grammar used by spec files, the printer that goes back to that grammar, the
canonical normal form and the zero test that every identity check relies on.
"""
import logging
import random
import re
from enum import Enum

import mpmath
import sympy as sp
from sympy.core.function import AppliedUndef

from conformal import app_settings
from conformal.utils import ExpressionError, UnknownIdentifierError, UnsupportedInput


logger = logging.getLogger(__name__)

FUNCTIONS = {
    "exp": sp.exp,
    "log": sp.log,
    "sin": sp.sin,
    "cos": sp.cos,
    "sinh": sp.sinh,
    "cosh": sp.cosh,
    "sqrt": sp.sqrt,
}

_TRIG = (sp.sin, sp.cos, sp.sinh, sp.cosh)

MIN_DIMENSION = 2
MAX_DIMENSION = 8


class PatchContext:
    """
    A coordinate patch: ordered coordinate names, an informational signature,
    named parameters and the names of generic test fields.

    Coordinates are positive symbols; parameters are real symbols unless a
    value expression is supplied for them.
    """

    def __init__(self, coords, signature=None, params=None, fields=()):
        coords = tuple(coords)
        if len(set(coords)) != len(coords):
            raise UnsupportedInput(f"Coordinate names must be distinct: {coords}")
        if not MIN_DIMENSION <= len(coords) <= MAX_DIMENSION:
            raise UnsupportedInput(
                f"Dimension {len(coords)} outside supported range {MIN_DIMENSION}..{MAX_DIMENSION}"
            )
        for name in coords:
            _check_identifier(name)
        signature = tuple(signature) if signature is not None else (1,) * len(coords)
        if len(signature) != len(coords) or any(s not in (1, -1) for s in signature):
            raise UnsupportedInput(f"Signature {signature} does not match coordinates {coords}")
        self.coords = coords
        self.signature = signature
        self.coord_symbols = tuple(sp.Symbol(name, positive=True) for name in coords)
        self.params = {}
        for name, value in (params or {}).items():
            self.add_param(name, value)
        self.fields = set(fields)

    @property
    def dimension(self):
        return len(self.coords)

    @property
    def eta(self):
        return sp.diag(*self.signature)

    @property
    def is_lorentzian(self):
        return self.signature.count(-1) == 1

    def add_param(self, name, value=None):
        _check_identifier(name)
        if name in self.coords:
            raise UnsupportedInput(f"Parameter {name!r} clashes with a coordinate")
        self.params[name] = sp.Symbol(name, real=True) if value is None else sp.sympify(value)
        return self.params[name]

    def param(self, name):
        return self.params[name] if name in self.params else self.add_param(name)

    def coord(self, name):
        return self.coord_symbols[self.coords.index(name)]

    def field(self, name):
        """A generic function of all coordinates, used to prove identities for arbitrary fields."""
        self.fields.add(name)
        return sp.Function(name)(*self.coord_symbols)

    def resolve(self, name):
        if name in self.coords:
            return self.coord(name)
        if name in self.params:
            return self.params[name]
        if name in self.fields:
            return self.field(name)
        if name == "I":
            return sp.I
        return None

    def copy(self):
        ctx = PatchContext(self.coords, self.signature, fields=self.fields)
        ctx.params = dict(self.params)
        return ctx

    def __repr__(self):
        return f"PatchContext(coords={self.coords}, signature={self.signature})"


def _check_identifier(name):
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
        raise UnsupportedInput(f"Invalid identifier {name!r}")
    if name in FUNCTIONS or name == "I":
        raise UnsupportedInput(f"{name!r} is reserved")


# Parsing

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))", re.DOTALL)


class _Token:

    def __init__(self, kind, value, line, column):
        self.kind = kind
        self.value = value
        self.line = line
        self.column = column

    def __repr__(self):
        return f"{self.kind}:{self.value}"


def _tokenize(text):
    tokens = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch == "\n":
            line += 1
            pos += 1
            line_start = pos
            continue
        if ch.isspace():
            pos += 1
            continue
        match = _TOKEN_RE.match(text, pos)
        column = match.start(match.lastindex) - line_start + 1
        number, ident, op = match.groups()
        if number is not None:
            tokens.append(_Token("number", int(number), line, column))
        elif ident is not None:
            tokens.append(_Token("ident", ident, line, column))
        elif op in "+-*/^()":
            tokens.append(_Token("op", op, line, column))
        else:
            raise ExpressionError(f"Unexpected character {op!r}", line, column)
        pos = match.end()
    tokens.append(_Token("eof", None, line, pos - line_start + 1))
    return tokens


class _Parser:
    """Recursive descent over the expression grammar."""

    def __init__(self, text, ctx):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.ctx = ctx

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def accept(self, op):
        token = self.peek()
        if token.kind == "op" and token.value == op:
            self.pos += 1
            return True
        return False

    def expect(self, op):
        token = self.peek()
        if not self.accept(op):
            raise ExpressionError(f"Expected {op!r}, found {token.value or 'end of input'!r}",
                                  token.line, token.column)

    def parse(self):
        result = self.expr()
        token = self.peek()
        if token.kind != "eof":
            raise ExpressionError(f"Unexpected {token.value!r}", token.line, token.column)
        return result

    def expr(self):
        result = self.term()
        while True:
            if self.accept("+"):
                result = result + self.term()
            elif self.accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self):
        result = self.factor()
        while True:
            if self.accept("*"):
                result = result * self.factor()
            elif self.accept("/"):
                token = self.peek()
                divisor = self.factor()
                if divisor == 0:
                    raise ExpressionError("Division by zero", token.line, token.column)
                result = result / divisor
            else:
                return result

    def factor(self):
        result = self.base()
        if self.accept("^"):
            result = result ** self.exponent()
        return result

    def base(self):
        token = self.advance()
        if token.kind == "number":
            return sp.Integer(token.value)
        if token.kind == "ident":
            name = token.value
            if name in FUNCTIONS:
                self.expect("(")
                argument = self.expr()
                self.expect(")")
                return FUNCTIONS[name](argument)
            value = self.ctx.resolve(name)
            if value is None:
                raise UnknownIdentifierError(f"Unknown identifier {name!r}", token.line, token.column)
            return value
        if token.kind == "op" and token.value == "(":
            result = self.expr()
            self.expect(")")
            return result
        if token.kind == "op" and token.value == "-":
            # unary minus binds looser than ^, so -x^2 is -(x^2)
            return -self.factor()
        raise ExpressionError(f"Unexpected {token.value or 'end of input'!r}", token.line, token.column)

    def exponent(self):
        if self.accept("("):
            value = self._signed_rational()
            self.expect(")")
            return value
        return self._signed_integer()

    def _signed_integer(self):
        sign = -1 if self.accept("-") else 1
        if sign == 1:
            self.accept("+")
        token = self.advance()
        if token.kind != "number":
            raise ExpressionError("Exponent must be an integer or a parenthesised rational",
                                  token.line, token.column)
        return sp.Integer(sign * token.value)

    def _signed_rational(self):
        value = self._signed_integer()
        if self.accept("/"):
            token = self.advance()
            if token.kind != "number" or token.value == 0:
                raise ExpressionError("Bad rational exponent", token.line, token.column)
            value = sp.Rational(value, token.value)
        return value


def parse(text, ctx):
    return _Parser(text, ctx).parse()


# Printing

_ADD, _MUL, _POW, _ATOM = range(4)


def to_text(e):
    """Print ``e`` in the grammar accepted by :func:`parse`."""
    return _print(sp.sympify(e))[0]


def _wrap(e, prec):
    text, own = _print(e)
    return f"({text})" if own < prec else text


def _print(e):
    if isinstance(e, sp.Derivative):
        raise ExpressionError(f"Derivative wrappers have no text form: {e}")
    if e.is_Integer:
        return str(e), (_ATOM if e >= 0 else _ADD)
    if e.is_Rational:
        return f"{e.p}/{e.q}", (_MUL if e > 0 else _ADD)
    if e is sp.I:
        return "I", _ATOM
    if e is sp.E:
        return "exp(1)", _ATOM
    if e.is_Symbol:
        return e.name, _ATOM
    if isinstance(e, AppliedUndef):
        return e.func.__name__, _ATOM
    if e.is_Add:
        terms = e.as_ordered_terms()
        parts = []
        for i, term in enumerate(terms):
            negative = term.could_extract_minus_sign()
            body = _wrap(-term if negative else term, _MUL)
            if i == 0:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f" - {body}" if negative else f" + {body}")
        return "".join(parts), _ADD
    if e.is_Mul:
        if e.could_extract_minus_sign():
            return f"-{_wrap(-e, _MUL)}", _ADD
        coeff, rest = e.as_coeff_Mul()
        if coeff.is_Rational and not coeff.is_Integer:
            return f"{_wrap(coeff.p * rest, _MUL)}/{coeff.q}", _MUL
        factors = e.as_ordered_factors()
        return "*".join(_wrap(f, _POW) for f in factors), _MUL
    if e.is_Pow:
        base, exponent = e.args
        if exponent.is_Integer:
            return f"{_wrap(base, _ATOM)}^{exponent}", _POW
        if exponent.is_Rational:
            return f"{_wrap(base, _ATOM)}^({exponent.p}/{exponent.q})", _POW
        return f"exp(({to_text(exponent)})*log({to_text(base)}))", _ATOM
    for name, func in FUNCTIONS.items():
        if e.func == func and name != "sqrt":
            return f"{name}({to_text(e.args[0])})", _ATOM
    raise ExpressionError(f"Cannot print {type(e).__name__} in the expression grammar")


def to_display(e):
    """Grammar text when possible, sympy's string form otherwise."""
    try:
        return to_text(e)
    except ExpressionError:
        return sp.sstr(e)


# Calculus and normal forms

def diff(e, coord):
    return sp.cancel(sp.diff(e, coord))


def simplify(e):
    """The cheap canonical form used for stored tensor components."""
    return sp.cancel(e)


def normal_form(e):
    """
    Rational normal form; trigonometric and hyperbolic functions are first
    rewritten through exp so sin/cos identities reduce to polynomial ones.
    """
    e = sp.cancel(sp.expand_power_exp(sp.sympify(e)))
    if e.has(*_TRIG):
        e = sp.cancel(e.rewrite(sp.exp))
    return e


class ZeroStatus(str, Enum):

    EXACT = "exact"
    PROBABILISTIC = "probabilistic"
    NONZERO = "nonzero"
    UNDECIDED = "undecided"

    @property
    def passed(self):
        return self in (ZeroStatus.EXACT, ZeroStatus.PROBABILISTIC)


def worst(statuses):
    """Combine statuses of several components into one verdict."""
    order = [ZeroStatus.EXACT, ZeroStatus.PROBABILISTIC, ZeroStatus.UNDECIDED, ZeroStatus.NONZERO]
    result = ZeroStatus.EXACT
    for status in statuses:
        if order.index(status) > order.index(result):
            result = status
    return result


def zero_test(e):
    e = sp.sympify(e)
    if e == 0:
        return ZeroStatus.EXACT
    # x**(w - 1) and x**w must share a generator
    cancelled = sp.cancel(sp.expand_power_exp(e))
    if cancelled == 0:
        return ZeroStatus.EXACT
    numerator = sp.expand(sp.numer(cancelled))
    if numerator == 0:
        return ZeroStatus.EXACT
    if numerator.has(*_TRIG, sp.exp, sp.log):
        if normal_form(numerator) == 0:
            return ZeroStatus.EXACT
        if sp.count_ops(numerator) <= app_settings.CONFORMAL_SIMPLIFY_MAX_OPS and sp.simplify(numerator) == 0:
            return ZeroStatus.EXACT
    status = _sampled_zero_test(numerator)
    if status is ZeroStatus.UNDECIDED:
        logger.warning("Zero test undecided after %s retries", app_settings.CONFORMAL_ZERO_TEST_RETRIES)
    return status


def is_zero(e):
    return zero_test(e).passed


def _random_value(rng, symbol):
    value = sp.Rational(rng.randint(1, 97), rng.randint(1, 31))
    if symbol.is_positive:
        return value
    return value if rng.random() < 0.5 else -value


def _sampled_zero_test(e):
    # independent dummies for each field and derivative: jet variables at a point are independent
    generic = e.atoms(sp.Derivative) | e.atoms(AppliedUndef)
    e = e.xreplace({atom: sp.Dummy() for atom in generic})
    terms = sp.Add.make_args(e)
    symbols = sorted(e.free_symbols, key=lambda s: (s.name, s.dummy_index if isinstance(s, sp.Dummy) else 0))
    rng = random.Random(app_settings.CONFORMAL_RANDOM_SEED)
    samples = max(20, app_settings.CONFORMAL_ZERO_TEST_SAMPLES)
    tolerance = app_settings.CONFORMAL_ZERO_TEST_TOLERANCE
    with mpmath.workdps(app_settings.CONFORMAL_ZERO_TEST_DIGITS):
        evaluate = sp.lambdify(symbols, list(terms), modules="mpmath")
        for _ in range(samples):
            values = None
            for _attempt in range(app_settings.CONFORMAL_ZERO_TEST_RETRIES + 1):
                point = [_random_value(rng, s) for s in symbols]
                values = _evaluate(evaluate, point)
                if values is not None:
                    break
            if values is None:
                return ZeroStatus.UNDECIDED
            total = mpmath.fsum(values)
            scale = mpmath.fsum(abs(v) for v in values)
            if abs(total) > tolerance * scale:
                return ZeroStatus.NONZERO
    return ZeroStatus.PROBABILISTIC


def _evaluate(fn, point):
    args = [mpmath.mpf(v.p) / v.q for v in point]
    try:
        values = [mpmath.mpmathify(v) for v in fn(*args)]
    except (ZeroDivisionError, ValueError, TypeError, OverflowError):
        return None
    if any(not mpmath.isfinite(v) for v in values):
        return None
    return values
