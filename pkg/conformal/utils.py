import functools
import logging
import threading
from concurrent.futures import ThreadPoolExecutor

from conformal import app_settings


logger = logging.getLogger(__name__)


class ConformalError(Exception):
    pass


class ExpressionError(ConformalError):

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class UnknownIdentifierError(ExpressionError):
    pass


class GeometryUnavailable(ConformalError):
    pass


class UnsupportedInput(ConformalError):
    pass


class TransformationRuleError(ConformalError):

    def __init__(self, name):
        super().__init__(f"No transformation rule for {name!r}: derive via rescale+recompute")


class PoleWeightError(ConformalError):
    pass


class ConventionError(ConformalError):
    pass


class HypothesisError(ConformalError):
    """A background does not satisfy what a check needs (Einstein, conformally flat, ...)."""
    pass


class SpecFileError(ConformalError):

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def noop_decorator(f):
    return f


def memoized(method):
    """
    Compute-once property guarded by the owner's ``_lock``.
    Readers racing on the first access block until the value exists.
    """
    attr = f"_memo_{method.__name__}"

    @functools.wraps(method)
    def getter(self):
        try:
            return self.__dict__[attr]
        except KeyError:
            pass
        with self._lock:
            if attr not in self.__dict__:
                self.__dict__[attr] = method(self)
            return self.__dict__[attr]

    return property(getter)


def new_lock():
    return threading.RLock()


def parallel_map(fn, items, max_workers=None):
    items = list(items)
    workers = max_workers or app_settings.CONFORMAL_MAX_WORKERS
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
