import hashlib
import logging
import os
from dataclasses import asdict, dataclass, field
from enum import Enum

import sympy as sp

from conformal import app_settings, get_version
from conformal.expr import ZeroStatus, simplify, to_display, worst, zero_test
from conformal.tensor import TensorField


logger = logging.getLogger(__name__)


class Status(str, Enum):

    EXACT_PASS = "exact-pass"
    PROBABILISTIC_PASS = "probabilistic-pass"
    FAIL = "fail"
    UNDECIDED = "undecided"
    SKIPPED = "skipped"

    @classmethod
    def from_zero(cls, status):
        return {
            ZeroStatus.EXACT: cls.EXACT_PASS,
            ZeroStatus.PROBABILISTIC: cls.PROBABILISTIC_PASS,
            ZeroStatus.NONZERO: cls.FAIL,
            ZeroStatus.UNDECIDED: cls.UNDECIDED,
        }[status]

    @property
    def passed(self):
        return self in (Status.EXACT_PASS, Status.PROBABILISTIC_PASS)

    def is_failure(self, strict=False):
        return self is Status.FAIL or (strict and self is Status.UNDECIDED)


@dataclass
class CheckRecord:

    suite: str
    name: str
    anchor: str
    status: Status
    residual: str = ""
    detail: str = ""

    def to_dict(self):
        data = asdict(self)
        data["status"] = self.status.value
        return data

    @classmethod
    def from_dict(cls, data):
        return cls(**{**data, "status": Status(data["status"])})

    @property
    def sort_key(self):
        return self.suite, self.name


def _residual_text(residual):
    if isinstance(residual, TensorField):
        nonzero = {k: v for k, v in residual.items() if simplify(v) != 0}
        return "; ".join(f"{list(k)}: {to_display(simplify(v))}" for k, v in sorted(nonzero.items()))
    return to_display(simplify(residual))


def check(suite, name, anchor, residual, detail=""):
    """Zero-test ``residual`` (expression, tensor field, or list of either) into a record."""
    if isinstance(residual, TensorField):
        status = residual.zero_status()
    elif isinstance(residual, (list, tuple)):
        statuses = [r.zero_status() if isinstance(r, TensorField) else zero_test(r) for r in residual]
        status = worst(statuses)
        if not status.passed:
            residual = next(
                r for r, s in zip(residual, statuses) if not s.passed
            )
    else:
        status = zero_test(residual)
    record = CheckRecord(suite, name, anchor, Status.from_zero(status), detail=detail)
    if status is ZeroStatus.NONZERO or status is ZeroStatus.UNDECIDED:
        record.residual = _residual_text(residual)
        logger.warning("Check %s/%s: %s", suite, name, record.status.value)
    elif status is ZeroStatus.PROBABILISTIC:
        logger.info("Check %s/%s passed probabilistically", suite, name)
    return record


def equal_check(suite, name, anchor, computed, expected, detail=""):
    if isinstance(computed, TensorField):
        return check(suite, name, anchor, computed - expected, detail)
    return check(suite, name, anchor, sp.sympify(computed) - sp.sympify(expected), detail)


def skipped(suite, name, anchor, reason):
    return CheckRecord(suite, name, anchor, Status.SKIPPED, detail=reason)


def boolean_check(suite, name, anchor, ok, detail=""):
    return CheckRecord(suite, name, anchor, Status.EXACT_PASS if ok else Status.FAIL, detail=detail)


@dataclass
class Report:

    title: str = ""
    digest: str = ""
    version: str = field(default_factory=get_version)
    records: list = field(default_factory=list)
    quantities: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    @staticmethod
    def digest_of(data):
        if isinstance(data, str):
            data = data.encode("utf-8")
        return hashlib.sha256(data).hexdigest()

    def add(self, record):
        self.records.append(record)
        return record

    def extend(self, records):
        self.records.extend(records)

    def merge(self, other):
        self.records.extend(other.records)
        self.quantities.update(other.quantities)
        self.timings.update(other.timings)

    def set_quantity(self, name, value):
        self.quantities[name] = value if isinstance(value, str) else to_display(value)

    def time(self, name, seconds):
        if app_settings.CONFORMAL_REPORT_TIMINGS:
            self.timings[name] = round(seconds, 3)

    def sorted_records(self):
        return sorted(self.records, key=lambda r: r.sort_key)

    def failures(self, strict=False):
        return [r for r in self.records if r.status.is_failure(strict)]

    def counts(self):
        counts = {status.value: 0 for status in Status}
        for record in self.records:
            counts[record.status.value] += 1
        return counts

    def exit_code(self, strict=False):
        return 1 if self.failures(strict) else 0

    def to_dict(self):
        data = {
            "title": self.title,
            "version": self.version,
            "digest": self.digest,
            "records": [r.to_dict() for r in self.sorted_records()],
            "quantities": dict(sorted(self.quantities.items())),
            "counts": self.counts(),
        }
        if self.timings:
            data["timings"] = dict(sorted(self.timings.items()))
        return data

    @classmethod
    def from_dict(cls, data):
        return cls(
            title=data.get("title", ""),
            digest=data.get("digest", ""),
            version=data.get("version", get_version()),
            records=[CheckRecord.from_dict(r) for r in data.get("records", [])],
            quantities=dict(data.get("quantities", {})),
            timings=dict(data.get("timings", {})),
        )


# Documented discrepancies

def load_discrepancies(path=None):
    """``{suite/name: note}`` from the whitelist; ``#`` starts a comment."""
    path = path or app_settings.CONFORMAL_DISCREPANCY_WHITELIST
    if not path or not os.path.exists(path):
        return {}
    notes = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, note = line.partition(":")
            notes[key.strip()] = note.strip()
    return notes


def discrepancy_key(record):
    return f"{record.suite}/{record.name}"


def apply_discrepancies(report, notes, key=discrepancy_key):
    """Failed records named in the whitelist become skipped records carrying the note."""
    for record in report.records:
        name = key(record)
        if name in notes and record.status is Status.FAIL:
            logger.info("Documented discrepancy %s", name)
            record.status = Status.SKIPPED
            record.detail = f"documented discrepancy: {notes[name]}"
    return report
