"""Tabulated atomic uncertainty products and validation of bounds against them.

Data files are UTF-8 CSV with the header ``symbol,N,alpha,k,hf_value``; one
row holds the near-Hartree-Fock value of <r^alpha>^{k/alpha} <p^k> for one
atom. Extra columns are ignored with a warning.
"""

from __future__ import annotations

import csv
import io
import math
import os
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .bounds import (LOWER, ProductSpec, ScalingLaw, maxent_bound, maxtent_lower_bound,
                     maxtent_upper_bound, mininf_bound, optimize_tsallis_t)
from .errors import DomainError, NonConvergence, ParseError, SchemaError

__all__ = [
    "HF_COLUMNS",
    "GOLDEN_COLUMNS",
    "AtomicRecord",
    "GoldenRow",
    "ValidationEntry",
    "ValidationReport",
    "load_atomic_table",
    "load_golden_bounds",
    "serialize",
    "shipped_path",
    "load_shipped_records",
    "load_shipped_golden",
    "resolve_family",
    "validate_records",
    "SLACK",
]

HF_COLUMNS = ("symbol", "N", "alpha", "k", "hf_value")
GOLDEN_COLUMNS = ("symbol", "N", "alpha", "k", "maxent_bound", "maxtent_bound")
SLACK = 1e-9


@dataclass(frozen=True)
class AtomicRecord:
    symbol: str
    N: int
    alpha: float
    k: float
    hf_value: float

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"{self.symbol}: N must be >= 1, got {self.N}")
        if not self.hf_value > 0:
            raise ValueError(f"{self.symbol}: hf_value must be positive, got {self.hf_value}")

    @property
    def product(self):
        return ProductSpec(self.alpha, self.k)


@dataclass(frozen=True)
class GoldenRow:
    symbol: str
    N: int
    alpha: float
    k: float
    maxent_bound: float
    maxtent_bound: float


def _open_text(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8", newline="") as fh:
            return fh.read()
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data


def _rows(source, required):
    text = _open_text(source)
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise SchemaError("empty file, expected a header line", line=1) from None
    missing = [c for c in required if c not in header]
    if missing:
        raise SchemaError(f"missing column(s): {', '.join(missing)}", line=1)
    extra = [c for c in header if c not in required]
    if extra:
        warnings.warn(f"ignoring extra column(s): {', '.join(extra)}", stacklevel=3)
    index = {c: header.index(c) for c in required}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, found {len(row)}", line=lineno)
        yield lineno, {c: row[i].strip() for c, i in index.items()}


def _number(text, name, lineno):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"column {name!r}: cannot parse {text!r} as a number", line=lineno) from None
    if not math.isfinite(value):
        raise ParseError(f"column {name!r}: non-finite value {text!r}", line=lineno)
    return value


def _count(text, lineno):
    value = _number(text, "N", lineno)
    if not value.is_integer():
        raise ParseError(f"column 'N': electron count must be an integer, got {text!r}", line=lineno)
    if value < 1:
        raise ValueError(f"line {lineno}: N must be >= 1, got {text}")
    return int(value)


def _key_fields(cells, lineno):
    symbol = cells["symbol"]
    if not symbol:
        raise ParseError("empty symbol", line=lineno)
    N = _count(cells["N"], lineno)
    alpha = _number(cells["alpha"], "alpha", lineno)
    k = _number(cells["k"], "k", lineno)
    if alpha == 0:
        raise ValueError(f"line {lineno}: alpha must be non-zero")
    return symbol, N, alpha, k


def _positive(text, name, lineno):
    value = _number(text, name, lineno)
    if not value > 0:
        raise ValueError(f"line {lineno}: {name} must be positive, got {text}")
    return value


def load_atomic_table(source) -> list[AtomicRecord]:
    """Parse an HF data file from a path or a text/byte stream.

    Raises
    ------
    SchemaError
        When a required column is missing.
    ParseError
        On malformed rows or duplicate ``(symbol, alpha, k)`` keys.
    ValueError
        On non-positive N or hf_value.
    """
    records, seen = [], {}
    for lineno, cells in _rows(source, HF_COLUMNS):
        symbol, N, alpha, k = _key_fields(cells, lineno)
        hf = _positive(cells["hf_value"], "hf_value", lineno)
        key = (symbol, alpha, k)
        if key in seen:
            raise ParseError(f"duplicate record {key} (first seen on line {seen[key]})", line=lineno)
        seen[key] = lineno
        records.append(AtomicRecord(symbol, N, alpha, k, hf))
    return records


def load_golden_bounds(source) -> list[GoldenRow]:
    rows = []
    for lineno, cells in _rows(source, GOLDEN_COLUMNS):
        symbol, N, alpha, k = _key_fields(cells, lineno)
        rows.append(GoldenRow(symbol, N, alpha, k,
                              _positive(cells["maxent_bound"], "maxent_bound", lineno),
                              _positive(cells["maxtent_bound"], "maxtent_bound", lineno)))
    return rows


def serialize(records) -> str:
    """Write records back to CSV; floats use ``repr`` so parsing is lossless."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(HF_COLUMNS)
    for r in records:
        writer.writerow([r.symbol, r.N, repr(float(r.alpha)), repr(float(r.k)), repr(float(r.hf_value))])
    return out.getvalue()


def shipped_path(name: str = "table6_hf.csv"):
    """Path to a dataset bundled with the package."""
    return resources.files("extremum_bounds").joinpath("data").joinpath(name)


def load_shipped_records():
    with shipped_path("table6_hf.csv").open("rb") as fh:
        return load_atomic_table(fh)


def load_shipped_golden():
    with shipped_path("table6_bounds.csv").open("rb") as fh:
        return load_golden_bounds(fh)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _optimal_law(alpha, k, q):
    try:
        return optimize_tsallis_t(ProductSpec(alpha, k), q)[1]
    except NonConvergence as exc:
        raise DomainError(f"no optimal t: {exc}") from exc


def resolve_family(selector: str, record: AtomicRecord, q: int = 2) -> ScalingLaw:
    """Bound law named by ``selector`` for the record's product.

    Selectors: ``maxent``, ``mininf``, ``maxtent-optimal`` and ``maxtent:t=<value>``.
    Raises :class:`DomainError` when the product is outside the family's domain.
    """
    alpha, k = record.alpha, record.k
    if selector == "maxent":
        if not (alpha > 0 and k > 0):
            raise DomainError("MaxEnt bounds need alpha > 0 and k > 0")
        return maxent_bound(3, k, alpha, q)
    if selector == "mininf":
        if alpha != -1:
            raise DomainError("MinInf bounds apply to <r^-1>^-k <p^k> only (alpha = -1)")
        return mininf_bound(3, k, q)
    if selector == "maxtent-optimal":
        return _optimal_law(alpha, k, q)
    if selector.startswith("maxtent:t="):
        try:
            t = float(selector.split("=", 1)[1])
        except ValueError:
            raise ValueError(f"bad Tsallis parameter in selector {selector!r}") from None
        if t > 1:
            return maxtent_lower_bound(t, alpha, k, q)
        return maxtent_upper_bound(t, alpha, k, q)
    raise ValueError(f"unknown bound family selector {selector!r}")


@dataclass(frozen=True)
class ValidationEntry:
    record: AtomicRecord
    family: str
    bound_value: float | None = None
    direction: str | None = None
    margin: float | None = None
    passed: bool | None = None
    skip_reason: str | None = None

    @property
    def skipped(self):
        return self.skip_reason is not None


@dataclass
class ValidationReport:
    entries: list = field(default_factory=list)

    @property
    def evaluated(self):
        return [e for e in self.entries if not e.skipped]

    @property
    def failures(self):
        return [e for e in self.evaluated if not e.passed]

    @property
    def ok(self):
        return not self.failures

    def summary(self):
        evaluated = self.evaluated
        worst = min(evaluated, key=lambda e: e.margin) if evaluated else None
        return {
            "total": len(self.entries),
            "passed": sum(1 for e in evaluated if e.passed),
            "failed": len(self.failures),
            "skipped": len(self.entries) - len(evaluated),
            "worst_margin": worst.margin if worst else None,
            "worst_record": f"{worst.record.symbol}/{worst.family}" if worst else None,
        }


def validate_records(records, families=("maxent", "maxtent-optimal"), q: int = 2) -> ValidationReport:
    """Evaluate each family's bound at each record's N and compare with its HF value.

    Domain violations are recorded as skipped entries; inequality violations
    fail. The margin is hf/bound for lower bounds and bound/hf for upper
    bounds, so it is at least one whenever the inequality holds.
    """
    report = ValidationReport()
    for record in records:
        for family in families:
            try:
                law = resolve_family(family, record, q)
            except DomainError as exc:
                report.entries.append(ValidationEntry(record, family, skip_reason=str(exc)))
                continue
            value = float(law.evaluate(record.N, q))
            if law.direction == LOWER:
                margin = record.hf_value / value
            else:
                margin = value / record.hf_value
            report.entries.append(ValidationEntry(record, family, value, law.direction, margin,
                                                  margin >= 1.0 - SLACK))
    return report
