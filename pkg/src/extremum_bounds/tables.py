"""Regenerate the reference tables of bound coefficients from the closed forms.

Table ids ``I`` to ``VI``:

I    MaxEnt coefficients, k, alpha in 1..4, with exact closed-form strings
II   MaxEnt coefficients for nine low-order products
III  MinInf coefficients, k in 1..4, with closed-form strings
IV   MinInf versus the literature MaxEnt constant for <r^-1>^-2 <p^2>
V    compact MaxTent coefficients at t = 2 (q left symbolic)
VI   per-atom MaxEnt and MaxTent bounds next to near-Hartree-Fock values

All coefficients are for d = 3 and, except in V, q = 2.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .atoms import load_shipped_records
from .bounds import (LITERATURE_MAXENT_RINV_P2, ProductSpec, maxent_bound, maxtent_lower_bound,
                     mininf_bound)

__all__ = ["TABLE_IDS", "Table", "TABLE6_T", "build_table", "render", "format_number"]

TABLE_IDS = ("I", "II", "III", "IV", "V", "VI")

# Tsallis parameters used for the per-atom comparison, keyed by (alpha, k).
TABLE6_T = {(1.0, 1.0): 3.0, (2.0, 1.0): 2.3}

# Closed forms of the q = 2 MaxEnt coefficients, keyed by (k, alpha).
MAXENT_FORMS = {
    (1, 1): "243/512*(3*pi)^(1/3)",
    (1, 2): "27*3^(1/3)*pi^(1/6)/(32*sqrt(2))",
    (1, 3): "9/16*(3/2)^(2/3)*pi^(1/3)",
    (1, 4): "9/16*(3*pi/gamma(3/4))^(1/3)",
    (2, 1): "729*(3*pi)^(2/3)/2500",
    (2, 2): "81*3^(1/6)*pi^(1/3)/(50*sqrt(5))",
    (2, 3): "27/50*(3/2)^(1/3)*pi^(2/3)",
    (2, 4): "9*3^(11/12)*pi^(2/3)/(10*5^(3/4)*gamma(3/4)^(2/3))",
    (3, 1): "81*pi/128",
    (3, 2): "9/16*sqrt(3*pi)",
    (3, 3): "9*pi/16",
    (3, 4): "3*3^(3/4)*pi/(8*2^(1/4)*gamma(3/4))",
    (4, 1): "19683*3^(1/3)*pi^(4/3)/38416",
    (4, 2): "243*3^(5/6)*pi^(2/3)/(196*sqrt(7))",
    (4, 3): "81/196*(3/2)^(2/3)*pi^(4/3)",
    (4, 4): "81*3^(1/12)*pi^(4/3)/(28*7^(3/4)*gamma(3/4)^(4/3))",
}

# Closed forms of the q = 2 MinInf coefficients, keyed by k.
MININF_FORMS = {
    1: "81/256*(3*pi)^(1/3)",
    2: "81*(3*pi)^(2/3)/625",
    3: "3*pi/16",
    4: "243*3^(1/3)*pi^(4/3)/2401",
}

TABLE2_PRODUCTS = [(3, 1), (3, 2), (3, 3), (2, 1), (2, 2), (2, 3), (1, 1), (1, 2), (1, 3)]


@dataclass
class Table:
    table_id: str
    title: str
    columns: list
    rows: list = field(default_factory=list)


def fraction(x) -> str:
    f = Fraction(x).limit_denominator(1000)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def product_label(alpha, k) -> str:
    return ProductSpec(alpha, k).label


def _table_I():
    rows = []
    for (k, alpha), form in MAXENT_FORMS.items():
        law = maxent_bound(3, k, alpha, 2)
        rows.append([k, alpha, law.coefficient_at(), fraction(law.exponent_N), form])
    return Table("I", "MaxEnt lower bounds <r^alpha>^(k/alpha)<p^k> >= f N^e (d=3, q=2)",
                 ["k", "alpha", "coefficient", "exponent_N", "closed_form"], rows)


def _table_II():
    rows = []
    for k, alpha in TABLE2_PRODUCTS:
        law = maxent_bound(3, k, alpha, 2)
        rows.append([product_label(alpha, k), alpha, k, law.coefficient_at(), fraction(law.exponent_N)])
    return Table("II", "MaxEnt lower-bound coefficients (d=3, q=2)",
                 ["product", "alpha", "k", "coefficient", "exponent_N"], rows)


def _table_III():
    rows = []
    for k, form in MININF_FORMS.items():
        law = mininf_bound(3, k, 2)
        rows.append([k, law.coefficient_at(), fraction(law.exponent_N), form])
    return Table("III", "MinInf lower bounds <r^-1>^-k<p^k> >= f N^e (d=3, q=2)",
                 ["k", "coefficient", "exponent_N", "closed_form"], rows)


def _table_IV():
    mininf = mininf_bound(3, 2, 2)
    lit = LITERATURE_MAXENT_RINV_P2
    a, b = mininf.coefficient_at(), lit.coefficient_at()
    return Table("IV", "<r^-1>^-2<p^2>: MinInf bound versus literature MaxEnt bound (N^(-1/3))",
                 ["product", "mininf", "maxent_literature", "ratio", "exponent_N"],
                 [[mininf.product.label, a, b, a / b, fraction(mininf.exponent_N)]])


def _table_V():
    rows = []
    for k in (1, 2, 3):
        for alpha in (1, 2, 3):
            law = maxtent_lower_bound(2.0, alpha, k)
            rows.append([k, alpha, law.coefficient, fraction(law.exponent_N), fraction(law.exponent_q)])
    return Table("V", "Compact MaxTent lower bounds at t=2: f N^e_N q^e_q (d=3)",
                 ["k", "alpha", "coefficient", "exponent_N", "exponent_q"], rows)


def _table_VI(records=None):
    records = load_shipped_records() if records is None else records
    hf = {(r.symbol, r.alpha, r.k): r for r in records}
    laws = {}
    for (alpha, k), t in TABLE6_T.items():
        laws[alpha] = (maxent_bound(3, k, alpha, 2), maxtent_lower_bound(t, alpha, k, 2))
    symbols = list(dict.fromkeys(r.symbol for r in records))
    rows = []
    for sym in symbols:
        row, n = [sym], None
        for alpha in (1.0, 2.0):
            rec = hf.get((sym, alpha, 1.0))
            if rec is None:
                row += [None, None, None]
                continue
            n = rec.N
            me, mt = laws[alpha]
            row += [float(me.evaluate(n)), float(mt.evaluate(n)), rec.hf_value]
        rows.append([row[0], n] + row[1:])
    return Table("VI", "Lower bounds versus near-Hartree-Fock values; MaxTent at t=3 (<r><p>) "
                       "and t=2.3 (<r^2>^(1/2)<p>), q=2",
                 ["symbol", "N", "maxent_r_p", "maxtent_r_p", "hf_r_p",
                  "maxent_r2_p", "maxtent_r2_p", "hf_r2_p"], rows)


_BUILDERS = {"I": _table_I, "II": _table_II, "III": _table_III, "IV": _table_IV,
             "V": _table_V, "VI": _table_VI}


def build_table(table_id: str) -> Table:
    key = table_id.upper()
    if key not in _BUILDERS:
        raise ValueError(f"unknown table {table_id!r}; choose from {', '.join(TABLE_IDS)}")
    return _BUILDERS[key]()


def format_number(value, digits=6):
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return "" if value is None else str(value)


def render(table: Table, fmt: str = "text", digits: int = 6) -> str:
    """Render as ``csv``, ``json`` or aligned ``text``. Output is deterministic."""
    cells = [[format_number(v, digits) for v in row] for row in table.rows]
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(table.columns)
        writer.writerows(cells)
        return out.getvalue()
    if fmt == "json":
        rows = []
        for row in table.rows:
            rows.append({c: (float(format_number(v, digits)) if isinstance(v, float) else v)
                         for c, v in zip(table.columns, row)})
        return json.dumps({"table": table.table_id, "title": table.title, "rows": rows},
                          indent=2) + "\n"
    if fmt == "text":
        widths = [max(len(c), *(len(r[i]) for r in cells)) if cells else len(c)
                  for i, c in enumerate(table.columns)]
        lines = [f"Table {table.table_id}: {table.title}",
                 "  ".join(c.rjust(w) for c, w in zip(table.columns, widths)),
                 "  ".join("-" * w for w in widths)]
        lines += ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in cells]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
