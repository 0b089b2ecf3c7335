"""CSV/JSON writers with a schema header and round-trip float formatting."""

from __future__ import annotations

import csv
import io
import json
import math

SCHEMA_VERSION = "1.0.0"
SCHEMA_PREFIX = "cavity-radiance"


def fmt(value) -> str:
    """17 significant digits, so every float survives a text round trip."""
    if isinstance(value, (bool,)):
        return "true" if value else "false"
    if isinstance(value, (int,)):
        return str(value)
    if isinstance(value, float) or hasattr(value, "dtype"):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.17g}"
    return str(value)


def _json_value(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        return value
    v = float(value)
    if not math.isfinite(v):
        return fmt(v)
    return float(f"{v:.17g}")


def schema_name(kind: str) -> str:
    return f"{SCHEMA_PREFIX}.{kind}"


def to_csv(kind: str, columns, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# schema={schema_name(kind)} version={SCHEMA_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def to_json(kind: str, columns, rows) -> str:
    records = [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows]
    doc = {"schema": schema_name(kind), "version": SCHEMA_VERSION, "columns": list(columns),
           "records": records}
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def render(kind: str, columns, rows, fmt_name: str = "csv") -> str:
    rows = [tuple(r) for r in rows]
    if fmt_name == "csv":
        return to_csv(kind, columns, rows)
    if fmt_name == "json":
        return to_json(kind, columns, rows)
    raise ValueError(f"unknown format {fmt_name!r}")


def _parse_cell(text: str):
    low = text.strip().lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        if low.lstrip("-").isdigit():
            return int(low)
        return float(text)
    except ValueError:
        return text


def read_table(path):
    """Read a file written by :func:`render`; returns (schema, columns, rows)."""
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        cols = doc["columns"]
        rows = [[_parse_cell(r[c]) if isinstance(r[c], str) else r[c] for c in cols]
                for r in doc["records"]]
        return doc["schema"], cols, rows
    lines = text.splitlines()
    head = lines[0]
    schema = head.split("schema=", 1)[1].split()[0] if "schema=" in head else None
    reader = csv.reader(l for l in lines if not l.startswith("#"))
    cols = next(reader)
    rows = [[_parse_cell(c) for c in r] for r in reader]
    return schema, cols, rows


def gnuplot_stub(data_path: str, columns, x: str, y) -> str:
    """Minimal gnuplot script plotting columns ``y`` against ``x`` from a CSV file."""
    ix = list(columns).index(x) + 1
    parts = [f"'{data_path}' using {ix}:{list(columns).index(c) + 1} with lines title '{c}'" for c in y]
    return ("set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\n"
            f"set xlabel '{x}'\nplot " + ", \\\n     ".join(parts) + "\n")
