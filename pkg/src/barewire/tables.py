"""CSV/JSON emission with an embedded metadata header.

Floats are written with ``repr`` so identical inputs give byte-identical
files. CSV files start with ``# `` comment lines holding the metadata as
sorted-key JSON.
"""

import csv
import io
import json

import numpy as np


def _plain(value):
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _cell(value):
    value = _plain(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(records, columns, metadata=None):
    buf = io.StringIO()
    if metadata is not None:
        buf.write("# " + json.dumps(_plain(metadata), sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([_cell(rec[c]) for c in columns])
    return buf.getvalue()


def render_json(records, metadata=None):
    doc = {"metadata": _plain(metadata or {}), "records": [_plain(r) for r in records]}
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def render(records, columns, metadata=None, fmt="csv"):
    records = list(records)
    if fmt == "csv":
        return render_csv(records, columns, metadata)
    if fmt == "json":
        return render_json(records, metadata)
    raise ValueError(f"unknown format {fmt!r}")


def read_csv(text):
    """Parse a table written by :func:`render_csv`; returns (metadata, rows)."""
    lines = text.splitlines()
    meta = {}
    body = []
    for line in lines:
        if line.startswith("# "):
            meta = json.loads(line[2:])
        else:
            body.append(line)
    rows = list(csv.DictReader(body))
    return meta, rows
