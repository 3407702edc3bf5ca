"""Report serialization: versioned JSON with integers as decimal strings, plus CSV export."""

from __future__ import annotations

import csv
import io
import json

SCHEMA = "ratcurve-report/1"


def encode(obj):
    """Recursively turn ints into decimal strings (bools and floats are kept)."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, float):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if hasattr(obj, "as_dict"):
        return encode(obj.as_dict())
    return str(obj)


def dumps(command: str, config: dict, result) -> str:
    doc = {"schema": SCHEMA, "command": command, "config": encode(config), "result": encode(result)}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> dict:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unknown report schema {doc.get('schema')!r}")
    return doc


def to_csv(rows: list) -> str:
    """Flat CSV of a list of dicts; nested values are JSON-encoded (lossy by design)."""
    if not rows:
        return ""
    keys = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in rows:
        out = []
        for k in keys:
            v = r.get(k, "")
            out.append(json.dumps(encode(v), sort_keys=True) if isinstance(v, (dict, list)) else encode(v))
        w.writerow(out)
    return buf.getvalue()
