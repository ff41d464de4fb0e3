"""CSV and JSON emission.

Floats are written with 17 significant digits so that a run can be compared
byte-for-byte with a rerun; metadata carries no timestamps for the same reason.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .. import __version__
from .._backend import BACKEND


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def render_csv(table):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def render_json(table, extra_meta=None):
    meta = {"software": {"package": "hankelcomp", "version": __version__, "kernels": BACKEND}}
    meta.update(table.meta)
    if extra_meta:
        meta.update(extra_meta)
    doc = {
        "experiment": table.name,
        "meta": meta,
        "columns": list(table.columns),
        "rows": [list(r) for r in table.rows],
    }
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"


def render(table, fmt="csv", extra_meta=None):
    if fmt == "csv":
        return render_csv(table)
    if fmt == "json":
        return render_json(table, extra_meta)
    raise ValueError(f"unknown format {fmt!r}")
