"""CSV and JSON plumbing shared by the command line tools.

CSV files use ``,`` separators and ``.`` decimals. Lines starting with ``#``
are comments (metadata is written there) and a single header row is
detected when its fields do not parse as numbers.
"""
import json
import math

import numpy as np

from .dist import SCHEMA_VERSION


class InputError(Exception):
    """Unreadable input; the message names the file and line."""


def _num(s):
    return float(s)


def read_table(path):
    """Return (header or None, 2-d float array) from a CSV file."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: cannot read: {exc}") from None
    header, rows, width = None, [], None
    for lineno, line in enumerate(lines, 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        fields = [f.strip() for f in text.split(",")]
        try:
            row = [_num(f) for f in fields]
        except ValueError:
            if header is None and not rows:
                header = fields
                width = len(fields)
                continue
            bad = next(f for f in fields if not _is_number(f))
            raise InputError(f"{path}:{lineno}: cannot parse {bad!r} as a number") from None
        if width is None:
            width = len(row)
        if len(row) != width:
            raise InputError(f"{path}:{lineno}: expected {width} fields, found {len(row)}")
        rows.append(row)
    if not rows:
        raise InputError(f"{path}: no data rows")
    return header, np.array(rows, dtype=float)


def _is_number(s):
    try:
        float(s)
        return True
    except ValueError:
        return False


def read_column(path, column=None):
    """One numeric column: by name, by index, ``value`` if present, else the last."""
    header, data = read_table(path)
    if column is None:
        idx = header.index("value") if header and "value" in header else data.shape[1] - 1
    elif header and column in header:
        idx = header.index(column)
    else:
        try:
            idx = int(column)
        except ValueError:
            raise InputError(f"{path}: no column {column!r}") from None
        if not -data.shape[1] <= idx < data.shape[1]:
            raise InputError(f"{path}: no column {column!r}")
    return data[:, idx]


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: cannot read: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from None


def _fmt(v):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return repr(float(v))


def _clean(obj):
    """JSON-safe copy: arrays to lists, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else repr(f)
    return obj


def metadata(version, command, seed, params):
    return {"program": "hyperbolic", "version": version, "schema_version": SCHEMA_VERSION,
            "command": command, "seed": seed, "params": _clean(params)}


def dumps_json(meta, result):
    return json.dumps({"metadata": _clean(meta), "result": _clean(result)}, indent=2) + "\n"


def dumps_csv(meta, header, columns):
    out = ["# metadata: " + json.dumps(_clean(meta), sort_keys=True), ",".join(header)]
    cols = [np.asarray(c) for c in columns]
    for row in zip(*cols):
        out.append(",".join(_fmt(v) for v in row))
    return "\n".join(out) + "\n"
