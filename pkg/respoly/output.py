import csv
import json
import math
import os

import numpy as np

from .potential import INFINITY
from .settings import CSV_SCHEMA_VERSION, FLOAT_DIGITS

SCHEMA_DIR = os.path.join(os.path.dirname(__file__), "schemas")


def format_float(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "{0:.{1}g}".format(x, FLOAT_DIGITS)


def _plain(obj):
    """Reduce dataclasses, numpy values and INFINITY to JSON-able builtins."""
    if obj is INFINITY:
        return "inf"
    if hasattr(obj, "to_dict"):
        return _plain(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        text = format_float(obj)
        return json.dumps(text) if not math.isfinite(obj) else text
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            "{0}{1}: {2}".format(pad, json.dumps(k), _encode(v, indent, level + 1))
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError("Cannot encode {0!r}".format(obj))


def dumps(obj, indent=2):
    """JSON text with every float written to 17 significant digits, infinities as "inf"."""
    return _encode(_plain(obj), indent, 0)


def write_json(obj, stream):
    stream.write(dumps(obj))
    stream.write("\n")


def _cell(value):
    if value is None:
        return ""
    if value is INFINITY:
        return "inf"
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def write_csv(rows, columns, kind, stream):
    """CSV with a versioned schema comment line, then the header, then rows."""
    stream.write("# respoly {0} csv schema v{1}\n".format(kind, CSV_SCHEMA_VERSION))
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])


def schema_path(name):
    return os.path.join(SCHEMA_DIR, "{0}.json".format(name))


def load_schema(name):
    with open(schema_path(name)) as f:
        return json.load(f)
