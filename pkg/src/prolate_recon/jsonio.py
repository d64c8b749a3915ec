"""Canonical JSON serialization for binary64 round-trip safety.

All floats are written with 17 significant digits (%.17g), which is enough
to reproduce any binary64 value exactly on reload.  Output bytes are a
deterministic function of the input object, so files produced from the
same data compare equal.
"""

import json
import math


def _format(obj, indent, level):
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (f'{pad_in}{json.dumps(str(k))}: {_format(v, indent, level + 1)}'
                 for k, v in obj.items())
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        # keep numeric vectors on one line; nest anything structured
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(_format(v, indent, level + 1) for v in seq) + "]"
        items = (pad_in + _format(v, indent, level + 1) for v in seq)
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return repr(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite value is not serializable: {obj!r}")
        return "%.17g" % obj
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"unsupported type for JSON output: {type(obj)!r}")


def dumps(obj, indent=2):
    """Serialize to a canonical JSON string (trailing newline included)."""
    return _format(obj, indent, 0) + "\n"


def dump_path(obj, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(obj))


def load_path(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
