"""Wire formats: matrix JSON, complex literals, deterministic report JSON, CSV."""
from __future__ import annotations

import csv
import enum
import io
import json
import math
import re

import numpy as np

from .linalg import as_matrix

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^(?P<re>[+-]?{_NUM})(?:(?P<im>[+-]{_NUM})i)?$")


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``a+bi`` or ``a-bi`` (no whitespace, no bare ``i``)."""
    m = _COMPLEX_RE.match(text)
    if not m:
        raise ValueError(f"not a complex literal: {text!r}")
    im = m.group("im")
    return complex(float(m.group("re")), float(im) if im else 0.0)


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{format_float(z.real)}{'+' if math.copysign(1.0, z.imag) > 0 else '-'}{format_float(abs(z.imag))}i"


def matrix_to_json(a) -> dict:
    a = as_matrix(a)
    return {"n": a.shape[0], "data": [[float(z.real), float(z.imag)] for z in a.ravel()]}


def matrix_from_json(obj) -> np.ndarray:
    try:
        n = obj["n"]
        data = obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError("matrix JSON needs 'n' and 'data'") from exc
    if not isinstance(n, int) or n < 1:
        raise ValueError("'n' must be a positive integer")
    if len(data) != n * n or any(len(e) != 2 for e in data):
        raise ValueError(f"'data' must hold {n * n} [re, im] pairs")
    return as_matrix(np.array([complex(re, im) for re, im in data]).reshape(n, n))


def _encode(obj, out: list) -> None:
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, enum.Enum):
        _encode(obj.value, out)
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(obj) if math.isfinite(obj) else "null")
    elif isinstance(obj, (complex, np.complexfloating)):
        out.append(json.dumps(format_complex(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, np.ndarray) and obj.ndim == 2:
        _encode(matrix_to_json(obj), out)
    elif isinstance(obj, np.ndarray):
        _encode(obj.tolist(), out)
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(k)))
            out.append(": ")
            _encode(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _encode(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON text with 17 significant digits for every float; key order preserved."""
    out: list[str] = []
    _encode(obj, out)
    return "".join(out) + "\n"


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()
