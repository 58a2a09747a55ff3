"""Text and JSON formats for spectra, matrices, certificates and reports.

Floats go through :func:`json.dumps`, which writes the shortest decimal that
reads back to the same binary64 value, so every round trip is lossless.
"""

from __future__ import annotations

import json
import math
import re

import numpy as np

from .certificate import Certificate
from .core import BisymMatrix, Spectrum
from .errors import ParameterError

SCHEMA = 1
_SEP = re.compile(r"\s*,\s*|\s+")


def parse_spectrum(text: str) -> Spectrum:
    """Comma and/or whitespace separated decimals, e.g. ``"3, 1"`` or ``"1 -2"``."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1].strip()
    if not body:
        raise ParameterError("empty spectrum")
    tokens = _SEP.split(body)
    values = []
    for tok in tokens:
        if not tok:
            raise ParameterError(f"empty entry in spectrum {text!r}")
        try:
            v = float(tok)
        except ValueError:
            raise ParameterError(f"cannot parse {tok!r} as a number") from None
        if not math.isfinite(v):
            raise ParameterError(f"non-finite entry {tok!r}")
        values.append(v)
    return Spectrum(values)


def parse_partition(text: str) -> list:
    """Blocks separated by ``|``, entries by commas: ``"-2,-3,-4|-1"``."""
    blocks = []
    for part in text.split("|"):
        blocks.append(list(parse_spectrum(part).values))
    return blocks


def parse_values(text: str) -> list:
    """A list of decimals in the order given (no sorting)."""
    body = text.strip().strip("[]").strip()
    try:
        out = [float(t) for t in _SEP.split(body)]
    except ValueError:
        raise ParameterError(f"cannot parse {text!r} as a list of numbers") from None
    if not all(math.isfinite(v) for v in out):
        raise ParameterError("non-finite value")
    return out


def matrix_to_dict(Q) -> dict:
    a = np.asarray(Q, dtype=float)
    return {"schema": SCHEMA, "order": int(a.shape[0]), "entries": a.ravel().tolist()}


def matrix_array_from_dict(d) -> np.ndarray:
    """Read the matrix JSON schema into an array without checking structure."""
    if isinstance(d, list):
        a = np.array(d, dtype=float)
        if a.ndim != 2:
            raise ParameterError("matrix list must be two-dimensional")
        return a
    if not isinstance(d, dict) or "entries" not in d:
        raise ParameterError("matrix JSON needs an 'entries' field")
    if d.get("schema", SCHEMA) != SCHEMA:
        raise ParameterError(f"unsupported matrix schema {d.get('schema')!r}")
    try:
        entries = np.array(d["entries"], dtype=float)
    except (TypeError, ValueError):
        raise ParameterError("matrix entries must be numbers") from None
    if entries.ndim == 2:
        return entries
    n = int(d.get("order", round(math.sqrt(entries.size))))
    if entries.size != n * n:
        raise ParameterError(f"{entries.size} entries do not fill an order-{n} matrix")
    return entries.reshape(n, n)


def parse_matrix(text_or_dict, tol: float = 1e-9) -> BisymMatrix:
    """Parse matrix JSON and validate it as bisymmetric and nonnegative within ``tol``."""
    d = json.loads(text_or_dict) if isinstance(text_or_dict, str) else text_or_dict
    return BisymMatrix.from_array(matrix_array_from_dict(d), tol)


def certificate_to_dict(cert: Certificate) -> dict:
    return {"schema": SCHEMA, "certificate": cert.to_dict()}


def certificate_from_dict(d: dict) -> Certificate:
    if d.get("schema", SCHEMA) != SCHEMA:
        raise ParameterError(f"unsupported certificate schema {d.get('schema')!r}")
    return Certificate.from_dict(d["certificate"] if "certificate" in d else d)


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)


def format_matrix(Q, precision: int = 6) -> str:
    """Aligned decimal grid."""
    a = np.asarray(Q, dtype=float)
    cells = [[f"{v:.{precision}f}" for v in row] for row in a]
    width = max(len(c) for row in cells for c in row)
    return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)
