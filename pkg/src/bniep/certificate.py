"""Construction certificates: a tree of the primitive operations that built a matrix.

Each node names an operation (``kind``), the scalars it used (``params``) and
the sub-certificates producing its matrix arguments (``children``).
:func:`replay` re-executes the tree and reproduces the matrix bit for bit,
because every operation is deterministic in its inputs.

Wrapper kinds (``small-n``, ``suleimanova``, ``borobia-3.4`` and friends)
carry metadata about which route was taken and replay as their single child.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import glue
from .core import BisymMatrix
from .errors import ParameterError

WRAPPER_KINDS = frozenset({
    "small-n", "suleimanova", "borobia-3.4", "borobia-3.5", "borobia-3.6",
    "soto-3.8", "diagonal", "auto",
})

_REPLAYERS: dict = {}


def register(kind: str) -> Callable:
    """Decorator registering ``fn(params, child_matrices) -> BisymMatrix`` for ``kind``."""
    def deco(fn):
        _REPLAYERS[kind] = fn
        return fn
    return deco


def _plain(obj):
    """Convert numpy values inside ``obj`` to JSON-friendly Python values."""
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


@dataclass(frozen=True)
class Certificate:
    kind: str
    params: dict = field(default_factory=dict, hash=False)
    children: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "params", _plain(dict(self.params)))
        object.__setattr__(self, "children", tuple(self.children))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params,
                "children": [c.to_dict() for c in self.children]}

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        try:
            return cls(d["kind"], d.get("params", {}),
                       tuple(cls.from_dict(c) for c in d.get("children", ())))
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"malformed certificate: {exc}") from exc

    def walk(self):
        """Pre-order iteration over all nodes."""
        yield self
        for c in self.children:
            yield from c.walk()

    def kinds(self) -> list:
        return [n.kind for n in self.walk()]


def wrap(kind: str, child: Certificate, **params) -> Certificate:
    if kind not in WRAPPER_KINDS:
        raise ParameterError(f"{kind!r} is not a wrapper kind")
    return Certificate(kind, params, (child,))


def replay(cert: Certificate) -> BisymMatrix:
    """Rebuild the matrix a certificate describes."""
    if cert.kind in WRAPPER_KINDS:
        if len(cert.children) != 1:
            raise ParameterError(f"wrapper {cert.kind!r} needs exactly one child")
        return replay(cert.children[0])
    try:
        fn = _REPLAYERS[cert.kind]
    except KeyError:
        raise ParameterError(f"unknown certificate kind {cert.kind!r}") from None
    kids = [replay(c) for c in cert.children]
    return fn(cert.params, kids)


# ---------------------------------------------------------------------------
# Leaves and glue primitives
# ---------------------------------------------------------------------------

@register("matrix")
def _matrix(params, kids):
    return BisymMatrix(params["entries"])


@register("zero")
def _zero(params, kids):
    return BisymMatrix.zeros(int(params["order"]))


@register("pair-shell")
def _pair(params, kids):
    return glue.pair_shell(params["lam_i"], params["lam_j"])


@register("glue-ab")
def _glue_ab(params, kids):
    return glue.glue_ab(kids[0], kids[1], params["a"], params["b"])


@register("glue-three")
def _glue_three(params, kids):
    return glue.glue_three(kids[0], kids[1], params["rho"], params["xi"])


@register("merge-transfer")
def _merge(params, kids):
    return glue.merge_transfer(kids[0], kids[1], params["epsilon"])


@register("nest")
def _nest(params, kids):
    return glue.nest(kids[0], kids[1])


@register("diag-pad")
def _pad(params, kids):
    return glue.nest(glue.pair_shell(params["lam_i"], params["lam_j"]), kids[0])


@register("center-insert")
def _center(params, kids):
    return glue.center_insert(kids[0], params["value"])


@register("rado-update")
def _rado(params, kids):
    return glue.rado_update(kids[0], np.array(params["X"]), np.array(params["B"]),
                            np.array(params["omega"]))


def leaf(Q) -> Certificate:
    return Certificate("matrix", {"entries": np.asarray(Q).tolist()})
