"""JSON schema for hyperbolic-programming instances and start points.

The schema is::

    {"family": {"name": ..., "d": ..., "k": ...},
     "c": [...], "A": [[...]], "b": [...], "e0": [...],
     "metadata": {...}}

Floats survive a write/parse cycle bit-exactly (shortest-repr JSON).
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ParseError
from .hyperbolic import (
    DETERMINANT,
    ELEMENTARY_SYMMETRIC,
    PRODUCT,
    SECOND_ORDER,
    HpFamily,
    HpInstance,
    determinant_family,
    elementary_symmetric_family,
    product_family,
    second_order_family,
)
from .sdp import mat_order


def family_from_tag(name: str, d: int, k: int | None = None) -> HpFamily:
    if name == PRODUCT:
        return product_family(d)
    if name == SECOND_ORDER:
        return second_order_family(d)
    if name == DETERMINANT:
        return determinant_family(mat_order(d))
    if name == ELEMENTARY_SYMMETRIC:
        if k is None:
            raise ParseError("elementary_symmetric family needs a 'k' parameter")
        return elementary_symmetric_family(d, k)
    raise ParseError(f"unknown family tag {name!r}")


def read_hp_json(text: str) -> HpInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad instance JSON: {exc}")
    try:
        fam = doc["family"]
        family = family_from_tag(fam["name"], int(fam["d"]), fam.get("k"))
        inst = HpInstance(
            family=family,
            c=np.array(doc["c"], dtype=float),
            A=np.atleast_2d(np.array(doc["A"], dtype=float)),
            b=np.array(doc["b"], dtype=float),
            e0=np.array(doc["e0"], dtype=float),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed instance document: {exc}")
    inst.validate()
    return inst


def write_hp_json(inst: HpInstance, metadata: dict | None = None) -> str:
    fam: dict = {"name": inst.family.name, "d": inst.family.d}
    if inst.family.k is not None:
        fam["k"] = inst.family.k
    doc = {
        "family": fam,
        "c": inst.c.tolist(),
        "A": inst.A.tolist(),
        "b": inst.b.tolist(),
        "e0": inst.e0.tolist(),
        "metadata": metadata or {},
    }
    return json.dumps(doc, indent=2) + "\n"


def read_start_point(text: str) -> np.ndarray:
    """Start matrix from a sidecar JSON document {"E0": [[...]]}."""
    try:
        doc = json.loads(text)
        E0 = np.array(doc["E0"], dtype=float)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed start-point document: {exc}")
    if E0.ndim != 2 or E0.shape[0] != E0.shape[1]:
        raise ParseError("start point must be a square matrix")
    return 0.5 * (E0 + E0.T)


def write_start_point(E0: np.ndarray) -> str:
    return json.dumps({"E0": np.asarray(E0, dtype=float).tolist()}, indent=2) + "\n"
