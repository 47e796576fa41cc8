"""JSON documents for algebras, maps and matrices.

Coefficients are exact strings (``"3"``, ``"-2/7"``).  Serialization is
canonical: brackets sorted by ``(left, right)``, zero coefficients dropped,
keys sorted, so parse -> serialize -> parse is the identity and equal objects
serialize to equal bytes.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .exactlin import Field, GradedLinearMap
from .superalg import SuperAlgebra


class DocumentError(ValueError):
    """Malformed or inconsistent JSON document."""


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON at line {exc.lineno}, column {exc.colno} (char {exc.pos}): {exc.msg}") from exc


# -- fields -----------------------------------------------------------------


def field_to_json(F: Field):
    return "Q" if F.is_rational else {"p": F.p}


def field_from_json(doc) -> Field:
    if doc == "Q":
        return Field(None)
    if isinstance(doc, dict) and set(doc) == {"p"} and isinstance(doc["p"], int):
        return Field(doc["p"])
    raise DocumentError(f"field must be \"Q\" or {{\"p\": prime}}, got {doc!r}")


# -- matrices ---------------------------------------------------------------


def matrix_to_json(F: Field, M: np.ndarray) -> list:
    return [[F.format(x) for x in row] for row in M]


def matrix_from_json(F: Field, doc, shape: tuple[int, int]) -> np.ndarray:
    if not isinstance(doc, list) or len(doc) != shape[0] or any(
        not isinstance(row, list) or len(row) != shape[1] for row in doc
    ):
        raise DocumentError(f"expected a {shape[0]}x{shape[1]} matrix")
    if shape[0] == 0:
        return F.zeros(shape)
    return F.array([[_coefficient(F, x) for x in row] for row in doc])


def _coefficient(F: Field, value):
    if not isinstance(value, str):
        raise DocumentError(f"coefficients must be exact strings, got {value!r}")
    try:
        return F.scalar(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad coefficient {value!r}: {exc}") from exc


def map_to_json(f: GradedLinearMap) -> dict:
    return {
        "source": {"even": f.source[0], "odd": f.source[1]},
        "target": {"even": f.target[0], "odd": f.target[1]},
        "matrix": matrix_to_json(f.field, f.matrix),
    }


def map_from_json(F: Field, doc) -> GradedLinearMap:
    try:
        src = (doc["source"]["even"], doc["source"]["odd"])
        tgt = (doc["target"]["even"], doc["target"]["odd"])
        M = matrix_from_json(F, doc["matrix"], (sum(tgt), sum(src)))
        return GradedLinearMap(F, src, tgt, M)
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"bad map document: {exc}") from exc
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


# -- algebras ---------------------------------------------------------------


def algebra_to_json(A: SuperAlgebra) -> dict:
    F = A.field
    brackets = []
    for i in range(A.N):
        for j in range(i, A.N):
            vec = A.constants[i, j]
            value = {str(k): F.format(vec[k]) for k in range(A.N) if vec[k] != 0}
            if value:
                brackets.append({"left": i, "right": j, "value": value})
    return {
        "name": A.name,
        "field": field_to_json(F),
        "dim": {"even": A.dim[0], "odd": A.dim[1]},
        "names": list(A.names),
        "brackets": brackets,
    }


def algebra_from_json(doc) -> SuperAlgebra:
    if not isinstance(doc, dict):
        raise DocumentError("algebra document must be a JSON object")
    missing = {"field", "dim", "brackets"} - set(doc)
    if missing:
        raise DocumentError(f"algebra document lacks {sorted(missing)}")
    F = field_from_json(doc["field"])
    dim = doc["dim"]
    if not isinstance(dim, dict) or not all(isinstance(dim.get(k), int) and dim.get(k) >= 0 for k in ("even", "odd")):
        raise DocumentError("dim must be {\"even\": m, \"odd\": n} with nonnegative integers")
    m, n = dim["even"], dim["odd"]
    brackets = {}
    if not isinstance(doc["brackets"], list):
        raise DocumentError("brackets must be a list")
    for entry in doc["brackets"]:
        try:
            i, j, value = entry["left"], entry["right"], entry["value"]
        except (KeyError, TypeError) as exc:
            raise DocumentError(f"bad bracket entry {entry!r}") from exc
        if not isinstance(i, int) or not isinstance(j, int) or not isinstance(value, dict):
            raise DocumentError(f"bad bracket entry {entry!r}")
        if (i, j) in brackets:
            raise DocumentError(f"bracket ({i}, {j}) given twice")
        coeffs = {}
        for k, coef in value.items():
            try:
                coeffs[int(k)] = _coefficient(F, coef)
            except ValueError as exc:
                raise DocumentError(f"bad coefficient index {k!r}") from exc
        brackets[(i, j)] = coeffs
    try:
        return SuperAlgebra.from_brackets(F, (m, n), brackets, names=doc.get("names"), name=doc.get("name", ""))
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


def algebra_dumps(A: SuperAlgebra) -> str:
    return dumps(algebra_to_json(A))


def algebra_loads(text: str) -> SuperAlgebra:
    return algebra_from_json(loads(text))
