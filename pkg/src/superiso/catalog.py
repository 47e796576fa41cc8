"""Built-in algebras shipped as JSON documents."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .exactlin import Field
from .serialize import algebra_loads
from .superalg import SuperAlgebra

_PACKAGE = "superiso.catalog_data"


class UnknownCatalogEntry(KeyError):
    pass


@lru_cache(maxsize=None)
def names() -> tuple[str, ...]:
    files = resources.files(_PACKAGE).iterdir()
    return tuple(sorted(f.name[: -len(".json")] for f in files if f.name.endswith(".json")))


def text(name: str) -> str:
    if name not in names():
        raise UnknownCatalogEntry(name)
    return resources.files(_PACKAGE).joinpath(f"{name}.json").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load(name: str) -> SuperAlgebra:
    return algebra_loads(text(name))


def load_over(name: str, field: Field) -> SuperAlgebra:
    """Catalog entry read over ``field``; rational entries reduce mod p."""
    return load(name).over(field)


def entries_over(field: Field, *, valid_only: bool = True, max_dim: tuple[int, int] | None = None) -> list[SuperAlgebra]:
    """All catalog algebras that make sense over ``field``.

    Rational entries are reduced; prime-field entries are kept only over
    their own field.
    """
    out = []
    for nm in names():
        A = load(nm)
        if A.field != field and not A.field.is_rational:
            continue
        if max_dim is not None and (A.dim[0] > max_dim[0] or A.dim[1] > max_dim[1]):
            continue
        A = A.over(field)
        if valid_only and not A.is_valid:
            continue
        out.append(A)
    return out
