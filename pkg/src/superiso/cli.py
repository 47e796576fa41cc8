"""Command-line front end producing deterministic JSON reports.

Exit codes: 0 when the analysis completed (negative answers included), 1 when
the input was refused, 2 when a search ran out of budget.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, catalog
from .cohomcover import DEFAULT_CHOICE, RepresentativeChoice, build_cover, multiplier
from .exactlin import Field, FieldError, GradedSubspace
from .factorset import (
    FactorSet,
    InvalidFactorSetError,
    factor_set_from_section,
    reconstruct,
    reconstruction_isomorphism,
)
from .isoclinism import (
    IsoclinismWitness,
    NotIsoclinic,
    find_isoclinism,
    is_stem,
    lemma_1_10_check,
    stem_decompose,
)
from .search import DEFAULT_BUDGET, NotIsomorphic, Witness, cached_profile, find_isomorphism
from .serialize import DocumentError, algebra_from_json, algebra_to_json, dumps, loads, map_from_json, map_to_json
from .superalg import (
    InvalidAlgebraError,
    SuperAlgebra,
    center,
    derived,
    is_isomorphism,
    random_change_of_basis,
    require_valid,
)

EXIT_OK, EXIT_REFUSED, EXIT_UNKNOWN = 0, 1, 2

VERBS = ("validate", "info", "stem", "isoclinic", "isomorphic", "factorset", "reconstruct", "multiplier", "cover", "catalog")


class UsageError(ValueError):
    pass


# -- formatting -------------------------------------------------------------


def vector_json(A: SuperAlgebra, v) -> dict:
    F = A.field
    return {A.names[k]: F.format(v[k]) for k in range(A.N) if v[k] != 0}


def subspace_json(A: SuperAlgebra, S: GradedSubspace) -> dict:
    return {
        "dim": {"even": S.dim[0], "odd": S.dim[1]},
        "even": [vector_json(A, v) for v in S.even],
        "odd": [vector_json(A, v) for v in S.odd],
    }


def _dim(d) -> dict:
    return {"even": d[0], "odd": d[1]}


def validity(*algebras: SuperAlgebra) -> str:
    return "flagged" if any(a.flagged or not a.is_valid for a in algebras) else "valid"


# -- inputs -----------------------------------------------------------------


def read_document(ref: str):
    if ref.startswith("catalog:"):
        return loads(catalog.text(ref[len("catalog:"):]))
    if ref == "-":
        return loads(sys.stdin.read())
    path = Path(ref)
    if not path.is_file():
        raise UsageError(f"no such input file: {ref}")
    return loads(path.read_text(encoding="utf-8"))


def load_algebra(ref: str, field: Field | None) -> SuperAlgebra:
    A = algebra_from_json(read_document(ref))
    if field is not None and field != A.field:
        A = A.over(field)
    return A


def _usable(A: SuperAlgebra, force: bool) -> SuperAlgebra:
    return require_valid(A, force)


# -- verbs ------------------------------------------------------------------


def cmd_validate(args, field):
    A = load_algebra(args.inputs[0], field)
    rep = A.report
    F = A.field
    jacobi = [
        {
            "indices": [i, j, k],
            "triple": [A.names[i], A.names[j], A.names[k]],
            "residual": vector_json(A, res),
        }
        for i, j, k, res in rep.jacobi
    ]
    result = {
        "valid": rep.valid,
        "violations": {
            "grading": [
                {"indices": [i, j, k], "coefficient": F.format(c)} for i, j, k, c in rep.grading
            ],
            "skew": [{"indices": [i, j], "residual": vector_json(A, r)} for i, j, r in rep.skew],
            "jacobi": jacobi,
        },
    }
    return EXIT_OK, result, [A]


def cmd_info(args, field):
    A = _usable(load_algebra(args.inputs[0], field), args.force)
    Z, D = center(A), derived(A)
    result = {
        "name": A.name,
        "field": str(A.field),
        "dim": _dim(A.dim),
        "center": subspace_json(A, Z),
        "derived": subspace_json(A, D),
        "abelian": A.is_abelian,
        "stem": is_stem(A),
        "profile": cached_profile(A).as_dict(),
    }
    return EXIT_OK, result, [A]


def cmd_stem(args, field):
    A = _usable(load_algebra(args.inputs[0], field), args.force)
    d = stem_decompose(A, force=True)
    result = {
        "stem_part": algebra_to_json(d.stem_part),
        "stem_subspace": subspace_json(A, d.stem_subspace),
        "abelian_dim": _dim(d.abelian_part.dim),
        "abelian_subspace": subspace_json(A, d.abelian_subspace),
        "iso": map_to_json(d.iso),
        "verified": is_isomorphism(d.iso, A, d.total),
    }
    return EXIT_OK, result, [A]


def _second(args, field, A: SuperAlgebra) -> SuperAlgebra:
    if len(args.inputs) != 2:
        raise UsageError(f"{args.verb} takes two inputs")
    if args.inputs[1] == "random":
        return random_change_of_basis(A, np.random.default_rng(args.seed))[0].with_name(f"random({A.name})")
    return load_algebra(args.inputs[1], field)


def cmd_isoclinic(args, field):
    L = _usable(load_algebra(args.inputs[0], field), args.force)
    K = _usable(_second(args, field, L), args.force)
    res = find_isoclinism(L, K, args.budget, force=True)
    result = {"nodes": res.nodes}
    code = EXIT_OK
    if isinstance(res, Witness):
        doc = res.value.to_json()
        w = IsoclinismWitness.from_json(doc)  # re-verified on load
        result.update(isoclinic=True, witness=doc, commutator_identities=lemma_1_10_check(w))
    elif isinstance(res, NotIsoclinic):
        result.update(isoclinic=False, reason=res.reason)
    else:
        result.update(isoclinic=None, reason=res.reason)
        code = EXIT_UNKNOWN
    return code, result, [L, K]


def cmd_isomorphic(args, field):
    A = _usable(load_algebra(args.inputs[0], field), args.force)
    B = _usable(_second(args, field, A), args.force)
    res = find_isomorphism(A, B, args.budget, force=True)
    result = {"nodes": res.nodes}
    code = EXIT_OK
    if isinstance(res, Witness):
        f = map_from_json(A.field, map_to_json(res.value))
        if not is_isomorphism(f, A, B):
            raise AssertionError("isomorphism does not re-verify")
        result.update(isomorphic=True, map=map_to_json(f))
    elif isinstance(res, NotIsomorphic):
        result.update(isomorphic=False, reason=res.reason)
    else:
        result.update(isomorphic=None, reason=res.reason)
        code = EXIT_UNKNOWN
    return code, result, [A, B]


def cmd_factorset(args, field):
    A = _usable(load_algebra(args.inputs[0], field), args.force)
    sd = factor_set_from_section(A, force=True)
    result = {
        "factor_set": sd.factor_set.to_json(),
        "section": map_to_json(sd.section),
        "center": subspace_json(A, center(A)),
    }
    return EXIT_OK, result, [A]


def cmd_reconstruct(args, field):
    doc = read_document(args.inputs[0])
    if isinstance(doc, dict) and "quotient" in doc:
        r = FactorSet.from_json(doc)
        rec = reconstruct(r)
        result = {"algebra": algebra_to_json(rec.algebra), "center_copy": subspace_json(rec.algebra, rec.center_copy)}
        result["center_copy_is_center"] = rec.center_equals_center()
        return EXIT_OK, result, [rec.algebra]
    A = algebra_from_json(doc)
    if field is not None and field != A.field:
        A = A.over(field)
    A = _usable(A, args.force)
    sd = factor_set_from_section(A, force=True)
    rec = reconstruct(sd.factor_set)
    theta = reconstruction_isomorphism(A, sd, rec)
    result = {
        "algebra": algebra_to_json(rec.algebra),
        "center_copy": subspace_json(rec.algebra, rec.center_copy),
        "center_copy_is_center": rec.center_equals_center(),
        "theta": map_to_json(theta),
        "verified": True,
    }
    return EXIT_OK, result, [A]


def cmd_multiplier(args, field):
    A = _usable(load_algebra(args.inputs[0], field), args.force)
    mult = multiplier(A, force=True)
    F = A.field

    def cocycle_json(c):
        return [
            {"left": A.names[i], "right": A.names[j], "value": F.format(c.coefficients[i, j])}
            for i, j in zip(*np.nonzero(c.coefficients != 0))
        ]

    result = {
        "graded_dim": _dim(mult.graded_dim),
        "cocycle_dim": _dim(tuple(z.shape[0] for z in mult.cocycles)),
        "coboundary_dim": _dim(tuple(b.shape[0] for b in mult.coboundaries)),
        "even": [cocycle_json(c) for c in mult.even_basis],
        "odd": [cocycle_json(c) for c in mult.odd_basis],
    }
    return EXIT_OK, result, [A]


def cmd_cover(args, field):
    A = _usable(load_algebra(args.inputs[0], field), args.force)
    choice = DEFAULT_CHOICE
    if args.choice:
        choice = RepresentativeChoice.from_json(read_document(args.choice))
    ext = build_cover(A, choice, force=True, retry=args.retry)
    result = {"extension": ext.to_json(), "tags": sorted(ext.tags)}
    if ext.note:
        result["failing_containment"] = ext.note
    return EXIT_OK, result, [A]


def cmd_catalog(args, field):
    if not args.inputs or args.inputs[0] not in ("list", "show"):
        raise UsageError("catalog takes 'list' or 'show NAME'")
    if args.inputs[0] == "list":
        entries = []
        for nm in catalog.names():
            A = catalog.load(nm)
            entries.append({"name": nm, "field": str(A.field), "dim": _dim(A.dim), "valid": A.is_valid})
        return EXIT_OK, {"entries": entries}, []
    if len(args.inputs) != 2:
        raise UsageError("catalog show takes one name")
    A = catalog.load(args.inputs[1])
    return EXIT_OK, {"algebra": algebra_to_json(A), "valid": A.is_valid}, [A]


HANDLERS = {
    "validate": cmd_validate,
    "info": cmd_info,
    "stem": cmd_stem,
    "isoclinic": cmd_isoclinic,
    "isomorphic": cmd_isomorphic,
    "factorset": cmd_factorset,
    "reconstruct": cmd_reconstruct,
    "multiplier": cmd_multiplier,
    "cover": cmd_cover,
    "catalog": cmd_catalog,
}

ARITY = {"isoclinic": 2, "isomorphic": 2}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="superiso", description="Exact computations with Lie superalgebras.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("inputs", nargs="*", help="algebra files, catalog:NAME references, or catalog subcommands")
    p.add_argument("--force", action="store_true", help="operate on algebras that fail the axioms (reports are flagged)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="node budget for isomorphism searches")
    p.add_argument("--seed", type=int, default=0, help="seed for the 'random' second input")
    p.add_argument("--field", type=int, default=None, metavar="P", help="read rational inputs modulo the prime P")
    p.add_argument("--choice", default=None, help="representative choice JSON for cover")
    p.add_argument("--retry", action="store_true", help="cover: fall back to default representatives if not a stem cover")
    p.add_argument("--output", default=None, help="also write the report to this path")
    p.add_argument("--timing", action="store_true", help="include wall-clock timing (reports stop being reproducible)")
    return p


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgumentError(message)


def run(argv) -> tuple[int, str]:
    """Run one command; returns the exit code and the report text."""
    parser = build_parser()
    parser.__class__ = _Parser
    try:
        args = parser.parse_args(list(argv))
    except _ArgumentError as exc:
        return EXIT_REFUSED, dumps({"tool": "superiso", "version": __version__, "error": f"usage: {exc}"})
    report = {
        "tool": "superiso",
        "version": __version__,
        "verb": args.verb,
        "inputs": list(args.inputs),
        "flags": {"force": args.force, "budget": args.budget, "seed": args.seed, "field": args.field},
    }
    start = time.perf_counter()
    try:
        need = ARITY.get(args.verb, 1)
        if args.verb != "catalog" and len(args.inputs) != need:
            raise UsageError(f"{args.verb} takes {need} input(s), got {len(args.inputs)}")
        field = Field(args.field) if args.field is not None else None
        code, result, algebras = HANDLERS[args.verb](args, field)
        report["result"] = result
        if algebras:
            report["validity"] = validity(*algebras)
    except (
        DocumentError,
        InvalidAlgebraError,
        InvalidFactorSetError,
        FieldError,
        catalog.UnknownCatalogEntry,
        UsageError,
        ValueError,
    ) as exc:
        code = EXIT_REFUSED
        report["error"] = f"{type(exc).__name__}: {exc}"
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    text = dumps(report)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    return code, text


def main(argv=None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
