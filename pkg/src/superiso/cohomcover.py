"""Scalar 2-cocycles, the multiplier and stem covers built as central extensions.

The multiplier of ``L`` is taken to be ``H^2 = Z^2 / B^2`` with scalar
coefficients, split by parity: an even cocycle pairs elements whose
parities add to zero and gives an even central element in the cover, an
odd one gives an odd central element.  A cover is assembled from one
cocycle representative per multiplier basis vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from .exactlin import (
    Field,
    GradedLinearMap,
    GradedSubspace,
    complement_rows,
    direct_sum_layout,
    in_span,
    kernel,
    rank,
    row_basis,
)
from .search import DEFAULT_BUDGET, Witness, find_isomorphism
from .serialize import DocumentError, algebra_from_json, algebra_to_json, matrix_from_json, matrix_to_json
from .superalg import (
    SuperAlgebra,
    center,
    derived,
    is_homomorphism,
    is_isomorphism,
    quotient_data,
    require_valid,
)

PARITIES = (0, 1)


@dataclass(frozen=True)
class ScalarCocycle2:
    parity: int
    coefficients: np.ndarray  # (N, N)

    def __eq__(self, other):
        if not isinstance(other, ScalarCocycle2):
            return NotImplemented
        return self.parity == other.parity and bool(np.all(self.coefficients == other.coefficients))

    def __hash__(self):
        return hash((self.parity, self.coefficients.shape))


def _sign_matrix(par: np.ndarray) -> np.ndarray:
    return np.where(np.outer(par, par) % 2 == 1, -1, 1)


def support(L: SuperAlgebra, sigma: int) -> list[tuple[int, int]]:
    par = L.parity
    return [(i, j) for i in range(L.N) for j in range(L.N) if (par[i] + par[j]) % 2 == sigma]


def cocycle_equations(L: SuperAlgebra) -> np.ndarray:
    """Rows over the ``N*N`` unknowns ``c[i, j]``: graded skew and the cocycle identity.

    The identity is ``c([x,y],z) = c(x,[y,z]) - (-1)^{|x||y|} c(y,[x,z])``.
    """
    F = L.field
    N = L.N
    C = L.constants
    s = _sign_matrix(L.parity)
    skew = F.zeros((N, N, N, N))
    for i in range(N):
        for j in range(N):
            skew[i, j, j, i] = F.reduce(skew[i, j, j, i] + F.one)
            skew[i, j, i, j] = F.reduce(skew[i, j, i, j] + s[i, j])
    E = F.zeros((N, N, N, N, N))  # (x, y, z) x (i, j)
    for x in range(N):
        for y in range(N):
            for z in range(N):
                row = E[x, y, z]
                row[:, z] = F.reduce(row[:, z] + C[x, y])
                row[x, :] = F.reduce(row[x, :] - C[y, z])
                row[y, :] = F.reduce(row[y, :] + s[x, y] * C[x, z])
    return np.concatenate([skew.reshape(N * N, N * N), E.reshape(N ** 3, N * N)], axis=0)


def _restrict(L: SuperAlgebra, sigma: int, eqs: np.ndarray):
    cols = [i * L.N + j for i, j in support(L, sigma)]
    return cols, eqs[:, cols]


def _embed(L: SuperAlgebra, cols: list[int], rows: np.ndarray) -> np.ndarray:
    F = L.field
    out = F.zeros((rows.shape[0], L.N * L.N))
    if rows.shape[0] and cols:
        out[:, cols] = rows
    return out


def cocycle_rows(L: SuperAlgebra, sigma: int) -> np.ndarray:
    """Echelon basis of the parity-``sigma`` cocycles, flattened to length ``N*N``."""
    F = L.field
    if L.N == 0:
        return F.zeros((0, 0))
    cols, A = _restrict(L, sigma, cocycle_equations(L))
    if not cols:
        return F.zeros((0, L.N * L.N))
    K = kernel(F, A)
    return _embed(L, cols, row_basis(F, K, len(cols)))


def coboundary_rows(L: SuperAlgebra, sigma: int) -> np.ndarray:
    """Echelon basis of ``{(x, y) -> f([x, y])}`` for functionals ``f`` of parity ``sigma``."""
    F = L.field
    N = L.N
    if N == 0:
        return F.zeros((0, 0))
    ks = [k for k in range(N) if L.parity[k] == sigma]
    if not ks:
        return F.zeros((0, N * N))
    gens = np.stack([L.constants[:, :, k].reshape(N * N) for k in ks])
    return row_basis(F, gens, N * N)


def _as_cocycles(L: SuperAlgebra, sigma: int, rows: np.ndarray) -> list[ScalarCocycle2]:
    return [ScalarCocycle2(sigma, r.reshape(L.N, L.N)) for r in rows]


def cocycle_space(L: SuperAlgebra, sigma: int, *, force: bool = False) -> list[ScalarCocycle2]:
    L = require_valid(L, force)
    return _as_cocycles(L, sigma, cocycle_rows(L, sigma))


def coboundary_space(L: SuperAlgebra, sigma: int, *, force: bool = False) -> list[ScalarCocycle2]:
    L = require_valid(L, force)
    Z = cocycle_rows(L, sigma)
    B = coboundary_rows(L, sigma)
    for b in B:
        if not in_span(L.field, Z, b):
            raise AssertionError("coboundary is not a cocycle")
    return _as_cocycles(L, sigma, B)


def is_cocycle(L: SuperAlgebra, c: ScalarCocycle2) -> bool:
    F = L.field
    N = L.N
    if c.coefficients.shape != (N, N):
        raise ValueError("cocycle does not match the algebra")
    flat = c.coefficients.reshape(N * N)
    for i, j in zip(*np.nonzero(c.coefficients != 0)):
        if (L.parity[i] + L.parity[j]) % 2 != c.parity:
            return False
    return not np.any(F.matmul(cocycle_equations(L), flat) != 0) if N else True


@dataclass(frozen=True)
class MultiplierResult:
    algebra: SuperAlgebra
    even_basis: tuple  # ScalarCocycle2 representatives
    odd_basis: tuple
    cocycles: tuple  # per parity, flattened rows
    coboundaries: tuple

    @property
    def graded_dim(self) -> tuple[int, int]:
        return (len(self.even_basis), len(self.odd_basis))

    def basis(self, sigma: int) -> tuple:
        return self.even_basis if sigma == 0 else self.odd_basis


def multiplier(L: SuperAlgebra, *, force: bool = False) -> MultiplierResult:
    L = require_valid(L, force)
    return _multiplier_cached(L)


@lru_cache(maxsize=256)
def _multiplier_cached(L: SuperAlgebra) -> MultiplierResult:
    F = L.field
    width = L.N * L.N
    reps, Zs, Bs = [], [], []
    for sigma in PARITIES:
        Z = cocycle_rows(L, sigma)
        B = coboundary_rows(L, sigma)
        for b in B:
            if not in_span(F, Z, b):
                raise AssertionError("coboundary is not a cocycle")
        H = complement_rows(F, B, Z, width) if Z.shape[0] else F.zeros((0, width))
        if rank(F, np.concatenate([B, H], axis=0)) != B.shape[0] + H.shape[0]:
            raise AssertionError("representatives are dependent modulo coboundaries")
        reps.append(tuple(_as_cocycles(L, sigma, H)))
        Zs.append(Z)
        Bs.append(B)
    return MultiplierResult(L, reps[0], reps[1], tuple(Zs), tuple(Bs))


# -- representative choices -------------------------------------------------


@dataclass(frozen=True)
class RepresentativeChoice:
    """``rep_i = sum_j mix[i][j] h_j + sum_k shift[i][k] b_k`` per parity.

    ``h`` is the multiplier basis and ``b`` the coboundary basis.  ``None``
    stands for the identity mix or the zero shift.
    """

    even_mix: tuple | None = None
    even_shift: tuple | None = None
    odd_mix: tuple | None = None
    odd_shift: tuple | None = None

    def matrices(self, F: Field, sigma: int, h: int, b: int) -> tuple[np.ndarray, np.ndarray]:
        mix = self.even_mix if sigma == 0 else self.odd_mix
        shift = self.even_shift if sigma == 0 else self.odd_shift
        M = F.eye(h) if mix is None else F.array([[F.scalar(x) for x in row] for row in mix]).reshape(h, h)
        S = F.zeros((h, b)) if shift is None else F.array([[F.scalar(x) for x in row] for row in shift]).reshape(h, b)
        return M, S

    def to_json(self) -> dict:
        out = {}
        for key in ("even_mix", "even_shift", "odd_mix", "odd_shift"):
            val = getattr(self, key)
            if val is not None:
                out[key] = [[str(x) for x in row] for row in val]
        return out

    @classmethod
    def from_json(cls, doc) -> "RepresentativeChoice":
        if not isinstance(doc, dict):
            raise DocumentError("representative choice must be a JSON object")
        unknown = set(doc) - {"even_mix", "even_shift", "odd_mix", "odd_shift"}
        if unknown:
            raise DocumentError(f"unknown representative choice keys {sorted(unknown)}")
        kwargs = {}
        for key, val in doc.items():
            if not isinstance(val, list) or any(not isinstance(row, list) for row in val):
                raise DocumentError(f"{key} must be a matrix")
            kwargs[key] = tuple(tuple(str(x) for x in row) for row in val)
        return cls(**kwargs)


DEFAULT_CHOICE = RepresentativeChoice()


def representatives(mult: MultiplierResult, choice: RepresentativeChoice, sigma: int) -> np.ndarray:
    """Flattened cocycle representatives (one row per multiplier basis vector)."""
    L = mult.algebra
    F = L.field
    H = np.stack([c.coefficients.reshape(-1) for c in mult.basis(sigma)]) if mult.basis(sigma) else F.zeros((0, L.N * L.N))
    B = mult.coboundaries[sigma]
    try:
        mix, shift = choice.matrices(F, sigma, H.shape[0], B.shape[0])
    except ValueError as exc:
        raise ValueError(f"representative choice does not fit the multiplier: {exc}") from exc
    out = F.matmul(mix, H) if H.shape[0] else H
    if B.shape[0] and H.shape[0]:
        out = F.reduce(out + F.matmul(shift, B))
    return out


# -- extensions -------------------------------------------------------------


@dataclass(frozen=True)
class CentralExtension:
    """``0 -> M -> K -> L -> 0`` with ``embed: M -> K`` and ``project: K -> L``."""

    base: SuperAlgebra
    total: SuperAlgebra
    embed: GradedLinearMap
    project: GradedLinearMap
    tags: frozenset = dc_field(default=frozenset())
    note: str = ""

    @property
    def kernel_dim(self) -> tuple[int, int]:
        return self.embed.source

    def to_json(self) -> dict:
        F = self.base.field
        return {
            "base": algebra_to_json(self.base),
            "total": algebra_to_json(self.total),
            "embed": matrix_to_json(F, self.embed.matrix),
            "project": matrix_to_json(F, self.project.matrix),
            "kernel_dim": {"even": self.kernel_dim[0], "odd": self.kernel_dim[1]},
            "tags": sorted(self.tags),
        }

    @classmethod
    def from_json(cls, doc) -> "CentralExtension":
        """Parse and recompute the tags; stated tags must match the recomputed ones."""
        try:
            L = algebra_from_json(doc["base"])
            K = algebra_from_json(doc["total"])
            kd = (doc["kernel_dim"]["even"], doc["kernel_dim"]["odd"])
            F = L.field
            embed = GradedLinearMap(F, kd, K.dim, matrix_from_json(F, doc["embed"], (K.N, sum(kd))))
            project = GradedLinearMap(F, K.dim, L.dim, matrix_from_json(F, doc["project"], (L.N, K.N)))
            stated = frozenset(doc.get("tags", []))
        except (KeyError, TypeError) as exc:
            raise DocumentError(f"bad extension document: {exc}") from exc
        except ValueError as exc:
            raise DocumentError(str(exc)) from exc
        ext = cls(L, K, embed, project)
        tags = verify_extension(ext)
        if stated != tags:
            raise DocumentError(f"stated tags {sorted(stated)} differ from recomputed {sorted(tags)}")
        return cls(L, K, embed, project, tags)


def _image(f: GradedLinearMap) -> GradedSubspace:
    F = f.field
    if f.matrix.shape[1] == 0:
        return GradedSubspace.zero(F, f.target)
    return f.image()


def extension_failures(ext: CentralExtension) -> list[str]:
    """Why ``ext`` is not an extension at all (empty when it is one)."""
    L, K = ext.base, ext.total
    out = []
    if ext.project.source != K.dim or ext.project.target != L.dim or ext.embed.target != K.dim:
        return ["maps do not match the algebras"]
    if not is_homomorphism(ext.project, K, L):
        out.append("projection is not a homomorphism")
    if _image(ext.project).dim != L.dim:
        out.append("projection is not surjective")
    if ext.embed.matrix.shape[1] and rank(K.field, ext.embed.matrix) != ext.embed.matrix.shape[1]:
        out.append("embedding is not injective")
    ker = ext.project.kernel() if K.N else GradedSubspace.zero(K.field, K.dim)
    if ker != _image(ext.embed):
        out.append("kernel of the projection differs from the image of the embedding")
    return out


def verify_extension(ext: CentralExtension) -> frozenset:
    """Recompute the tags ``central``, ``stem`` and ``stem_cover`` from scratch."""
    if extension_failures(ext):
        return frozenset()
    K = ext.total
    img = _image(ext.embed)
    tags = set()
    if center(K).contains(img):
        tags.add("central")
        if derived(K).contains(img):
            tags.add("stem")
            if ext.kernel_dim == multiplier(ext.base, force=True).graded_dim:
                tags.add("stem_cover")
    return frozenset(tags)


def failing_containment(ext: CentralExtension) -> str:
    K = ext.total
    img = _image(ext.embed)
    if not center(K).contains(img):
        return "image of the embedding is not inside Z(K)"
    if not derived(K).contains(img):
        return "image of the embedding is not inside K'"
    return ""


def build_cover(
    L: SuperAlgebra,
    choice: RepresentativeChoice = DEFAULT_CHOICE,
    *,
    force: bool = False,
    retry: bool = False,
) -> CentralExtension:
    """``K = L (+) M`` with ``[(x, m), (y, n)] = ([x, y], c(x, y))``.

    ``c`` assembles the chosen cocycle representatives coordinate-wise.
    The tags are computed, not assumed.  With ``retry`` a result that is not
    a stem cover is rebuilt with the default mix and then with the default
    choice, in that order.
    """
    L = require_valid(L, force)
    ext = _assemble(L, choice)
    if retry and "stem_cover" not in ext.tags:
        for alt in (RepresentativeChoice(even_shift=choice.even_shift, odd_shift=choice.odd_shift), DEFAULT_CHOICE):
            ext = _assemble(L, alt)
            if "stem_cover" in ext.tags:
                break
    return ext


def _assemble(L: SuperAlgebra, choice: RepresentativeChoice) -> CentralExtension:
    F = L.field
    mult = multiplier(L, force=True)
    reps = [representatives(mult, choice, sigma) for sigma in PARITIES]
    mdim = (reps[0].shape[0], reps[1].shape[0])
    il, im = direct_sum_layout(L.dim, mdim)
    kdim = (L.dim[0] + mdim[0], L.dim[1] + mdim[1])
    N = sum(kdim)
    c = F.zeros((N, N, N))
    if L.N:
        c[np.ix_(il, il, il)] = L.constants
    mpos = list(im)  # even multiplier coordinates first, then odd
    for t, row in enumerate(np.concatenate([reps[0], reps[1]], axis=0) if sum(mdim) else []):
        c[np.ix_(il, il, [mpos[t]])] = row.reshape(L.N, L.N, 1)
    names = [""] * N
    for pos, nm in zip(il, L.names):
        names[pos] = nm
    for t, pos in enumerate(mpos):
        names[pos] = f"m{t + 1}"
    K = SuperAlgebra(F, kdim, c, names=names, name=f"cover({L.name})" if L.name else "cover", flagged=L.flagged or not L.is_valid)
    if L.is_valid and not K.is_valid:
        raise AssertionError("cover of a valid algebra fails the axioms")
    embed_m = F.zeros((N, sum(mdim)))
    for t, pos in enumerate(mpos):
        embed_m[pos, t] = F.one
    proj_m = F.zeros((L.N, N))
    for t, pos in enumerate(il):
        proj_m[t, pos] = F.one
    ext = CentralExtension(L, K, GradedLinearMap(F, mdim, kdim, embed_m), GradedLinearMap(F, kdim, L.dim, proj_m))
    tags = verify_extension(ext)
    note = "" if "stem" in tags else failing_containment(ext)
    return CentralExtension(ext.base, K, ext.embed, ext.project, tags, note)


def trivial_extension(L: SuperAlgebra) -> CentralExtension:
    """``0 -> 0 -> L -> L -> 0``."""
    F = L.field
    return _with_tags(CentralExtension(L, L, GradedLinearMap.zero(F, (0, 0), L.dim), GradedLinearMap.identity(F, L.dim)))


def extension_from_quotient(K: SuperAlgebra, I: GradedSubspace) -> CentralExtension:
    """``0 -> I -> K -> K/I -> 0`` for a graded ideal ``I``."""
    F = K.field
    qd = quotient_data(K, I)
    B = I.basis
    embed = GradedLinearMap(F, I.dim, K.dim, B.T if B.shape[0] else F.zeros((K.N, 0)))
    return _with_tags(CentralExtension(qd.algebra, K, embed, qd.projection))


def _with_tags(ext: CentralExtension) -> CentralExtension:
    return CentralExtension(ext.base, ext.total, ext.embed, ext.project, verify_extension(ext))


def extension_homomorphism_check(ext1: CentralExtension, ext2: CentralExtension, g: GradedLinearMap) -> bool:
    """``g: K1 -> K2`` is a homomorphism with ``project2 o g = project1``."""
    if g.source != ext1.total.dim or g.target != ext2.total.dim:
        raise ValueError("map does not go between the two extension algebras")
    if ext1.base.dim != ext2.base.dim or ext1.base.field != ext2.base.field:
        raise ValueError("extensions have different bases")
    F = g.field
    if not is_homomorphism(g, ext1.total, ext2.total):
        return False
    return not np.any(F.reduce(F.matmul(ext2.project.matrix, g.matrix) - ext1.project.matrix) != 0)


def covers_isomorphic(
    L: SuperAlgebra,
    choice1: RepresentativeChoice,
    choice2: RepresentativeChoice,
    budget: int = DEFAULT_BUDGET,
    *,
    force: bool = False,
):
    """Compare the covers of two representative choices.

    The search first asks for an isomorphism compatible with the
    projections to ``L`` and falls back to a plain isomorphism search.
    Returns ``(result, ext1, ext2)``.
    """
    ext1 = build_cover(L, choice1, force=force)
    ext2 = build_cover(L, choice2, force=force)
    for ext in (ext1, ext2):
        if "stem_cover" not in ext.tags:
            raise ValueError(f"not a stem cover: {ext.note or 'kernel dimension differs from the multiplier'}")
    res = find_isomorphism(
        ext1.total,
        ext2.total,
        budget,
        force=True,
        constraints=[(ext2.project.matrix, ext1.project.matrix)],
    )
    if not isinstance(res, Witness):
        res = find_isomorphism(ext1.total, ext2.total, budget, force=True)
    if isinstance(res, Witness) and not is_isomorphism(res.value, ext1.total, ext2.total):
        raise AssertionError("cover isomorphism does not verify")
    return res, ext1, ext2


def scaled_choice(mult: MultiplierResult, factors: dict[int, object]) -> RepresentativeChoice:
    """Diagonal mix scaling selected multiplier basis vectors (indices over both parities)."""
    h0, h1 = mult.graded_dim
    F = mult.algebra.field

    def diag(h, offset):
        rows = []
        for i in range(h):
            rows.append(tuple(F.format(F.scalar(factors.get(offset + i, 1))) if j == i else "0" for j in range(h)))
        return tuple(rows)

    return RepresentativeChoice(even_mix=diag(h0, 0) if h0 else None, odd_mix=diag(h1, h0) if h1 else None)


def quotient_by_kernel_check(ext: CentralExtension) -> bool:
    """``K / embed(M) ~= L`` through the map induced by the projection."""
    F = ext.base.field
    qd = quotient_data(ext.total, _image(ext.embed))
    induced = GradedLinearMap(F, qd.algebra.dim, ext.base.dim, F.matmul(ext.project.matrix, qd.section.matrix))
    return is_isomorphism(induced, qd.algebra, ext.base)


__all__ = [
    "CentralExtension",
    "DEFAULT_CHOICE",
    "MultiplierResult",
    "RepresentativeChoice",
    "ScalarCocycle2",
    "build_cover",
    "coboundary_space",
    "cocycle_space",
    "covers_isomorphic",
    "extension_from_quotient",
    "extension_homomorphism_check",
    "is_cocycle",
    "multiplier",
    "quotient_by_kernel_check",
    "scaled_choice",
    "trivial_extension",
    "verify_extension",
]
