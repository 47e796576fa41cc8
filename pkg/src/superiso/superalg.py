"""Lie superalgebras given by graded structure constants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .exactlin import (
    ContainmentError,
    Field,
    GradedLinearMap,
    GradedSubspace,
    coordinates,
    direct_sum_layout,
    graded_complement,
    inverse,
    kernel,
    parity_mask,
    rank,
    subspace_sum,
)


class InvalidAlgebraError(ValueError):
    """An operation was refused because the algebra fails the axioms."""


class NotAnIdealError(ValueError):
    pass


@dataclass(frozen=True)
class ValidationReport:
    """Offending index tuples, each with its nonzero residual.

    ``grading`` holds ``(i, j, k, coefficient)``, ``skew`` holds
    ``(i, j, residual)`` and ``jacobi`` holds ``(i, j, k, residual)`` where
    residuals are coordinate vectors.
    """

    grading: tuple = ()
    skew: tuple = ()
    jacobi: tuple = ()

    @property
    def valid(self) -> bool:
        return not (self.grading or self.skew or self.jacobi)

    def __bool__(self):
        return self.valid


class SuperAlgebra:
    """A finite-dimensional Lie superalgebra over an exact field.

    The basis is ordered with the ``m`` even vectors first and the ``n`` odd
    vectors after them.  ``constants[i, j]`` is the coordinate vector of
    ``[b_i, b_j]``.
    """

    def __init__(
        self,
        field: Field,
        dim: tuple[int, int],
        constants,
        names: Sequence[str] | None = None,
        name: str = "",
        flagged: bool = False,
    ):
        m, n = int(dim[0]), int(dim[1])
        if m < 0 or n < 0:
            raise ValueError("dimensions must be nonnegative")
        N = m + n
        c = field.array(constants) if N else field.zeros((0, 0, 0))
        if c.shape != (N, N, N):
            raise ValueError(f"constants must have shape {(N, N, N)}, got {c.shape}")
        c.setflags(write=False)
        if names is None:
            names = [f"e{i + 1}" for i in range(N)]
        names = tuple(str(s) for s in names)
        if len(names) != N:
            raise ValueError("one name per basis vector is required")
        if len(set(names)) != N:
            raise ValueError("basis names must be distinct")
        self.field = field
        self.dim = (m, n)
        self.constants = c
        self.names = names
        self.name = name
        self.flagged = bool(flagged)

    # -- construction ----------------------------------------------------

    @classmethod
    def from_brackets(
        cls,
        field: Field,
        dim: tuple[int, int],
        brackets: Mapping[tuple[int, int], Mapping[int, object]],
        names: Sequence[str] | None = None,
        name: str = "",
    ) -> "SuperAlgebra":
        """Build from brackets ``{(i, j): {k: coefficient}}`` with ``i <= j``.

        The brackets with ``i > j`` follow from graded skew-symmetry.
        """
        m, n = dim
        N = m + n
        par = parity_mask(dim)
        c = field.zeros((N, N, N))
        for (i, j), value in brackets.items():
            if not (0 <= i < N and 0 <= j < N):
                raise ValueError(f"bracket index ({i}, {j}) out of range")
            if i > j:
                raise ValueError(f"bracket ({i}, {j}) must be given with left <= right")
            vec = field.zeros(N)
            for k, coef in value.items():
                k = int(k)
                if not 0 <= k < N:
                    raise ValueError(f"coefficient index {k} out of range")
                vec[k] = field.scalar(coef)
            if i == j and par[i] == 0 and np.any(vec != 0):
                raise ValueError(f"[b{i}, b{i}] must vanish for an even basis vector")
            c[i, j] = vec
            if i != j:
                sign = 1 if par[i] * par[j] else -1
                c[j, i] = field.reduce(sign * vec)
        return cls(field, dim, c, names=names, name=name)

    @classmethod
    def abelian(cls, field: Field, m: int, n: int, name: str | None = None) -> "SuperAlgebra":
        N = m + n
        return cls(field, (m, n), field.zeros((N, N, N)), name=name if name is not None else f"abelian-{m}-{n}")

    def with_name(self, name: str) -> "SuperAlgebra":
        return SuperAlgebra(self.field, self.dim, self.constants, self.names, name, self.flagged)

    def over(self, field: Field) -> "SuperAlgebra":
        """The same structure constants read in another field."""
        if field == self.field:
            return self
        if not self.field.is_rational:
            raise ValueError(f"cannot move an algebra over {self.field} to {field}")
        c = field.array(self.constants)
        return SuperAlgebra(field, self.dim, c, self.names, self.name, self.flagged)

    # -- basic structure -------------------------------------------------

    @property
    def N(self) -> int:
        return self.dim[0] + self.dim[1]

    @cached_property
    def parity(self) -> np.ndarray:
        return parity_mask(self.dim)

    def bracket(self, x, y) -> np.ndarray:
        """Bilinear extension of the structure constants."""
        F = self.field
        x = F.array(x)
        y = F.array(y)
        if x.shape != (self.N,) or y.shape != (self.N,):
            raise ValueError("vectors do not match the algebra dimension")
        if self.N == 0:
            return F.zeros(0)
        left = F.matmul(x, self.constants.reshape(self.N, -1)).reshape(self.N, self.N)
        return F.matmul(y, left)

    def ad(self, x) -> np.ndarray:
        """Matrix of ``y -> [x, y]``."""
        F = self.field
        x = F.array(x)
        if self.N == 0:
            return F.zeros((0, 0))
        return F.matmul(x, self.constants.reshape(self.N, -1)).reshape(self.N, self.N).T

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.N)
        v[i] = self.field.one
        return v

    @cached_property
    def report(self) -> ValidationReport:
        return validate(self)

    @property
    def is_valid(self) -> bool:
        return self.report.valid

    @property
    def is_abelian(self) -> bool:
        return not np.any(self.constants != 0)

    def __eq__(self, other):
        if not isinstance(other, SuperAlgebra):
            return NotImplemented
        return (
            self.field == other.field
            and self.dim == other.dim
            and self.names == other.names
            and self.name == other.name
            and bool(np.all(self.constants == other.constants))
        )

    def __hash__(self):
        return hash((self.field, self.dim, self.names, self.name))

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return f"SuperAlgebra({label}{self.dim[0]}|{self.dim[1]} over {self.field})"

    def describe(self) -> str:
        """Nonzero brackets ``[a, b] = ...`` with ``a <= b``, one per line."""
        F = self.field
        lines = []
        for i in range(self.N):
            for j in range(i, self.N):
                vec = self.constants[i, j]
                if not np.any(vec != 0):
                    continue
                terms = []
                for k in np.nonzero(vec != 0)[0]:
                    coef = F.format(vec[k])
                    terms.append(self.names[k] if coef == "1" else f"{coef}*{self.names[k]}")
                lines.append(f"[{self.names[i]}, {self.names[j]}] = {' + '.join(terms)}")
        return "\n".join(lines)


def _sign(a: int, b: int) -> int:
    return -1 if (a * b) % 2 else 1


def validate(A: SuperAlgebra) -> ValidationReport:
    """Exhaustive check of grading, graded skew-symmetry and graded Jacobi.

    The Jacobi residual at ``(x, y, z)`` is
    ``(-1)^{|x||z|}[x,[y,z]] + (-1)^{|y||x|}[y,[z,x]] + (-1)^{|z||y|}[z,[x,y]]``.
    """
    F = A.field
    N = A.N
    c = A.constants
    par = A.parity
    if N == 0:
        return ValidationReport()

    grading = []
    for i, j, k in zip(*np.nonzero(c != 0)):
        if par[k] != (par[i] + par[j]) % 2:
            grading.append((int(i), int(j), int(k), c[i, j, k]))

    skew = []
    for i in range(N):
        for j in range(i, N):
            res = F.reduce(c[j, i] + _sign(par[i], par[j]) * c[i, j])
            if np.any(res != 0):
                skew.append((i, j, res))

    # nested[a, b, d] = [b_a, [b_b, b_d]], computed on integers when possible
    scaled = _integer_constants(F, c)
    if scaled is None:
        C, scale = c, 1
    else:
        C, scale = scaled
    nested = np.tensordot(C, C, axes=([2], [1]))  # [b, d, a, m]
    nested = np.transpose(nested, (2, 0, 1, 3))
    s = np.where(np.outer(par, par) % 2 == 1, -1, 1)
    term1 = s[:, None, :, None] * nested  # (-1)^{|x||z|} [x,[y,z]]
    term2 = s.T[:, :, None, None] * np.transpose(nested, (2, 0, 1, 3))  # (-1)^{|y||x|} [y,[z,x]]
    term3 = s[None, :, :, None] * np.transpose(nested, (1, 2, 0, 3))  # (-1)^{|z||y|} [z,[x,y]]
    total = term1 + term2 + term3
    if F.p is not None:
        total = total % F.p
    jacobi = []
    for i, j, k in zip(*np.nonzero(np.any(total != 0, axis=3))):
        res = total[i, j, k]
        if scale != 1:
            res = F.array([Fraction(int(x), scale * scale) for x in res])
        elif scaled is not None and F.is_rational:
            res = F.array([int(x) for x in res])
        else:
            res = F.reduce(res.copy())
        jacobi.append((int(i), int(j), int(k), res))
    return ValidationReport(tuple(grading), tuple(skew), tuple(jacobi))


def _integer_constants(F: Field, c: np.ndarray):
    """``(C, D)`` with ``c = C / D`` and ``C`` in int64, or ``None`` if the
    Jacobi sums could overflow."""
    N = c.shape[0]
    if F.p is not None:
        C, den = c.astype(np.int64), 1
    else:
        den = 1
        for x in c[c != 0]:
            den = math.lcm(den, x.denominator)
        ints = [int(x * den) for x in c.flat]
        bound = max((abs(x) for x in ints), default=0)
        if 3 * N * bound * bound >= 2**62:
            return None
        C = np.array(ints, dtype=np.int64).reshape(c.shape)
    if 3 * N * int(np.max(np.abs(C), initial=0)) ** 2 >= 2**62:
        return None
    return C, den


def require_valid(A: SuperAlgebra, force: bool = False) -> SuperAlgebra:
    """Return ``A`` if it may be used; forced invalid algebras come back flagged."""
    if A.is_valid or A.flagged:
        return A
    if not force:
        rep = A.report
        raise InvalidAlgebraError(
            f"{A!r} is not a Lie superalgebra "
            f"({len(rep.grading)} grading, {len(rep.skew)} skew, {len(rep.jacobi)} Jacobi violations); "
            "pass force=True to proceed anyway"
        )
    return SuperAlgebra(A.field, A.dim, A.constants, A.names, A.name, flagged=True)


def _inherited_flag(*algebras: SuperAlgebra) -> bool:
    return any(a.flagged or not a.is_valid for a in algebras)


# -- subspaces --------------------------------------------------------------


def whole(A: SuperAlgebra) -> GradedSubspace:
    return GradedSubspace.whole(A.field, A.dim)


def zero_subspace(A: SuperAlgebra) -> GradedSubspace:
    return GradedSubspace.zero(A.field, A.dim)


def span(A: SuperAlgebra, vectors) -> GradedSubspace:
    return GradedSubspace.from_vectors(A.field, A.dim, vectors)


def bracket_table(A: SuperAlgebra, X, Y) -> np.ndarray:
    """``table[a, b] = [X[a], Y[b]]`` for rows of ``X`` and ``Y``."""
    F = A.field
    N = A.N
    X = F.array(X).reshape(-1, N) if N else F.zeros((len(X), 0))
    Y = F.array(Y).reshape(-1, N) if N else F.zeros((len(Y), 0))
    if X.shape[0] == 0 or Y.shape[0] == 0 or N == 0:
        return F.zeros((X.shape[0], Y.shape[0], N))
    left = F.matmul(X, A.constants.reshape(N, -1)).reshape(-1, N, N)
    products = F.reduce(np.tensordot(left, Y, axes=([1], [1])))  # (a, k, b)
    return np.transpose(products, (0, 2, 1))


def bracket_subspaces(A: SuperAlgebra, U: GradedSubspace, W: GradedSubspace) -> GradedSubspace:
    """Span of ``[u, w]`` over basis vectors of ``U`` and ``W``."""
    if U.total_dim == 0 or W.total_dim == 0 or A.N == 0:
        return zero_subspace(A)
    return span(A, bracket_table(A, U.basis, W.basis).reshape(-1, A.N))


def derived(A: SuperAlgebra) -> GradedSubspace:
    """The derived subalgebra ``[A, A]``."""
    if A.N == 0:
        return zero_subspace(A)
    return span(A, A.constants.reshape(-1, A.N))


def center(A: SuperAlgebra) -> GradedSubspace:
    """Kernel of the stacked adjoint matrices."""
    N = A.N
    if N == 0:
        return zero_subspace(A)
    stacked = np.transpose(A.constants, (1, 2, 0)).reshape(N * N, N)
    return span(A, kernel(A.field, stacked))


def centralizer_preimage(A: SuperAlgebra, S: GradedSubspace) -> GradedSubspace:
    """``{x : [x, A] in S}``."""
    F = A.field
    N = A.N
    if N == 0:
        return zero_subspace(A)
    ann = S.annihilator()
    if ann.shape[0] == 0:
        return whole(A)
    # rows indexed by (j, alpha): alpha . [x, b_j] = 0
    stacked = np.transpose(A.constants, (1, 2, 0))  # (j, k, i)
    cond = F.reduce(np.tensordot(ann, stacked, axes=([1], [1])))  # (alpha, j, i)
    return span(A, kernel(F, cond.reshape(-1, N)))


def lower_central_series(A: SuperAlgebra) -> list[GradedSubspace]:
    terms = [whole(A)]
    while True:
        nxt = bracket_subspaces(A, terms[-1], terms[0])
        if nxt == terms[-1]:
            return terms
        terms.append(nxt)


def upper_central_series(A: SuperAlgebra) -> list[GradedSubspace]:
    terms = [zero_subspace(A)]
    while True:
        nxt = centralizer_preimage(A, terms[-1])
        if nxt == terms[-1]:
            return terms
        terms.append(nxt)


def derived_series(A: SuperAlgebra) -> list[GradedSubspace]:
    terms = [whole(A)]
    while True:
        nxt = bracket_subspaces(A, terms[-1], terms[-1])
        if nxt == terms[-1]:
            return terms
        terms.append(nxt)


def is_graded_ideal(A: SuperAlgebra, U: GradedSubspace) -> bool:
    """``[U, A] <= U`` (``U`` is parity-split by construction)."""
    if tuple(U.ambient) != A.dim or U.field != A.field:
        raise ValueError("subspace does not live in this algebra")
    return U.contains(bracket_subspaces(A, U, whole(A)))


def is_subalgebra(A: SuperAlgebra, U: GradedSubspace) -> bool:
    return U.contains(bracket_subspaces(A, U, U))


# -- derived algebras -------------------------------------------------------


def _names_for(A: SuperAlgebra, rows: np.ndarray, prefix: str) -> list[str]:
    names = []
    for idx, row in enumerate(rows):
        nz = np.nonzero(row != 0)[0]
        if len(nz) == 1 and row[nz[0]] == 1:
            names.append(A.names[nz[0]])
        else:
            names.append(f"{prefix}{idx + 1}")
    return names


@dataclass(frozen=True)
class QuotientData:
    """A quotient algebra with its projection and the section fixed by the complement."""

    algebra: SuperAlgebra
    projection: GradedLinearMap
    section: GradedLinearMap
    ideal: GradedSubspace
    complement: GradedSubspace = dc_field(repr=False)


def quotient_data(A: SuperAlgebra, I: GradedSubspace, complement: GradedSubspace | None = None) -> QuotientData:
    """``A/I`` with basis the (given or pivot-greedy) complement of ``I``."""
    F = A.field
    if not is_graded_ideal(A, I):
        raise NotAnIdealError("subspace is not a graded ideal")
    if complement is None:
        complement = graded_complement(I, whole(A))
    elif complement.dim[0] + I.dim[0] != A.dim[0] or complement.dim[1] + I.dim[1] != A.dim[1] or (
        subspace_sum(I, complement) != whole(A)
    ):
        raise ContainmentError("given subspace is not a graded complement of the ideal")
    W = complement.basis
    qdim = complement.dim
    full = np.concatenate([W, I.basis], axis=0)
    proj = inverse(F, full.T)[: W.shape[0]] if A.N else F.zeros((0, 0))
    Nq = W.shape[0]
    if Nq:
        brackets = np.stack([np.stack([A.bracket(W[a], W[b]) for b in range(Nq)]) for a in range(Nq)])
        cq = F.reduce(np.tensordot(brackets, proj, axes=([2], [1])))
    else:
        cq = F.zeros((0, 0, 0))
    Q = SuperAlgebra(
        F,
        qdim,
        cq,
        names=_names_for(A, W, "q"),
        name=f"{A.name}/I" if A.name else "",
        flagged=_inherited_flag(A),
    )
    projection = GradedLinearMap(F, A.dim, qdim, proj)
    section = GradedLinearMap(F, qdim, A.dim, W.T if Nq else F.zeros((A.N, 0)))
    return QuotientData(Q, projection, section, I, complement)


def quotient(A: SuperAlgebra, I: GradedSubspace, complement: GradedSubspace | None = None):
    """``(A/I, projection)``."""
    data = quotient_data(A, I, complement)
    return data.algebra, data.projection


def subalgebra(A: SuperAlgebra, S: GradedSubspace) -> tuple[SuperAlgebra, GradedLinearMap]:
    """Structure on a closed graded subspace and its inclusion map."""
    F = A.field
    B = S.basis
    n = B.shape[0]
    if n:
        brackets = np.stack([np.stack([A.bracket(B[a], B[b]) for b in range(n)]) for a in range(n)])
        try:
            coords = coordinates(F, B, brackets.reshape(-1, A.N))
        except ContainmentError as exc:
            raise ValueError("subspace is not closed under the bracket") from exc
        cs = coords.reshape(n, n, n)
    else:
        cs = F.zeros((0, 0, 0))
    T = SuperAlgebra(F, S.dim, cs, names=_names_for(A, B, "t"), flagged=_inherited_flag(A))
    inclusion = GradedLinearMap(F, S.dim, A.dim, B.T if n else F.zeros((A.N, 0)))
    return T, inclusion


def direct_sum(A: SuperAlgebra, B: SuperAlgebra, name: str | None = None) -> SuperAlgebra:
    """Block-diagonal structure constants; cross brackets vanish."""
    if A.field != B.field:
        raise ValueError("direct sum of algebras over different fields")
    F = A.field
    dim = (A.dim[0] + B.dim[0], A.dim[1] + B.dim[1])
    N = sum(dim)
    ia, ib = direct_sum_layout(A.dim, B.dim)
    c = F.zeros((N, N, N))
    if A.N:
        c[np.ix_(ia, ia, ia)] = A.constants
    if B.N:
        c[np.ix_(ib, ib, ib)] = B.constants
    names = [None] * N
    for pos, nm in zip(ia, A.names):
        names[pos] = nm
    for pos, nm in zip(ib, B.names):
        names[pos] = nm
    if len(set(names)) != N:
        names = [f"{nm}_1" for nm in A.names] + [f"{nm}_2" for nm in B.names]
        ordered = [None] * N
        for pos, nm in zip(list(ia) + list(ib), names):
            ordered[pos] = nm
        names = ordered
    if name is None:
        name = f"{A.name}+{B.name}" if A.name and B.name else ""
    return SuperAlgebra(F, dim, c, names=names, name=name, flagged=_inherited_flag(A, B))


def direct_sum_injections(A: SuperAlgebra, B: SuperAlgebra) -> tuple[GradedLinearMap, GradedLinearMap]:
    F = A.field
    dim = (A.dim[0] + B.dim[0], A.dim[1] + B.dim[1])
    ia, ib = direct_sum_layout(A.dim, B.dim)
    ja = F.zeros((sum(dim), A.N))
    jb = F.zeros((sum(dim), B.N))
    for col, pos in enumerate(ia):
        ja[pos, col] = F.one
    for col, pos in enumerate(ib):
        jb[pos, col] = F.one
    return GradedLinearMap(F, A.dim, dim, ja), GradedLinearMap(F, B.dim, dim, jb)


# -- maps -------------------------------------------------------------------


def homomorphism_defect(f: GradedLinearMap, A: SuperAlgebra, B: SuperAlgebra) -> np.ndarray:
    """``f[b_i, b_j] - [f b_i, f b_j]`` for all basis pairs, shape (N, N, N_B)."""
    F = A.field
    if f.source != A.dim or f.target != B.dim:
        raise ValueError("map dimensions do not match the algebras")
    M = f.matrix
    NA, NB = A.N, B.N
    if NA == 0:
        return F.zeros((0, 0, NB))
    lhs = F.matmul(A.constants.reshape(NA * NA, NA), M.T).reshape(NA, NA, NB)
    if NB == 0:
        return lhs
    X = F.reduce(np.tensordot(M, B.constants, axes=([0], [0])))  # (i, b, m)
    Y = F.reduce(np.tensordot(X, M, axes=([1], [0])))  # (i, m, j)
    rhs = np.transpose(Y, (0, 2, 1))
    return F.reduce(lhs - rhs)


def is_homomorphism(f: GradedLinearMap, A: SuperAlgebra, B: SuperAlgebra) -> bool:
    if f.source != A.dim or f.target != B.dim:
        return False
    return not np.any(homomorphism_defect(f, A, B) != 0)


def is_isomorphism(f: GradedLinearMap, A: SuperAlgebra, B: SuperAlgebra) -> bool:
    return A.dim == B.dim and f.is_bijective() and is_homomorphism(f, A, B)


def change_of_basis(A: SuperAlgebra, P) -> tuple[SuperAlgebra, GradedLinearMap]:
    """Re-express ``A`` in the basis given by the columns of ``P``.

    Returns the new algebra and the isomorphism ``P`` from it to ``A``.
    """
    F = A.field
    P = F.array(P)
    pmap = GradedLinearMap(F, A.dim, A.dim, P)
    if not pmap.is_bijective():
        raise ValueError("change of basis must be invertible and even")
    N = A.N
    if N == 0:
        return A, pmap
    Pinv = inverse(F, P)
    X = F.reduce(np.tensordot(P, A.constants, axes=([0], [0])))  # (i, b, m)
    Y = F.reduce(np.tensordot(X, P, axes=([1], [0])))  # (i, m, j)
    brackets = np.transpose(Y, (0, 2, 1))  # (i, j, m)
    c = F.reduce(np.tensordot(brackets, Pinv, axes=([2], [1])))
    B = SuperAlgebra(F, A.dim, c, name=A.name, flagged=_inherited_flag(A))
    return B, pmap


def random_graded_automorphism(F: Field, dim: tuple[int, int], rng: np.random.Generator) -> np.ndarray:
    """A random invertible block-diagonal matrix."""
    m, n = dim
    M = F.zeros((m + n, m + n))
    for lo, size in ((0, m), (m, n)):
        while size:
            block = F.random_array(rng, (size, size))
            if rank(F, block) == size:
                M[lo:lo + size, lo:lo + size] = block
                break
    return M


def random_change_of_basis(A: SuperAlgebra, rng: np.random.Generator) -> tuple[SuperAlgebra, GradedLinearMap]:
    return change_of_basis(A, random_graded_automorphism(A.field, A.dim, rng))


# -- invariants -------------------------------------------------------------

# Enumerating every homogeneous element is only done below this many vectors.
_ENUMERATION_LIMIT = 4096


@dataclass(frozen=True)
class InvariantProfile:
    """Isomorphism invariants used to reject pairs before searching.

    ``ad_ranks`` counts, for each parity, the nonzero homogeneous elements by
    the rank of their adjoint map and ``square_zero`` counts odd ``x`` with
    ``[x, x] = 0``; both are only filled in over small prime fields.
    """

    dim: tuple[int, int]
    derived: tuple[int, int]
    center: tuple[int, int]
    central_quotient: tuple[int, int]
    parity_brackets: tuple[int, ...]
    lower_central: tuple[tuple[int, int], ...]
    upper_central: tuple[tuple[int, int], ...]
    derived_series: tuple[tuple[int, int], ...]
    ad_ranks: tuple | None = None
    square_zero: int | None = None

    def as_dict(self) -> dict:
        out = {
            "dim": list(self.dim),
            "center": list(self.center),
            "derived": list(self.derived),
            "central_quotient": list(self.central_quotient),
            "parity_brackets": list(self.parity_brackets),
            "lower_central": [list(t) for t in self.lower_central],
            "upper_central": [list(t) for t in self.upper_central],
            "derived_series": [list(t) for t in self.derived_series],
        }
        if self.ad_ranks is not None:
            out["ad_ranks"] = [list(x) for x in self.ad_ranks]
            out["square_zero"] = self.square_zero
        return out

    def first_difference(self, other: "InvariantProfile") -> str | None:
        for key in self.__dataclass_fields__:
            if getattr(self, key) != getattr(other, key):
                return key
        return None


def _enumerate_homogeneous(A: SuperAlgebra, parity: int):
    F = A.field
    m, n = A.dim
    lo, size = (0, m) if parity == 0 else (m, n)
    if size == 0:
        return
    p = F.p
    for code in range(1, p ** size):
        v = F.zeros(A.N)
        x = code
        for t in range(size):
            v[lo + t] = F.scalar(x % p)
            x //= p
        yield v


def invariant_profile(A: SuperAlgebra) -> InvariantProfile:
    F = A.field
    Z = center(A)
    D = derived(A)
    m, n = A.dim
    even = GradedSubspace.from_vectors(F, A.dim, F.eye(A.N)[:m])
    odd = GradedSubspace.from_vectors(F, A.dim, F.eye(A.N)[m:])
    parity_brackets = tuple(
        bracket_subspaces(A, U, W).total_dim for U, W in ((even, even), (even, odd), (odd, odd))
    )
    ad_ranks = None
    square_zero = None
    if F.p is not None and F.p ** max(m, n, 0) <= _ENUMERATION_LIMIT and A.N:
        counts = []
        for parity in (0, 1):
            hist: dict[int, int] = {}
            for v in _enumerate_homogeneous(A, parity):
                r = rank(F, A.ad(v))
                hist[r] = hist.get(r, 0) + 1
            counts.append(tuple(sorted(hist.items())))
        ad_ranks = tuple(counts)
        square_zero = sum(1 for v in _enumerate_homogeneous(A, 1) if not np.any(A.bracket(v, v) != 0))
    return InvariantProfile(
        dim=A.dim,
        center=Z.dim,
        derived=D.dim,
        central_quotient=(m - Z.dim[0], n - Z.dim[1]),
        parity_brackets=parity_brackets,
        lower_central=tuple(t.dim for t in lower_central_series(A)),
        upper_central=tuple(t.dim for t in upper_central_series(A)),
        derived_series=tuple(t.dim for t in derived_series(A)),
        ad_ranks=ad_ranks,
        square_zero=square_zero,
    )
