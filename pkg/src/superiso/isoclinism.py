"""Isoclinism witnesses, stem decomposition and the stem-route decisions.

A witness ``(phi, theta)`` from ``L`` to ``K`` is stored in fixed
coordinates: ``phi`` acts between the central quotients built on the
default (pivot-greedy) complements of the centers, and ``theta`` acts
between the derived subalgebras in their canonical row bases.  Both are
always re-verified, never trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exactlin import (
    ContainmentError,
    GradedLinearMap,
    GradedSubspace,
    block_sum_map,
    coordinates,
    direct_sum_layout,
    graded_complement,
    inverse,
    subspace_intersect,
    subspace_sum,
)
from .search import DEFAULT_BUDGET, NotIsomorphic, Unknown, Witness, find_isomorphism
from .serialize import DocumentError, algebra_from_json, algebra_to_json, matrix_from_json, matrix_to_json
from .superalg import (
    NotAnIdealError,
    QuotientData,
    SuperAlgebra,
    bracket_table,
    center,
    derived,
    direct_sum,
    direct_sum_injections,
    is_graded_ideal,
    is_homomorphism,
    is_isomorphism,
    quotient_data,
    require_valid,
    subalgebra,
    whole,
    zero_subspace,
)


@dataclass(frozen=True)
class NotIsoclinic:
    reason: str
    nodes: int = 0


# -- canonical coordinates --------------------------------------------------


@dataclass(frozen=True)
class Canonical:
    """Center, derived subalgebra and central quotient in fixed bases."""

    algebra: SuperAlgebra
    center: GradedSubspace
    derived: GradedSubspace
    quotient: QuotientData
    derived_algebra: SuperAlgebra


def canonical(L: SuperAlgebra) -> Canonical:
    Z = center(L)
    D = derived(L)
    T, _ = subalgebra(L, D)
    return Canonical(L, Z, D, quotient_data(L, Z), T)


def _derived_coordinates(c: Canonical, vectors) -> np.ndarray:
    """Coordinates of vectors of ``L'`` in its canonical basis (one row each)."""
    F = c.algebra.field
    V = F.array(vectors).reshape(-1, c.algebra.N) if c.algebra.N else F.zeros((len(vectors), 0))
    if c.derived.total_dim == 0:
        if np.any(V != 0):
            raise ContainmentError("vector outside the derived subalgebra")
        return F.zeros((V.shape[0], 0))
    return coordinates(F, c.derived.basis, V)


# -- witnesses --------------------------------------------------------------


@dataclass(frozen=True)
class IsoclinismWitness:
    source: SuperAlgebra
    target: SuperAlgebra
    phi: GradedLinearMap
    theta: GradedLinearMap

    def to_json(self) -> dict:
        F = self.source.field
        return {
            "source": algebra_to_json(self.source),
            "target": algebra_to_json(self.target),
            "phi": matrix_to_json(F, self.phi.matrix),
            "theta": matrix_to_json(F, self.theta.matrix),
        }

    @classmethod
    def from_json(cls, doc) -> "IsoclinismWitness":
        """Parse and verify; a document that does not verify is rejected."""
        try:
            L = algebra_from_json(doc["source"])
            K = algebra_from_json(doc["target"])
        except (KeyError, TypeError) as exc:
            raise DocumentError(f"bad witness document: {exc}") from exc
        if L.field != K.field:
            raise DocumentError("witness algebras live over different fields")
        cl, ck = canonical(L), canonical(K)
        qd_l, qd_k = cl.quotient.algebra.dim, ck.quotient.algebra.dim
        F = L.field
        try:
            phi = matrix_from_json(F, doc["phi"], (sum(qd_k), sum(qd_l)))
            theta = matrix_from_json(F, doc["theta"], (ck.derived.total_dim, cl.derived.total_dim))
            w = cls(
                L,
                K,
                GradedLinearMap(F, qd_l, qd_k, phi),
                GradedLinearMap(F, cl.derived.dim, ck.derived.dim, theta),
            )
        except KeyError as exc:
            raise DocumentError(f"bad witness document: missing {exc}") from exc
        except ValueError as exc:
            raise DocumentError(str(exc)) from exc
        if not check_witness(w):
            raise DocumentError("witness does not verify")
        return w


def witness_failures(w: IsoclinismWitness) -> list[str]:
    """Reasons ``w`` is not an isoclinism; empty when it is one."""
    cl, ck = canonical(w.source), canonical(w.target)
    Ql, Qk = cl.quotient.algebra, ck.quotient.algebra
    if w.phi.source != Ql.dim or w.phi.target != Qk.dim:
        raise ValueError("phi does not act between the central quotients")
    if w.theta.source != cl.derived.dim or w.theta.target != ck.derived.dim:
        raise ValueError("theta does not act between the derived subalgebras")
    F = w.source.field
    out = []
    if not w.phi.is_bijective():
        out.append("phi is not bijective")
    elif not is_homomorphism(w.phi, Ql, Qk):
        out.append("phi is not a homomorphism")
    if not w.theta.is_bijective():
        out.append("theta is not bijective")
    elif not is_homomorphism(w.theta, cl.derived_algebra, ck.derived_algebra):
        out.append("theta is not a homomorphism")
    if out:
        return out
    nq = Ql.N
    if nq == 0:
        return out
    Sl = cl.quotient.section.matrix.T  # rows: lifts of the quotient basis
    Sk = F.matmul(ck.quotient.section.matrix, w.phi.matrix).T  # lifts of phi(basis)
    left = bracket_table(w.source, Sl, Sl).reshape(-1, w.source.N)
    coords = _derived_coordinates(cl, left)
    if ck.derived.total_dim:
        lhs = F.matmul(F.matmul(coords, w.theta.matrix.T), ck.derived.basis)
    else:
        lhs = F.zeros((coords.shape[0], w.target.N))
    rhs = bracket_table(w.target, Sk, Sk).reshape(-1, w.target.N)
    bad = np.nonzero(np.any(F.reduce(lhs - rhs) != 0, axis=1))[0]
    if bad.size:
        a, b = divmod(int(bad[0]), nq)
        out.append(f"square fails on quotient basis pair ({a}, {b})")
    return out


def check_witness(w: IsoclinismWitness) -> bool:
    return not witness_failures(w)


def lemma_1_10_check(w: IsoclinismWitness) -> bool:
    """``phi(x + Z) = theta(x) + Z`` and ``theta[x, y] = [theta x, z]``.

    Checked for basis ``x`` of ``L'`` and basis ``y`` of ``L`` with
    ``z + Z(K) = phi(y + Z(L))``.
    """
    L, K = w.source, w.target
    F = L.field
    cl, ck = canonical(L), canonical(K)
    Dl = cl.derived.basis
    if Dl.shape[0] == 0:
        return True
    theta_x = F.matmul(w.theta.matrix.T, ck.derived.basis)  # rows theta(x)
    # identity (1)
    left = F.matmul(F.matmul(cl.quotient.projection.matrix, Dl.T).T, w.phi.matrix.T)
    right = F.matmul(ck.quotient.projection.matrix, theta_x.T).T
    if np.any(F.reduce(left - right) != 0):
        return False
    # identity (2)
    Y = F.eye(L.N)
    Zs = F.matmul(F.matmul(ck.quotient.section.matrix, w.phi.matrix), cl.quotient.projection.matrix).T
    brackets = bracket_table(L, Dl, Y).reshape(-1, L.N)
    lhs = F.matmul(F.matmul(_derived_coordinates(cl, brackets), w.theta.matrix.T), ck.derived.basis)
    rhs = bracket_table(K, theta_x, Zs).reshape(-1, K.N)
    return not np.any(F.reduce(lhs - rhs) != 0)


def identity_witness(L: SuperAlgebra) -> IsoclinismWitness:
    c = canonical(L)
    F = L.field
    return IsoclinismWitness(
        L,
        L,
        GradedLinearMap.identity(F, c.quotient.algebra.dim),
        GradedLinearMap.identity(F, c.derived.dim),
    )


def invert(w: IsoclinismWitness) -> IsoclinismWitness:
    return IsoclinismWitness(w.target, w.source, w.phi.inverse(), w.theta.inverse())


def compose(w2: IsoclinismWitness, w1: IsoclinismWitness) -> IsoclinismWitness:
    """``w2 o w1``: first ``w1`` from ``L`` to ``K``, then ``w2`` from ``K`` to ``M``."""
    if w1.target != w2.source:
        raise ValueError("witnesses do not compose")
    return IsoclinismWitness(w1.source, w2.target, w2.phi @ w1.phi, w2.theta @ w1.theta)


def witness_from_homomorphism(L: SuperAlgebra, K: SuperAlgebra, h: GradedLinearMap) -> IsoclinismWitness:
    """The pair induced by a homomorphism with ``h(Z(L)) <= Z(K)``.

    The result is verified; a homomorphism that does not induce
    isomorphisms raises ``ValueError``.
    """
    F = L.field
    if not is_homomorphism(h, L, K):
        raise ValueError("map is not a homomorphism")
    cl, ck = canonical(L), canonical(K)
    if cl.center.total_dim and not ck.center.contains(GradedSubspace.from_vectors(F, K.dim, F.matmul(h.matrix, cl.center.basis.T).T)):
        raise ValueError("map does not send the center into the center")
    phi = F.matmul(F.matmul(ck.quotient.projection.matrix, h.matrix), cl.quotient.section.matrix)
    images = F.matmul(h.matrix, cl.derived.basis.T).T if cl.derived.total_dim else F.zeros((0, K.N))
    theta = _derived_coordinates(ck, images).T if images.shape[0] else F.zeros((ck.derived.total_dim, 0))
    w = IsoclinismWitness(
        L,
        K,
        GradedLinearMap(F, cl.quotient.algebra.dim, ck.quotient.algebra.dim, phi),
        GradedLinearMap(F, cl.derived.dim, ck.derived.dim, theta),
    )
    failures = witness_failures(w)
    if failures:
        raise ValueError("induced pair is not an isoclinism: " + "; ".join(failures))
    return w


def witness_abelian_sum(L: SuperAlgebra, A: SuperAlgebra) -> IsoclinismWitness:
    """Witness from ``L`` to ``L (+) A`` for abelian ``A``."""
    if not A.is_abelian:
        raise ValueError("second summand must be abelian")
    S = direct_sum(L, A)
    ja, _ = direct_sum_injections(L, A)
    return witness_from_homomorphism(L, S, ja)


@dataclass(frozen=True)
class QuotientWitness:
    """Witness from ``L/(I n L')`` to ``L/I`` with both quotients at hand."""

    witness: IsoclinismWitness
    small_ideal: GradedSubspace  # I n L'


def witness_quotient(L: SuperAlgebra, I: GradedSubspace) -> QuotientWitness:
    """Witness from the natural surjection ``L/(I n L') -> L/I``.

    When ``I n L' = 0`` the source is ``L`` itself, giving ``L ~ L/I``.
    """
    if not is_graded_ideal(L, I):
        raise NotAnIdealError("subspace is not a graded ideal")
    J = subspace_intersect(I, derived(L))
    big = quotient_data(L, I)
    if J.total_dim == 0:
        source, h = L, big.projection
    else:
        small = quotient_data(L, J)
        source = small.algebra
        h = big.projection @ small.section
    return QuotientWitness(witness_from_homomorphism(source, big.algebra, h), J)


# -- stems ------------------------------------------------------------------


def is_stem(L: SuperAlgebra) -> bool:
    return derived(L).contains(center(L))


@dataclass(frozen=True)
class StemDecomposition:
    """``iso: L -> T (+) A`` with ``T`` stem and ``A`` abelian."""

    source: SuperAlgebra
    stem_part: SuperAlgebra
    abelian_part: SuperAlgebra
    iso: GradedLinearMap
    stem_subspace: GradedSubspace
    abelian_subspace: GradedSubspace

    @property
    def total(self) -> SuperAlgebra:
        return direct_sum(self.stem_part, self.abelian_part)

    def stem_projection(self) -> GradedLinearMap:
        """The homomorphism ``L -> T`` killing the abelian part."""
        F = self.source.field
        ia, _ = direct_sum_layout(self.stem_part.dim, self.abelian_part.dim)
        return GradedLinearMap(F, self.source.dim, self.stem_part.dim, self.iso.matrix[ia])

    def stem_inclusion(self) -> GradedLinearMap:
        F = self.source.field
        B = self.stem_subspace.basis
        return GradedLinearMap(F, self.stem_part.dim, self.source.dim, B.T if B.shape[0] else F.zeros((self.source.N, 0)))


def stem_decompose(L: SuperAlgebra, *, force: bool = False) -> StemDecomposition:
    L = require_valid(L, force)
    F = L.field
    Z = center(L)
    D = derived(L)
    M = graded_complement(subspace_intersect(Z, D), Z)
    K = subspace_sum(D, graded_complement(subspace_sum(D, M), whole(L)))
    if not is_graded_ideal(L, K):
        raise AssertionError("stem complement is not an ideal")
    if K.dim[0] + M.dim[0] != L.dim[0] or K.dim[1] + M.dim[1] != L.dim[1]:
        raise AssertionError("stem and abelian parts do not span")
    T, _ = subalgebra(L, K)
    T = T.with_name(f"stem({L.name})" if L.name else "")
    A = SuperAlgebra.abelian(F, *M.dim, name=f"abelian-{M.dim[0]}-{M.dim[1]}")
    ia, ib = direct_sum_layout(T.dim, A.dim)
    P = F.zeros((L.N, L.N))
    if K.total_dim:
        P[:, ia] = K.basis.T
    if M.total_dim:
        P[:, ib] = M.basis.T
    iso = GradedLinearMap(F, L.dim, L.dim, inverse(F, P) if L.N else P)
    out = StemDecomposition(L, T, A, iso, K, M)
    if not is_isomorphism(iso, L, out.total):
        raise AssertionError("stem decomposition map is not an isomorphism")
    if not is_stem(T):
        raise AssertionError("stem part is not stem")
    return out


# -- decisions --------------------------------------------------------------


def _quick_refutation(L: SuperAlgebra, K: SuperAlgebra) -> str | None:
    cl, ck = canonical(L), canonical(K)
    if cl.quotient.algebra.dim != ck.quotient.algebra.dim:
        return "central quotients have different graded dimensions"
    if cl.derived.dim != ck.derived.dim:
        return "derived subalgebras have different graded dimensions"
    return None


def _stem_route(L: SuperAlgebra, K: SuperAlgebra, budget: int):
    dl, dk = stem_decompose(L, force=True), stem_decompose(K, force=True)
    return dl, dk, find_isomorphism(dl.stem_part, dk.stem_part, budget, force=True)


def find_isoclinism(L: SuperAlgebra, K: SuperAlgebra, budget: int = DEFAULT_BUDGET, *, force: bool = False):
    """Decide ``L ~ K`` by comparing stem parts; tri-state result.

    Stem algebras are isoclinic exactly when isomorphic, so an isomorphism
    ``g`` of the stem parts yields the homomorphism
    ``L -> T -> T_K -> K`` whose induced pair is the witness.
    """
    L = require_valid(L, force)
    K = require_valid(K, force)
    if L.field != K.field:
        raise ValueError("algebras live over different fields")
    reason = _quick_refutation(L, K)
    if reason is not None:
        return NotIsoclinic(reason)
    dl, dk, res = _stem_route(L, K, budget)
    if isinstance(res, NotIsomorphic):
        return NotIsoclinic(f"stem parts are not isomorphic: {res.reason}", res.nodes)
    if isinstance(res, Unknown):
        return res
    h = dk.stem_inclusion() @ res.value @ dl.stem_projection()
    return Witness(witness_from_homomorphism(L, K, h), res.nodes)


def same_dim_isomorphism(L: SuperAlgebra, K: SuperAlgebra, budget: int = DEFAULT_BUDGET, *, force: bool = False):
    """Decide ``L ~= K`` for algebras of equal graded dimension via isoclinism."""
    L = require_valid(L, force)
    K = require_valid(K, force)
    if L.dim != K.dim:
        raise ValueError("algebras must have equal graded dimensions")
    if L.field != K.field:
        raise ValueError("algebras live over different fields")
    reason = _quick_refutation(L, K)
    if reason is not None:
        return NotIsomorphic(f"not isoclinic: {reason}")
    dl, dk, res = _stem_route(L, K, budget)
    if isinstance(res, NotIsomorphic):
        return NotIsomorphic(f"not isoclinic: stem parts are not isomorphic: {res.reason}", res.nodes)
    if isinstance(res, Unknown):
        return res
    if dl.abelian_part.dim != dk.abelian_part.dim:
        raise AssertionError("isoclinic algebras of equal dimension have unequal abelian parts")
    F = L.field
    middle = block_sum_map(res.value, GradedLinearMap.identity(F, dl.abelian_part.dim))
    h = dk.iso.inverse() @ middle @ dl.iso
    if not is_isomorphism(h, L, K):
        raise AssertionError("assembled map is not an isomorphism")
    return Witness(h, res.nodes)


def graded_ideals_of_interest(L: SuperAlgebra) -> list[GradedSubspace]:
    """``0``, ``Z(L)``, ``L'`` and ``L`` without repeats."""
    out: list[GradedSubspace] = []
    for S in (zero_subspace(L), center(L), derived(L), whole(L)):
        if all(S != T for T in out):
            out.append(S)
    return out


def chain(witnesses: Sequence[IsoclinismWitness]) -> IsoclinismWitness:
    """Compose witnesses given in the order they are applied."""
    w = witnesses[0]
    for nxt in witnesses[1:]:
        w = compose(nxt, w)
    return w


__all__ = [
    "Canonical",
    "IsoclinismWitness",
    "NotIsoclinic",
    "QuotientWitness",
    "StemDecomposition",
    "canonical",
    "chain",
    "check_witness",
    "compose",
    "find_isoclinism",
    "graded_ideals_of_interest",
    "identity_witness",
    "invert",
    "is_stem",
    "lemma_1_10_check",
    "same_dim_isomorphism",
    "stem_decompose",
    "witness_abelian_sum",
    "witness_failures",
    "witness_from_homomorphism",
    "witness_quotient",
]
