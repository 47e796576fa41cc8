"""Graded isomorphism search by backtracking over images of basis vectors.

The unknown isomorphism is a block-diagonal matrix.  Every assigned image
``f(b_i) = v`` turns the bracket conditions ``f[b_i, b_j] = [v, f(b_j)]`` into
linear equations on the remaining entries, which are solved exactly; the
next basis vector to assign is the one whose image is most constrained.
Over GF(p) all candidate images are enumerated, so a finished search that
found nothing proves non-isomorphism.  Over Q only small coefficient
combinations are tried, completed by the rational roots of ``[v, v] = f[b, b]``
along one direction when that image is already determined, and the search is
repeated with the derived-subalgebra vectors assigned first; an empty search
ends as :class:`Unknown`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactlin import GradedLinearMap, graded_complement, inverse, rank, row_basis, rref
from .superalg import (
    SuperAlgebra,
    center,
    change_of_basis,
    derived,
    derived_series,
    invariant_profile,
    is_isomorphism,
    lower_central_series,
    require_valid,
    upper_central_series,
    whole,
)

DEFAULT_BUDGET = 10**7

# Over Q a free direction is tried with these coefficients only.
_RATIONAL_COEFFICIENTS = (0, 1, -1, 2, -2)
_RATIONAL_CANDIDATE_CAP = 64


@dataclass(frozen=True)
class Witness:
    value: object
    nodes: int = 0


@dataclass(frozen=True)
class NotIsomorphic:
    reason: str
    nodes: int = 0


@dataclass(frozen=True)
class Unknown:
    reason: str
    nodes: int = 0


class _BudgetExhausted(Exception):
    pass


_profile_cache: dict[int, tuple[SuperAlgebra, object]] = {}


def cached_profile(A: SuperAlgebra):
    hit = _profile_cache.get(id(A))
    if hit is not None and hit[0] is A:
        return hit[1]
    prof = invariant_profile(A)
    if len(_profile_cache) > 4096:
        _profile_cache.clear()
    _profile_cache[id(A)] = (A, prof)
    return prof


def characteristic_subspaces(A: SuperAlgebra):
    """Subspaces every isomorphism must carry onto their counterparts."""
    subs = [derived(A), center(A)]
    subs += lower_central_series(A)[1:]
    subs += upper_central_series(A)[1:]
    subs += derived_series(A)[1:]
    return subs


class _Search:
    def __init__(
        self,
        A: SuperAlgebra,
        B: SuperAlgebra,
        generators: Sequence[bool],
        constraints,
        budget: int,
        generators_first: bool = True,
    ):
        self.A, self.B = A, B
        self.generators_first = generators_first
        self.F = F = A.field
        self.N = N = A.N
        self.par = A.parity
        self.generators = list(generators)
        self.budget = budget
        self.nodes = 0
        self.truncated = False
        var = -np.ones((N, N), dtype=np.int64)
        count = 0
        for t in range(N):
            for c in range(N):
                if self.par[t] == self.par[c]:
                    var[t, c] = count
                    count += 1
        self.var = var
        self.U = count
        self.pairs = [(t, c) for t in range(N) for c in range(N) if var[t, c] >= 0]
        self.ad_rank_A = [rank(F, A.ad(A.basis_vector(i))) for i in range(N)]
        self.square_zero_A = [not np.any(A.constants[i, i] != 0) for i in range(N)]
        base = [self._subspace_equations(SA, SB) for SA, SB in zip(characteristic_subspaces(A), characteristic_subspaces(B))]
        base += [self._constraint_equations(left, right) for left, right in constraints]
        base = [e for e in base if e.shape[0]]
        self.base = np.concatenate(base, axis=0) if base else F.zeros((0, self.U + 1))

    # -- equation builders ------------------------------------------------

    def _subspace_equations(self, SA, SB):
        F = self.F
        ann = SB.annihilator()
        S = SA.basis
        rows = []
        for s in S:
            for alpha in ann:
                eq = F.zeros(self.U + 1)
                for t, c in self.pairs:
                    if s[c] != 0 and alpha[t] != 0:
                        eq[self.var[t, c]] = F.reduce(eq[self.var[t, c]] + s[c] * alpha[t])
                rows.append(eq)
        return np.stack(rows) if rows else F.zeros((0, self.U + 1))

    def _constraint_equations(self, left, right):
        # left @ f == right
        F = self.F
        rows = []
        for a in range(left.shape[0]):
            for c in range(self.N):
                eq = F.zeros(self.U + 1)
                for t in range(self.N):
                    if self.var[t, c] >= 0 and left[a, t] != 0:
                        eq[self.var[t, c]] = left[a, t]
                eq[self.U] = right[a, c]
                rows.append(eq)
        return np.stack(rows) if rows else F.zeros((0, self.U + 1))

    def _assignment_equations(self, i: int, v: np.ndarray) -> np.ndarray:
        """Linear consequences of ``f(b_i) = v``."""
        F = self.F
        N, U = self.N, self.U
        c = self.A.constants
        adv = self.B.ad(v)  # adv[t, r] = coefficient t of [v, b_r]
        E = F.zeros((N, N, U + 1))  # rows (j, t)
        for t, k in self.pairs:
            col = c[i, :, k]
            if np.any(col != 0):
                E[:, t, self.var[t, k]] = F.reduce(E[:, t, self.var[t, k]] + col)
        for r, j in self.pairs:
            col = adv[:, r]
            if np.any(col != 0):
                E[j, :, self.var[r, j]] = F.reduce(E[j, :, self.var[r, j]] - col)
        fix = F.zeros((N, U + 1))
        for t in range(N):
            if self.var[t, i] >= 0:
                fix[t, self.var[t, i]] = F.one
                fix[t, U] = v[t]
        return np.concatenate([E.reshape(N * N, U + 1), fix[self.var[:, i] >= 0]], axis=0)

    # -- solution space ---------------------------------------------------

    def _reduce(self, system: np.ndarray):
        R, piv = rref(self.F, system)
        if piv and piv[-1] == self.U:
            return None
        return R[: len(piv)], piv

    def _projection(self, R, piv, i):
        """Affine set ``c0 + span(dirs)`` of possible images of ``b_i``."""
        F = self.F
        U = self.U
        pivrow = {p: r for r, p in enumerate(piv)}
        free = [u for u in range(U) if u not in pivrow]
        rows = [t for t in range(self.N) if self.var[t, i] >= 0]
        c0 = F.zeros(self.N)
        D = F.zeros((self.N, len(free)))
        for t in rows:
            u = self.var[t, i]
            if u in pivrow:
                r = pivrow[u]
                c0[t] = R[r, U]
                if free:
                    D[t] = F.neg(R[r, free])
            else:
                D[t, free.index(u)] = F.one
        dirs = row_basis(F, D.T, self.N) if free else F.zeros((0, self.N))
        return c0, dirs

    def _determined_image(self, R, piv, x):
        """``f(x)`` if the current equations pin it down, else ``None``."""
        F = self.F
        U = self.U
        pivrow = {p: r for r, p in enumerate(piv)}
        out = F.zeros(self.N)
        for k in np.nonzero(x != 0)[0]:
            for t in range(self.N):
                u = self.var[t, k]
                if u < 0:
                    continue
                r = pivrow.get(u)
                if r is None or np.any(np.delete(R[r, :U], u) != 0):
                    return None
                out[t] += x[k] * R[r, U]
        return out

    def _square_roots(self, u, d, target):
        """Rational ``t`` with ``[u + t d, u + t d] = target``."""
        B = self.B
        a = B.bracket(d, d)
        b = B.bracket(u, d) + B.bracket(d, u)
        c = B.bracket(u, u) - target
        for a_, b_, c_ in zip(a, b, c):
            if a_ != 0:
                disc = b_ * b_ - 4 * a_ * c_
                if disc < 0:
                    return []
                disc = Fraction(disc)
                rn, rd = math.isqrt(disc.numerator), math.isqrt(disc.denominator)
                if rn * rn != disc.numerator or rd * rd != disc.denominator:
                    return []
                root = Fraction(rn, rd)
                roots = sorted({(-b_ + root) / (2 * a_), (-b_ - root) / (2 * a_)})
                break
            if b_ != 0:
                roots = [Fraction(-c_) / b_]
                break
            if c_ != 0:
                return []
        else:
            return []
        return [t for t in roots if not np.any(B.bracket(u + t * d, u + t * d) - target != 0)]

    def _candidates(self, i, R, piv, c0, dirs):
        F = self.F
        k = dirs.shape[0]
        if k == 0:
            yield c0
            return
        if F.p is not None:
            for s in itertools.product(range(F.p), repeat=k):
                yield F.reduce(c0 + F.array(list(s)) @ dirs)
            return
        self.truncated = True
        combos = sorted(
            itertools.product(_RATIONAL_COEFFICIENTS, repeat=k),
            key=lambda s: (sum(abs(x) for x in s), [_RATIONAL_COEFFICIENTS.index(x) for x in s]),
        )
        seen = set()
        target = None
        if self.par[i] == 1:
            target = self._determined_image(R, piv, self.A.constants[i, i])
        if target is not None:
            heads = sorted(
                itertools.product(_RATIONAL_COEFFICIENTS, repeat=k - 1),
                key=lambda s: (sum(abs(x) for x in s), [_RATIONAL_COEFFICIENTS.index(x) for x in s]),
            )
            for h in heads[:_RATIONAL_CANDIDATE_CAP]:
                u = c0 + (F.array(list(h)) @ dirs[:-1] if k > 1 else F.zeros(self.N))
                for t in self._square_roots(u, dirs[-1], target):
                    v = u + t * dirs[-1]
                    key = tuple(v)
                    if key not in seen:
                        seen.add(key)
                        yield v
        for s in combos[:_RATIONAL_CANDIDATE_CAP]:
            v = c0 + F.array(list(s)) @ dirs
            key = tuple(v)
            if key not in seen:
                seen.add(key)
                yield v

    # -- search -----------------------------------------------------------

    def run(self):
        F = self.F
        start = self._reduce(self.base) if self.base.shape[0] else (F.zeros((0, self.U + 1)), [])
        if start is None:
            return None
        return self._dfs(start[0], start[1], {})

    def _dfs(self, R, piv, assigned: dict[int, np.ndarray]):
        F = self.F
        N = self.N
        unassigned = [i for i in range(N) if i not in assigned]
        if not unassigned:
            M = np.stack([assigned[i] for i in range(N)], axis=1) if N else F.zeros((0, 0))
            f = GradedLinearMap(F, self.A.dim, self.B.dim, M)
            return f if is_isomorphism(f, self.A, self.B) else None
        best = None
        for i in unassigned:
            c0, dirs = self._projection(R, piv, i)
            k = dirs.shape[0]
            gen = 0 if self.generators[i] == self.generators_first else 1
            key = (0 if k == 0 else 1, gen, k, i)
            if best is None or key < best[0]:
                best = (key, i, c0, dirs)
        _, i, c0, dirs = best
        same = [assigned[j] for j in sorted(assigned) if self.par[j] == self.par[i]]
        base_rank = len(same)
        for v in self._candidates(i, R, piv, c0, dirs):
            if not np.any(v != 0):
                continue
            if rank(F, np.stack(same + [v])) != base_rank + 1:
                continue
            if rank(F, self.B.ad(v)) != self.ad_rank_A[i]:
                continue
            if self.par[i] == 1 and (not np.any(self.B.bracket(v, v) != 0)) != self.square_zero_A[i]:
                continue
            self.nodes += 1
            if self.nodes > self.budget:
                raise _BudgetExhausted
            reduced = self._reduce(np.concatenate([R, self._assignment_equations(i, v)], axis=0))
            if reduced is None:
                continue
            found = self._dfs(reduced[0], reduced[1], {**assigned, i: v})
            if found is not None:
                return found
        return None


def adapted_basis(A: SuperAlgebra) -> tuple[np.ndarray, list[bool]]:
    """Columns: a complement of the derived subalgebra, then its basis, per parity.

    The flags mark the complement vectors, which generate modulo ``A'``.
    """
    F = A.field
    D = derived(A)
    W = graded_complement(D, whole(A))
    cols = [*W.even, *D.even, *W.odd, *D.odd]
    flags = [True] * W.dim[0] + [False] * D.dim[0] + [True] * W.dim[1] + [False] * D.dim[1]
    P = np.stack(cols, axis=1) if cols else F.zeros((0, 0))
    return P, flags


def find_isomorphism(
    A: SuperAlgebra,
    B: SuperAlgebra,
    budget: int = DEFAULT_BUDGET,
    *,
    force: bool = False,
    constraints: Sequence[tuple[np.ndarray, np.ndarray]] = (),
):
    """Decide ``A ~= B``; returns :class:`Witness`, :class:`NotIsomorphic` or :class:`Unknown`.

    ``constraints`` are extra linear conditions ``left @ f == right`` on the
    matrix of the isomorphism; with constraints present the profile
    prefilter still applies but a refutation only means no *constrained*
    isomorphism exists.
    """
    A = require_valid(A, force)
    B = require_valid(B, force)
    if A.field != B.field:
        raise ValueError("algebras live over different fields")
    F = A.field
    if A.dim != B.dim:
        return NotIsomorphic("graded dimensions differ")
    key = cached_profile(A).first_difference(cached_profile(B))
    if key is not None:
        return NotIsomorphic(f"invariant '{key}' differs")
    P, flags = adapted_basis(A)
    A2, _ = change_of_basis(A, P)
    moved = [(F.array(left), F.matmul(F.array(right), P)) for left, right in constraints]
    nodes = 0
    f2 = None
    for generators_first in (True, False) if F.is_rational else (True,):
        search = _Search(A2, B, flags, moved, budget - nodes, generators_first)
        try:
            f2 = search.run()
        except _BudgetExhausted:
            return Unknown("node budget exhausted", nodes + search.nodes)
        nodes += search.nodes
        if f2 is not None or not search.truncated:
            break
    if f2 is None:
        if search.truncated:
            return Unknown("rational search space was truncated", nodes)
        return NotIsomorphic("exhaustive search found no isomorphism", nodes)
    M = F.matmul(f2.matrix, inverse(F, P)) if A.N else f2.matrix
    f = GradedLinearMap(F, A.dim, B.dim, M)
    if not is_isomorphism(f, A, B):
        raise AssertionError("search returned a map that is not an isomorphism")
    for left, right in constraints:
        if np.any(F.matmul(F.array(left), f.matrix) != F.array(right)):
            raise AssertionError("search returned a map violating the constraints")
    return Witness(f, nodes)
