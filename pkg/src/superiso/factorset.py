"""Factor sets: rebuilding an algebra from its center, central quotient and a cocycle.

A factor set is stored against explicit bases: the quotient algebra's basis
and an ordered basis of the center.  ``values[a, b]`` holds the center
coordinates of ``r(a, b)`` for quotient basis vectors ``a, b``.  The
reconstructed algebra ``(Z, L/Z, r)`` uses the direct-sum layout with the
center first: ``[Z_even, Q_even, Z_odd, Q_odd]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exactlin import (
    GradedLinearMap,
    GradedSubspace,
    coordinates,
    direct_sum_layout,
    graded_complement,
    inverse,
    solve,
)
from .isoclinism import (
    IsoclinismWitness,
    canonical,
    check_witness,
    chain,
    invert,
    is_stem,
    witness_from_homomorphism,
)
from .serialize import DocumentError, algebra_from_json, algebra_to_json
from .superalg import (
    SuperAlgebra,
    bracket_table,
    center,
    derived,
    is_homomorphism,
    is_isomorphism,
    quotient_data,
    require_valid,
)


class InvalidFactorSetError(ValueError):
    pass


@dataclass(frozen=True)
class FactorSet:
    quotient: SuperAlgebra
    center_space: SuperAlgebra
    values: np.ndarray  # (nq, nq, nz)

    def __post_init__(self):
        F = self.quotient.field
        if self.center_space.field != F:
            raise ValueError("quotient and center live over different fields")
        if not self.center_space.is_abelian:
            raise ValueError("center space must be abelian")
        nq, nz = self.quotient.N, self.center_space.N
        vals = F.array(self.values) if nq and nz else F.zeros((nq, nq, nz))
        if vals.shape != (nq, nq, nz):
            raise ValueError(f"values must have shape {(nq, nq, nz)}, got {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def field(self):
        return self.quotient.field

    def __eq__(self, other):
        if not isinstance(other, FactorSet):
            return NotImplemented
        return (
            self.quotient == other.quotient
            and self.center_space.dim == other.center_space.dim
            and bool(np.all(self.values == other.values))
        )

    def __hash__(self):
        return hash((self.quotient, self.center_space.dim))

    def to_json(self) -> dict:
        F = self.field
        entries = []
        nq = self.quotient.N
        for i in range(nq):
            for j in range(nq):
                vec = self.values[i, j]
                coeffs = {str(k): F.format(vec[k]) for k in range(len(vec)) if vec[k] != 0}
                if coeffs:
                    entries.append({"i": i, "j": j, "coeffs": coeffs})
        return {
            "quotient": algebra_to_json(self.quotient),
            "center": algebra_to_json(self.center_space),
            "values": entries,
        }

    @classmethod
    def from_json(cls, doc) -> "FactorSet":
        try:
            Q = algebra_from_json(doc["quotient"])
            Z = algebra_from_json(doc["center"])
            entries = doc["values"]
        except (KeyError, TypeError) as exc:
            raise DocumentError(f"bad factor set document: {exc}") from exc
        F = Q.field
        vals = F.zeros((Q.N, Q.N, Z.N))
        for e in entries:
            try:
                i, j, coeffs = e["i"], e["j"], e["coeffs"]
                for k, c in coeffs.items():
                    vals[i, j, int(k)] = F.scalar(c)
            except (KeyError, TypeError, IndexError, ValueError) as exc:
                raise DocumentError(f"bad factor set entry {e!r}") from exc
        try:
            return cls(Q, Z, vals)
        except ValueError as exc:
            raise DocumentError(str(exc)) from exc


@dataclass(frozen=True)
class FactorSetReport:
    """Offending tuples with residuals for the parity, skew and cocycle axioms."""

    parity: tuple = ()
    skew: tuple = ()
    cocycle: tuple = ()

    @property
    def valid(self) -> bool:
        return not (self.parity or self.skew or self.cocycle)


def _signs(par: np.ndarray) -> np.ndarray:
    return np.where(np.outer(par, par) % 2 == 1, -1, 1)


def cocycle_residual(quotient: SuperAlgebra, values: np.ndarray) -> np.ndarray:
    """``r([a,b],c) - r(a,[b,c]) + (-1)^{|a||b|} r(b,[a,c])`` on basis triples."""
    F = quotient.field
    c = quotient.constants
    nq = quotient.N
    nz = values.shape[2]
    if nq == 0 or nz == 0:
        return F.zeros((nq, nq, nq, nz))
    lhs = F.reduce(np.tensordot(c, values, axes=([2], [0])))  # (a, b, c, z)
    v_c = F.reduce(np.tensordot(values, c, axes=([1], [2])))  # (x, z, y, w): r(x, [y, w])
    t1 = np.transpose(v_c, (0, 2, 3, 1))  # (a, b, c, z) = r(a, [b, c])
    t2 = np.transpose(v_c, (2, 0, 3, 1))  # (a, b, c, z) = r(b, [a, c])
    s = _signs(quotient.parity)
    return F.reduce(lhs - t1 + s[:, :, None, None] * t2)


def validate_factor_set(r: FactorSet) -> FactorSetReport:
    F = r.field
    Q, Zs = r.quotient, r.center_space
    nq = Q.N
    pq, pz = Q.parity, Zs.parity
    v = r.values
    parity = []
    for a, b, k in zip(*np.nonzero(v != 0)):
        if pz[k] != (pq[a] + pq[b]) % 2:
            parity.append((int(a), int(b), int(k), v[a, b, k]))
    skew = []
    s = _signs(pq)
    for a in range(nq):
        for b in range(a, nq):
            res = F.reduce(v[b, a] + s[a, b] * v[a, b])
            if np.any(res != 0):
                skew.append((a, b, res))
    res = cocycle_residual(Q, v)
    cocycle = [(int(a), int(b), int(c), res[a, b, c].copy()) for a, b, c in zip(*np.nonzero(np.any(res != 0, axis=3)))]
    return FactorSetReport(tuple(parity), tuple(skew), tuple(cocycle))


@dataclass(frozen=True)
class SectionData:
    """The factor set of ``L`` for a complement ``K`` of the center, with its section."""

    factor_set: FactorSet
    section: GradedLinearMap  # L/Z -> L with image K
    center_basis: np.ndarray  # rows: the ordered basis of Z(L) used for coordinates
    complement: GradedSubspace


def factor_set_from_section(L: SuperAlgebra, K: GradedSubspace | None = None, *, force: bool = False) -> SectionData:
    """``r(a, b) = [T a, T b] - T[a, b]`` for the section ``T`` with image ``K``."""
    L = require_valid(L, force)
    F = L.field
    Z = center(L)
    qd = quotient_data(L, Z, complement=K)
    Q = qd.algebra
    W = qd.section.matrix.T  # rows T(a)
    nq, nz = Q.N, Z.total_dim
    if nq and nz:
        raw = bracket_table(L, W, W).reshape(-1, L.N)
        lifted = F.matmul(Q.constants.reshape(-1, nq), W)
        vals = coordinates(F, Z.basis, F.reduce(raw - lifted)).reshape(nq, nq, nz)
    else:
        vals = F.zeros((nq, nq, nz))
    Zs = SuperAlgebra.abelian(F, *Z.dim, name="Z")
    r = FactorSet(Q, Zs, vals)
    report = validate_factor_set(r)
    if not report.valid and L.is_valid:
        raise AssertionError("factor set of a valid algebra fails the axioms")
    return SectionData(r, qd.section, Z.basis, qd.complement)


@dataclass(frozen=True)
class ReconstructionResult:
    algebra: SuperAlgebra
    center_copy: GradedSubspace  # Z_R = {(x, 0)}
    center_positions: np.ndarray
    quotient_positions: np.ndarray

    def center_inside_center(self) -> bool:
        return center(self.algebra).contains(self.center_copy)

    def center_equals_center(self) -> bool:
        return center(self.algebra) == self.center_copy


def reconstruct(r: FactorSet) -> ReconstructionResult:
    """The algebra on pairs ``(x, a)`` with ``[(x,a),(y,b)] = (r(a,b), [a,b])``."""
    report = validate_factor_set(r)
    if not report.valid:
        raise InvalidFactorSetError(
            f"factor set fails the axioms ({len(report.parity)} parity, "
            f"{len(report.skew)} skew, {len(report.cocycle)} cocycle violations)"
        )
    F = r.field
    Q, Zs = r.quotient, r.center_space
    iz, iq = direct_sum_layout(Zs.dim, Q.dim)
    dim = (Zs.dim[0] + Q.dim[0], Zs.dim[1] + Q.dim[1])
    N = sum(dim)
    c = F.zeros((N, N, N))
    if Q.N:
        c[np.ix_(iq, iq, iq)] = Q.constants
        if Zs.N:
            c[np.ix_(iq, iq, iz)] = r.values
    names = [""] * N
    for pos, nm in zip(iz, Zs.names):
        names[pos] = f"z:{nm}"
    for pos, nm in zip(iq, Q.names):
        names[pos] = f"q:{nm}"
    R = SuperAlgebra(F, dim, c, names=names, name="R", flagged=Q.flagged or not Q.is_valid)
    if not R.is_valid and Q.is_valid:
        raise AssertionError("reconstruction of a valid factor set is not a Lie superalgebra")
    Zr = GradedSubspace.from_vectors(F, dim, F.eye(N)[iz]) if N else GradedSubspace.zero(F, dim)
    out = ReconstructionResult(R, Zr, iz, iq)
    if not out.center_inside_center():
        raise AssertionError("Z_R is not central")
    return out


def _pair_map(F, rec: ReconstructionResult, target_dim, z_part: np.ndarray, q_part: np.ndarray) -> np.ndarray:
    """Matrix with columns ``z_part`` on center positions and ``q_part`` on quotient positions."""
    M = F.zeros((sum(target_dim), rec.algebra.N))
    if len(rec.center_positions):
        M[:, rec.center_positions] = z_part
    if len(rec.quotient_positions):
        M[:, rec.quotient_positions] = q_part
    return M


def reconstruction_isomorphism(L: SuperAlgebra, sd: SectionData, rec: ReconstructionResult | None = None) -> GradedLinearMap:
    """``theta(x, a) = x + T(a)`` from ``(Z, L/Z, r)`` to ``L``, verified."""
    F = L.field
    if rec is None:
        rec = reconstruct(sd.factor_set)
    if sd.section.target != L.dim or sd.center_basis.shape[1:] != (L.N,):
        raise ValueError("section data does not belong to this algebra")
    Zb = sd.center_basis.T if sd.center_basis.shape[0] else F.zeros((L.N, 0))
    theta = GradedLinearMap(F, rec.algebra.dim, L.dim, _pair_map(F, rec, L.dim, Zb, sd.section.matrix))
    if not is_isomorphism(theta, rec.algebra, L):
        raise ValueError("factor set does not match the algebra and section")
    return theta


# -- transport along an isoclinism -----------------------------------------


def _pullback(F, values: np.ndarray, mu: np.ndarray) -> np.ndarray:
    """``out[a, b] = values[mu a, mu b]`` for a matrix ``mu`` (columns = images)."""
    if values.size == 0 or mu.size == 0:
        return F.zeros((mu.shape[1], mu.shape[1], values.shape[2]))
    X = F.reduce(np.tensordot(mu, values, axes=([0], [0])))  # (a, d, z)
    Y = F.reduce(np.tensordot(X, mu, axes=([1], [0])))  # (a, z, b)
    return np.transpose(Y, (0, 2, 1))


def _apply_to_values(F, values: np.ndarray, M: np.ndarray) -> np.ndarray:
    """Apply a linear map (matrix on center coordinates) to every value."""
    if values.size == 0:
        return F.zeros(values.shape[:2] + (M.shape[0],))
    return F.reduce(np.tensordot(values, M, axes=([2], [1])))


def center_restriction(w: IsoclinismWitness) -> np.ndarray:
    """Matrix of ``theta`` on ``Z(L) -> Z(K)`` in the canonical center bases.

    Requires ``Z(L) <= L'`` and raises ``ValueError`` if ``theta`` does not
    carry the center bijectively onto the center.
    """
    F = w.source.field
    cl, ck = canonical(w.source), canonical(w.target)
    if not cl.derived.contains(cl.center):
        raise ValueError("source is not stem")
    if cl.center.total_dim != ck.center.total_dim or cl.center.dim != ck.center.dim:
        raise ValueError("theta does not map the center onto the center")
    if cl.center.total_dim == 0:
        return F.zeros((0, 0))
    coords = coordinates(F, cl.derived.basis, cl.center.basis)  # rows
    images = F.matmul(F.matmul(coords, w.theta.matrix.T), ck.derived.basis)
    try:
        M = coordinates(F, ck.center.basis, images).T
    except ValueError as exc:
        raise ValueError("theta does not map the center into the center") from exc
    if GradedLinearMap(F, cl.center.dim, ck.center.dim, M).is_bijective():
        return M
    raise ValueError("theta is not bijective on the center")


def transport(s: FactorSet, w: IsoclinismWitness) -> FactorSet:
    """``r(a, b) = theta^{-1}(s(phi a, phi b))``: a factor set over the source of ``w``.

    ``s`` must be expressed on the canonical quotient and center of the
    witness target, and both algebras must be stem.
    """
    if not check_witness(w):
        raise ValueError("witness does not verify")
    if not is_stem(w.source) or not is_stem(w.target):
        raise ValueError("transport needs stem algebras")
    F = w.source.field
    cl, ck = canonical(w.source), canonical(w.target)
    if s.quotient != ck.quotient.algebra or s.center_space.dim != ck.center.dim:
        raise ValueError("factor set is not on the canonical quotient of the witness target")
    tz = center_restriction(w)
    values = _pullback(F, s.values, w.phi.matrix)
    if tz.size:
        values = _apply_to_values(F, values, inverse(F, tz))
    r = FactorSet(cl.quotient.algebra, SuperAlgebra.abelian(F, *cl.center.dim, name="Z"), values)
    rec_r, rec_s = reconstruct(r), reconstruct(s)
    psi = pairing_map(r, s, w, rec_r, rec_s)
    if not is_isomorphism(psi, rec_r.algebra, rec_s.algebra):
        raise AssertionError("pairing map is not an isomorphism")
    return r


def pairing_map(r: FactorSet, s: FactorSet, w: IsoclinismWitness, rec_r=None, rec_s=None) -> GradedLinearMap:
    """``psi(x, a) = (theta x, phi a)`` between the two reconstructions."""
    F = r.field
    rec_r = rec_r or reconstruct(r)
    rec_s = rec_s or reconstruct(s)
    tz = center_restriction(w)
    S = rec_s.algebra
    z_part = F.zeros((S.N, r.center_space.N))
    if tz.size:
        z_part[rec_s.center_positions] = tz
    q_part = F.zeros((S.N, r.quotient.N))
    if w.phi.matrix.size:
        q_part[rec_s.quotient_positions] = w.phi.matrix
    return GradedLinearMap(F, rec_r.algebra.dim, S.dim, _pair_map(F, rec_r, S.dim, z_part, q_part))


# -- gluing -----------------------------------------------------------------


def _check_same_base(r: FactorSet, s: FactorSet):
    if r.quotient.dim != s.quotient.dim or r.center_space.dim != s.center_space.dim or r.field != s.field:
        raise ValueError("factor sets live on different quotient or center dimensions")


def _check_maps(r: FactorSet, mu, nu, delta):
    Qd, Zd = r.quotient.dim, r.center_space.dim
    if mu.source != Qd or mu.target != Qd:
        raise ValueError("mu must act on the quotient")
    if nu.source != Zd or nu.target != Zd:
        raise ValueError("nu must act on the center")
    if delta.source != Qd or delta.target != Zd:
        raise ValueError("delta must map the quotient to the center")


def compatibility_residual(r: FactorSet, s: FactorSet, mu: GradedLinearMap, nu: GradedLinearMap, delta: GradedLinearMap) -> np.ndarray:
    """``nu(r(a,b) + delta[a,b]) - s(mu a, mu b)`` on quotient basis pairs."""
    _check_same_base(r, s)
    _check_maps(r, mu, nu, delta)
    F = r.field
    Q = r.quotient
    nq, nz = Q.N, r.center_space.N
    if nq == 0 or nz == 0:
        return F.zeros((nq, nq, nz))
    inner = F.reduce(r.values + np.tensordot(Q.constants, delta.matrix, axes=([2], [1])))
    lhs = _apply_to_values(F, inner, nu.matrix)
    return F.reduce(lhs - _pullback(F, s.values, mu.matrix))


def glue_isomorphism(r: FactorSet, s: FactorSet, mu: GradedLinearMap, nu: GradedLinearMap, delta: GradedLinearMap) -> GradedLinearMap:
    """``lambda(x, a) = (nu(x + delta a), mu a)`` from ``R`` to ``S``, verified.

    With this form a zero compatibility residual is exactly the condition
    for ``lambda`` to be multiplicative.
    """
    F = r.field
    if np.any(compatibility_residual(r, s, mu, nu, delta) != 0):
        raise ValueError("compatibility residual is nonzero")
    if not is_isomorphism(mu, r.quotient, s.quotient):
        raise ValueError("mu is not an automorphism of the quotient")
    if not nu.is_bijective():
        raise ValueError("nu is not an automorphism of the center")
    rec_r, rec_s = reconstruct(r), reconstruct(s)
    S = rec_s.algebra
    z_part = F.zeros((S.N, r.center_space.N))
    q_part = F.zeros((S.N, r.quotient.N))
    if nu.matrix.size:
        z_part[rec_s.center_positions] = nu.matrix
        if delta.matrix.size:
            q_part[rec_s.center_positions] = F.matmul(nu.matrix, delta.matrix)
    if mu.matrix.size:
        q_part[rec_s.quotient_positions] = mu.matrix
    lam = GradedLinearMap(F, rec_r.algebra.dim, S.dim, _pair_map(F, rec_r, S.dim, z_part, q_part))
    if not is_isomorphism(lam, rec_r.algebra, S):
        raise AssertionError("glued map is not an isomorphism")
    image = GradedSubspace.from_vectors(F, S.dim, F.matmul(lam.matrix, rec_r.center_copy.basis.T).T) if rec_r.center_copy.total_dim else rec_r.center_copy
    if image != rec_s.center_copy:
        raise AssertionError("glued map does not carry Z_R onto Z_S")
    return lam


@dataclass(frozen=True)
class GluingData:
    mu: GradedLinearMap
    nu: GradedLinearMap
    delta: GradedLinearMap


def gluing_data_from_isoclinism(r: FactorSet, s: FactorSet, w: IsoclinismWitness) -> GluingData:
    """Read ``(mu, nu, delta)`` off an isoclinism ``R ~ S`` of stem reconstructions.

    ``mu`` is the quotient part, ``nu`` the restriction to ``Z_R`` and
    ``gamma(c) = `` center part of ``beta(0, c)`` on the derived quotient;
    ``delta = nu^{-1} gamma`` is extended by zero on the pivot-greedy
    complement of the derived quotient.
    """
    _check_same_base(r, s)
    F = r.field
    rec_r, rec_s = reconstruct(r), reconstruct(s)
    R, S = rec_r.algebra, rec_s.algebra
    if w.source != R or w.target != S:
        raise ValueError("witness does not connect the two reconstructions")
    cr, cs = canonical(R), canonical(S)
    if cr.center != rec_r.center_copy or cs.center != rec_s.center_copy:
        raise ValueError("reconstructions are not stem (Z_R differs from the center)")
    Q = r.quotient
    nq, nz = Q.N, r.center_space.N
    if np.any(cr.quotient.complement.basis != F.eye(R.N)[rec_r.quotient_positions]) or np.any(
        cs.quotient.complement.basis != F.eye(S.N)[rec_s.quotient_positions]
    ):
        raise AssertionError("canonical quotient of a reconstruction is not spanned by the (0, a)")
    mu = GradedLinearMap(F, Q.dim, Q.dim, w.phi.matrix)
    beta = lambda vectors: F.matmul(  # noqa: E731
        F.matmul(coordinates(F, cr.derived.basis, vectors), w.theta.matrix.T), cs.derived.basis
    )
    if nz:
        zvec = F.eye(R.N)[rec_r.center_positions]
        nu_m = beta(zvec)[:, rec_s.center_positions].T
    else:
        nu_m = F.zeros((0, 0))
    nu = GradedLinearMap(F, r.center_space.dim, r.center_space.dim, nu_m)
    Dq = derived(Q)
    delta_m = F.zeros((nz, nq))
    if nz and Dq.total_dim:
        lifts = F.zeros((Dq.total_dim, R.N))
        lifts[:, rec_r.quotient_positions] = Dq.basis
        gamma_cols = beta(lifts)[:, rec_s.center_positions].T  # (nz, dim Q')
        dcols = F.matmul(inverse(F, nu_m), gamma_cols)
        C = graded_complement(Dq, GradedSubspace.whole(F, Q.dim))
        basis = np.concatenate([Dq.basis, C.basis], axis=0)
        values = np.concatenate([dcols, F.zeros((nz, C.total_dim))], axis=1)
        delta_m = solve(F, basis, values.T).T
    delta = GradedLinearMap(F, Q.dim, r.center_space.dim, delta_m)
    return GluingData(mu, nu, delta)


@dataclass(frozen=True)
class StemIsomorphism:
    """Everything produced on the way from an isoclinism of stems to an isomorphism."""

    isomorphism: GradedLinearMap  # L -> M
    r: FactorSet
    s: FactorSet
    gluing: GluingData
    glued: GradedLinearMap  # R -> S


def stem_isomorphism_from_witness(w: IsoclinismWitness) -> StemIsomorphism:
    """Constructive form of "isoclinic stem algebras are isomorphic".

    ``L ~= R`` and ``M ~= S`` through factor sets over ``L``; the given
    isoclinism induces one between ``R`` and ``S``, from which the gluing
    data and then the isomorphism ``R -> S`` are read off.
    """
    L, M = w.source, w.target
    if not is_stem(L) or not is_stem(M):
        raise ValueError("both algebras must be stem")
    if not check_witness(w):
        raise ValueError("witness does not verify")
    sd_l = factor_set_from_section(L, force=True)
    sd_m = factor_set_from_section(M, force=True)
    r = sd_l.factor_set
    s_prime = sd_m.factor_set
    s = transport(s_prime, w)
    rec_r, rec_s, rec_sp = reconstruct(r), reconstruct(s), reconstruct(s_prime)
    theta_l = reconstruction_isomorphism(L, sd_l, rec_r)  # R -> L
    theta_m = reconstruction_isomorphism(M, sd_m, rec_sp)  # S' -> M
    psi = pairing_map(s, s_prime, w, rec_s, rec_sp)  # S -> S'
    steps = [
        witness_from_homomorphism(rec_r.algebra, L, theta_l),
        w,
        invert(witness_from_homomorphism(rec_sp.algebra, M, theta_m)),
        invert(witness_from_homomorphism(rec_s.algebra, rec_sp.algebra, psi)),
    ]
    composite = chain(steps)
    if not check_witness(composite):
        raise AssertionError("composite isoclinism does not verify")
    data = gluing_data_from_isoclinism(r, s, composite)
    lam = glue_isomorphism(r, s, data.mu, data.nu, data.delta)
    iso = theta_m @ psi @ lam @ theta_l.inverse()
    if not is_isomorphism(iso, L, M):
        raise AssertionError("assembled stem isomorphism does not verify")
    return StemIsomorphism(iso, r, s, data, lam)


def conjugate_factor_set(r: FactorSet, mu: GradedLinearMap, nu: GradedLinearMap) -> FactorSet:
    """The factor set ``nu r(mu^{-1} a, mu^{-1} b)`` on new bases.

    ``mu`` and ``nu`` are the base changes of quotient and center; the
    quotient algebra is transported along ``mu``.
    """
    F = r.field
    mu_inv = inverse(F, mu.matrix) if mu.matrix.size else mu.matrix
    vals = _pullback(F, r.values, mu_inv)
    if nu.matrix.size:
        vals = _apply_to_values(F, vals, nu.matrix)
    Q = r.quotient
    if Q.N:
        c = _pullback(F, Q.constants, mu_inv)
        c = _apply_to_values(F, c, mu.matrix)
    else:
        c = Q.constants
    Q2 = SuperAlgebra(F, Q.dim, c, name=Q.name, flagged=Q.flagged)
    if not is_homomorphism(mu, Q, Q2):
        raise AssertionError("conjugated quotient is inconsistent")
    return FactorSet(Q2, r.center_space, vals)
