import itertools

import numpy as np
import pytest

from superiso import catalog
from superiso.exactlin import QQ, GradedLinearMap, coordinates, rank
from superiso.isoclinism import (
    IsoclinismWitness,
    NotIsoclinic,
    check_witness,
    compose,
    find_isoclinism,
    graded_ideals_of_interest,
    identity_witness,
    invert,
    is_stem,
    lemma_1_10_check,
    same_dim_isomorphism,
    stem_decompose,
    witness_abelian_sum,
    witness_quotient,
)
from superiso.search import NotIsomorphic, Witness, find_isomorphism
from superiso.serialize import DocumentError
from superiso.superalg import (
    SuperAlgebra,
    center,
    derived,
    direct_sum,
    is_isomorphism,
    random_change_of_basis,
    span,
)

from conftest import GF5, valid_entries


# -- independent oracle ------------------------------------------------------


def graded_invertibles(F, k):
    if k == 0:
        yield F.zeros((0, 0))
        return
    for entries in itertools.product(range(F.p), repeat=k * k):
        M = F.array(list(entries)).reshape(k, k)
        if rank(F, M) == k:
            yield M


def complement_of_center(L):
    """Basis vectors (as rows) of a coordinate complement of Z(L), per parity."""
    F = L.field
    rows = {0: [], 1: []}
    Z = center(L)
    for par in (0, 1):
        cur = [z for z in (Z.even if par == 0 else Z.odd)]
        for i in range(L.N):
            if L.parity[i] != par:
                continue
            v = L.basis_vector(i)
            trial = cur + [v]
            if rank(F, np.stack(trial)) == len(trial):
                cur.append(v)
                rows[par].append(v)
    return rows


def pair_search_isoclinic(L, K):
    """Brute force over phi; theta is forced on brackets of lifts.

    phi must respect brackets modulo Z(K).  Then theta(u) lies in the coset
    phi(u + Z(L)), which makes theta a homomorphism as well.
    """
    F = L.field
    ZL, ZK = center(L), center(K)
    if derived(L).dim != derived(K).dim:
        return False
    cl, ck = complement_of_center(L), complement_of_center(K)
    if (len(cl[0]), len(cl[1])) != (len(ck[0]), len(ck[1])):
        return False
    if len(cl[0]) + len(cl[1]) == 0:
        return True
    target_rank = derived(L).total_dim
    basis_L = np.stack(cl[0] + cl[1] + list(ZL.basis))
    ncl = len(cl[0]) + len(cl[1])
    for A0 in graded_invertibles(F, len(cl[0])):
        for A1 in graded_invertibles(F, len(cl[1])):
            lifts = []
            for par, A in ((0, A0), (1, A1)):
                for i in range(len(cl[par])):
                    img = F.zeros(K.N)
                    for j in range(len(ck[par])):
                        img = F.reduce(img + A[j, i] * ck[par][j])
                    lifts.append((cl[par][i], img))
            U, V = [], []
            for (x, fx), (y, fy) in itertools.product(lifts, repeat=2):
                U.append(L.bracket(x, y))
                V.append(K.bracket(fx, fy))
            U, V = np.stack(U), np.stack(V)
            images = np.stack([fx for _, fx in lifts])
            coords = coordinates(F, basis_L, U)[:, :ncl]
            if not all(ZK.contains_vector(F.reduce(v - c @ images)) for v, c in zip(V, coords)):
                continue
            if rank(F, V) != target_rank or rank(F, U) != target_rank:
                continue
            if rank(F, np.concatenate([U, V], axis=1)) == target_rank:
                return True
    return False


def small_gf5():
    return [A for A in valid_entries(GF5, max_dim=(2, 2)) if A.N - center(A).total_dim <= 3]


def test_oracle_agrees_on_small_gf5_pairs():
    es = small_gf5()
    assert len(es) >= 8
    for L, K in itertools.combinations_with_replacement(es, 2):
        res = find_isoclinism(L, K)
        assert isinstance(res, (Witness, NotIsoclinic))
        assert isinstance(res, Witness) == pair_search_isoclinic(L, K), (L.name, K.name)


# -- witnesses ---------------------------------------------------------------


def test_identity_witness(heis01):
    w = identity_witness(heis01)
    assert check_witness(w) and lemma_1_10_check(w)


def test_scaled_theta_fails(heis01):
    w = identity_witness(heis01)
    bad = IsoclinismWitness(w.source, w.target, w.phi, GradedLinearMap(QQ, w.theta.source, w.theta.target, w.theta.matrix * 2))
    assert not check_witness(bad)


def test_paper_pair(paper_L, paper_M):
    res = find_isoclinism(paper_L, paper_M, force=True)
    assert isinstance(res, Witness)
    w = res.value
    assert check_witness(w) and lemma_1_10_check(w)
    assert check_witness(IsoclinismWitness.from_json(w.to_json()))


def test_tampered_witness_rejected(paper_L, paper_M):
    doc = find_isoclinism(paper_L, paper_M, force=True).value.to_json()
    doc["theta"][0][0] = "5"
    with pytest.raises(DocumentError):
        IsoclinismWitness.from_json(doc)


def test_abelian_witness_vacuous():
    A, B = catalog.load("abelian-1-1"), catalog.load("abelian-2-3")
    res = find_isoclinism(A, B)
    assert isinstance(res, Witness) and lemma_1_10_check(res.value)
    Z = SuperAlgebra.abelian(QQ, 0, 0)
    assert is_stem(Z) and isinstance(find_isoclinism(Z, A), Witness)


def test_heisenberg_not_isoclinic_to_abelian(heis01):
    res = find_isoclinism(heis01, catalog.load("abelian-1-1"))
    assert isinstance(res, NotIsoclinic)


def test_abelian_sum_examples(heis01):
    w = witness_abelian_sum(heis01, SuperAlgebra.abelian(QQ, 0, 0))
    assert check_witness(w) and w.target.dim == heis01.dim
    w = witness_abelian_sum(heis01, SuperAlgebra.abelian(QQ, 1, 0))
    assert check_witness(w) and lemma_1_10_check(w)
    T = stem_decompose(catalog.load("heisenberg-1-1")).stem_part
    w = witness_abelian_sum(T, SuperAlgebra.abelian(QQ, 2, 1))
    assert check_witness(w)
    with pytest.raises(ValueError):
        witness_abelian_sum(T, heis01)


def test_quotient_examples():
    L = catalog.load("heisenberg-1-0+abelian-0-1")
    qw = witness_quotient(L, span(L, []))
    assert check_witness(qw.witness)
    # the abelian odd summand is central and meets L' trivially
    Z = center(L)
    A = span(L, [v for v in Z.odd])
    qw = witness_quotient(L, A)
    assert qw.small_ideal.total_dim == 0 and qw.witness.source is L
    assert check_witness(qw.witness)
    qw = witness_quotient(L, span(L, np.eye(L.N, dtype=object)))
    assert check_witness(qw.witness)


@pytest.mark.parametrize("F", [QQ, GF5])
def test_quotient_witnesses_all_ideals(F):
    for L in valid_entries(F, max_dim=(3, 2)):
        for I in graded_ideals_of_interest(L):
            w = witness_quotient(L, I).witness
            assert check_witness(w) and lemma_1_10_check(w), (L.name, I.dim)
            wi = invert(w)
            assert check_witness(wi)
            assert check_witness(compose(wi, w))


def test_stem_examples(paper_L, paper_M, heis01):
    assert is_stem(paper_L)
    assert not is_stem(paper_M)
    assert is_stem(heis01)
    d = stem_decompose(heis01)
    assert d.stem_part.dim == heis01.dim and d.abelian_part.N == 0
    A = catalog.load("abelian-2-1")
    d = stem_decompose(A)
    assert d.stem_part.N == 0 and d.abelian_part.dim == (2, 1)
    d = stem_decompose(paper_M, force=True)
    assert d.stem_part.dim == (2, 1) and d.abelian_part.dim == (1, 0)
    assert d.abelian_subspace == center(paper_M)


@pytest.mark.parametrize("name", catalog.names())
def test_stem_decompose_catalog(name):
    L = catalog.load(name)
    d = stem_decompose(L, force=True)
    T = d.stem_part
    assert derived(T).contains(center(T))
    assert d.abelian_part.is_abelian
    assert is_isomorphism(d.iso, L, d.total)
    assert tuple(a + b for a, b in zip(T.dim, d.abelian_part.dim)) == L.dim


def test_same_dim_isomorphism_examples(rng):
    L = catalog.load("gl-1-1")
    K, _ = random_change_of_basis(L, rng)
    res = same_dim_isomorphism(L, K)
    assert isinstance(res, Witness) and is_isomorphism(res.value, L, K)
    res = same_dim_isomorphism(catalog.load("heisenberg-0-1"), catalog.load("abelian-1-1"))
    assert isinstance(res, NotIsomorphic)


def test_same_dim_agrees_with_direct_search_gf5(rng):
    es = [A for A in valid_entries(GF5, max_dim=(3, 2))]
    for L, K in itertools.combinations(es, 2):
        if L.dim != K.dim:
            continue
        a = same_dim_isomorphism(L, K)
        b = find_isomorphism(L, K)
        assert isinstance(a, Witness) == isinstance(b, Witness), (L.name, K.name)


def test_minimality_of_stem():
    for name in ("heisenberg-0-1", "heisenberg-1-0", "sl-1-1", "nil-3-2"):
        T = catalog.load(name)
        sizes = []
        for m, n in itertools.product(range(3), repeat=2):
            if m + n > 2:
                continue
            S = direct_sum(T, SuperAlgebra.abelian(QQ, m, n))
            assert isinstance(find_isoclinism(T, S), Witness)
            sizes.append((S.N, is_stem(S)))
        smallest = min(s for s, _ in sizes)
        assert all(stem == (size == smallest) for size, stem in sizes), name
