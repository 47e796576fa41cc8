import itertools

import numpy as np
import pytest

from superiso import catalog
from superiso.exactlin import QQ, GradedLinearMap
from superiso.serialize import DocumentError, algebra_dumps, algebra_from_json, algebra_loads, algebra_to_json
from superiso.superalg import (
    InvalidAlgebraError,
    SuperAlgebra,
    center,
    change_of_basis,
    derived,
    direct_sum,
    invariant_profile,
    is_graded_ideal,
    is_homomorphism,
    is_isomorphism,
    quotient,
    quotient_data,
    random_change_of_basis,
    require_valid,
    span,
    validate,
    whole,
    zero_subspace,
)

from conftest import GF5, GF7, valid_entries
from oracles import jacobi_by_hand


def e(A, *idx):
    return [A.basis_vector(i) for i in idx]


def test_abelian_22_valid():
    rep = validate(catalog.load("abelian-2-2"))
    assert rep.valid and not rep.jacobi and not rep.skew and not rep.grading


def test_paper_L_jacobi_violation(paper_L):
    rep = paper_L.report
    assert not rep.valid
    found = {(i, j, k): tuple(r) for i, j, k, r in rep.jacobi}
    assert (2, 2, 0) in found
    assert found[(2, 2, 0)] == (1, 0, 0)
    assert found == jacobi_by_hand(paper_L)


def test_paper_M_jacobi_violation(paper_M):
    found = {(i, j, k): tuple(r) for i, j, k, r in paper_M.report.jacobi}
    assert (3, 3, 0) in found
    assert found == jacobi_by_hand(paper_M)


def test_heisenberg_valid(heis01):
    assert heis01.is_valid
    assert jacobi_by_hand(heis01) == {}


@pytest.mark.parametrize("name", catalog.names())
def test_validator_matches_hand_oracle(name):
    A = catalog.load(name)
    found = {(i, j, k): tuple(r) for i, j, k, r in A.report.jacobi}
    assert found == jacobi_by_hand(A)


def test_invalid_refused_without_force(paper_L):
    with pytest.raises(InvalidAlgebraError):
        center(require_valid(paper_L))
    assert require_valid(paper_L, force=True).flagged


def test_bracket_examples(paper_L):
    e1, e2, e3 = e(paper_L, 0, 1, 2)
    assert list(paper_L.bracket(e1, e2)) == [1, 0, 0]
    assert list(paper_L.bracket(e2, e1)) == [-1, 0, 0]
    assert list(paper_L.bracket(e3, e3)) == [0, 1, 0]
    assert not np.any(paper_L.bracket(e1, QQ.zeros(3)) != 0)


def test_even_square_refused():
    with pytest.raises(ValueError):
        SuperAlgebra.from_brackets(QQ, (1, 0), {(0, 0): {0: 1}})


def test_paper_spans(paper_L, paper_M):
    assert derived(paper_L) == span(paper_L, e(paper_L, 0, 1))
    assert derived(paper_L).dim == (2, 0)
    assert center(paper_L).total_dim == 0
    assert center(paper_M) == span(paper_M, e(paper_M, 2))
    assert derived(paper_M) == span(paper_M, e(paper_M, 0, 1))


def test_heisenberg_derived(heis01):
    assert derived(heis01) == span(heis01, e(heis01, 0))
    assert derived(heis01).dim == (1, 0)


def test_abelian_center_and_derived():
    A = catalog.load("abelian-2-1")
    assert center(A) == whole(A)
    assert derived(A).total_dim == 0


def test_ideals(paper_L):
    for A in valid_entries():
        assert is_graded_ideal(A, center(A))
        assert is_graded_ideal(A, derived(A))
    assert not is_graded_ideal(paper_L, span(paper_L, e(paper_L, 1)))


def test_quotient_examples(paper_M):
    A = catalog.load("osp-1-2")
    Q, proj = quotient(A, zero_subspace(A))
    assert Q.dim == A.dim and is_homomorphism(proj, A, Q)
    ab = catalog.load("abelian-2-1")
    Q, _ = quotient(ab, span(ab, [ab.basis_vector(0) + ab.basis_vector(1)]))
    assert Q.dim == (1, 1) and Q.is_abelian
    qd = quotient_data(paper_M, center(paper_M))
    Q = qd.algebra
    assert Q.dim == (2, 1)
    e1, e2, e4 = e(Q, 0, 1, 2)
    assert list(Q.bracket(e1, e2)) == [1, 0, 0]
    assert list(Q.bracket(e4, e4)) == [0, 1, 0]


def test_direct_sum_blocks():
    A, B = catalog.load("heisenberg-0-1"), catalog.load("sl-1-1")
    S = direct_sum(A, B)
    assert S.is_valid
    assert center(S).dim == tuple(a + b for a, b in zip(center(A).dim, center(B).dim))
    assert derived(S).dim == tuple(a + b for a, b in zip(derived(A).dim, derived(B).dim))
    Z = direct_sum(A, SuperAlgebra.abelian(QQ, 0, 0))
    assert is_isomorphism(GradedLinearMap.identity(QQ, A.dim), A, Z)


def test_homomorphism_examples():
    A = catalog.load("osp-1-2")
    assert is_isomorphism(GradedLinearMap.identity(QQ, A.dim), A, A)
    z = GradedLinearMap.zero(QQ, A.dim, A.dim)
    assert is_homomorphism(z, A, A) and not is_isomorphism(z, A, A)


def test_quotients_and_sums_stay_valid():
    es = valid_entries(max_dim=(2, 2))
    for A in es:
        for I in (center(A), derived(A)):
            assert quotient(A, I)[0].is_valid
    for A, B in itertools.combinations(es[:8], 2):
        assert direct_sum(A, B).is_valid


@pytest.mark.parametrize("F", [GF5, GF7])
def test_profile_invariant_under_change_of_basis(F, rng):
    for A in valid_entries(F, max_dim=(3, 2)):
        B, P = random_change_of_basis(A, rng)
        assert is_isomorphism(P, B, A)
        assert invariant_profile(A) == invariant_profile(B)


@pytest.mark.parametrize("name", catalog.names())
def test_json_round_trip(name):
    A = catalog.load(name)
    text = algebra_dumps(A)
    B = algebra_loads(text)
    assert np.all(A.constants == B.constants) and A.dim == B.dim and A.names == B.names
    assert algebra_dumps(B) == text


def test_json_errors():
    with pytest.raises(DocumentError, match="line 1"):
        algebra_loads("{ nope")
    doc = algebra_to_json(catalog.load("heisenberg-0-1"))
    doc["brackets"].append(dict(doc["brackets"][0]))
    with pytest.raises(DocumentError):
        algebra_from_json(doc)
    doc = algebra_to_json(catalog.load("heisenberg-0-1"))
    doc["brackets"] = [{"left": 1, "right": 0, "value": {"0": "1"}}]
    with pytest.raises(DocumentError):
        algebra_from_json(doc)


def test_catalog_contents(paper_M):
    names = catalog.names()
    assert "paper-L" in names and "paper-M" in names
    assert paper_M.dim == (3, 1)
    assert list(paper_M.constants[0, 1]) == [1, 0, 0, 0]
    assert list(paper_M.constants[3, 3]) == [0, 1, 0, 0]
    ab = catalog.load("abelian-2-1")
    assert algebra_to_json(ab)["brackets"] == [] and ab.dim == (2, 1)
    with pytest.raises(catalog.UnknownCatalogEntry):
        catalog.load("no-such-algebra")


def test_change_of_basis_map(rng):
    A = catalog.load("gl-1-1")
    B, P = random_change_of_basis(A, rng)
    assert is_isomorphism(P, B, A)
    C, Q = change_of_basis(A, QQ.eye(A.N))
    assert np.all(C.constants == A.constants)


def test_validator_fractional_constants(paper_M, rng):
    # a rational change of basis puts denominators into the constants
    for A in (paper_M, catalog.load("osp-1-2")):
        B, _ = random_change_of_basis(A, rng)
        found = {(i, j, k): tuple(r) for i, j, k, r in B.report.jacobi}
        assert found == jacobi_by_hand(B)
        assert B.is_valid == A.is_valid
