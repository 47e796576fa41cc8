import itertools

import pytest

from superiso import catalog
from superiso.cohomcover import (
    DEFAULT_CHOICE,
    CentralExtension,
    RepresentativeChoice,
    build_cover,
    coboundary_space,
    cocycle_space,
    covers_isomorphic,
    extension_from_quotient,
    extension_homomorphism_check,
    is_cocycle,
    multiplier,
    quotient_by_kernel_check,
    scaled_choice,
    trivial_extension,
    verify_extension,
)
from superiso.exactlin import QQ, GradedLinearMap, GradedSubspace, in_span
from superiso.search import Witness, find_isomorphism
from superiso.serialize import DocumentError
from superiso.superalg import (
    SuperAlgebra,
    center,
    derived,
    direct_sum,
    random_change_of_basis,
)

from conftest import GF5, valid_entries
from oracles import abelian_multiplier_formula, brute_force_multiplier


@pytest.mark.parametrize("m,n", [(2, 1), (1, 0), (0, 1), (1, 2), (2, 2)])
def test_abelian_cocycles_against_sympy(m, n):
    A = SuperAlgebra.abelian(QQ, m, n)
    for sigma in (0, 1):
        zdim, bdim = brute_force_multiplier(A, sigma)
        assert len(cocycle_space(A, sigma)) == zdim
        assert len(coboundary_space(A, sigma)) == bdim == 0


def test_cocycle_space_examples():
    A = catalog.load("abelian-2-1")
    assert len(cocycle_space(A, 0)) == 2
    assert len(cocycle_space(A, 1)) == 2
    A = catalog.load("abelian-1-0")
    assert len(cocycle_space(A, 0)) == len(cocycle_space(A, 1)) == 0


def test_coboundary_examples(heis01):
    assert len(coboundary_space(catalog.load("abelian-2-2"), 0)) == 0
    B = coboundary_space(heis01, 0)
    assert len(B) == 1
    assert B[0].coefficients[1, 1] != 0
    assert is_cocycle(heis01, B[0])


@pytest.mark.parametrize("name", [n for n in catalog.names() if catalog.load(n).is_valid and catalog.load(n).N <= 4])
def test_catalog_multipliers_against_sympy(name):
    L = catalog.load(name)
    mult = multiplier(L)
    for sigma in (0, 1):
        zdim, bdim = brute_force_multiplier(L, sigma)
        assert mult.cocycles[sigma].shape[0] == zdim
        assert mult.coboundaries[sigma].shape[0] == bdim
        assert mult.graded_dim[sigma] == zdim - bdim
        for b in mult.coboundaries[sigma]:
            assert in_span(QQ, mult.cocycles[sigma], b)


@pytest.mark.parametrize("m,n", list(itertools.product(range(4), repeat=2)))
def test_abelian_multiplier_formula(m, n):
    mult = multiplier(SuperAlgebra.abelian(QQ, m, n))
    assert mult.graded_dim == abelian_multiplier_formula(m, n)


def test_multiplier_invariant_under_change_of_basis(rng):
    for L in valid_entries(QQ, max_dim=(3, 2)):
        B, _ = random_change_of_basis(L, rng)
        assert multiplier(B).graded_dim == multiplier(L).graded_dim


def test_cover_of_odd_line_is_heisenberg(heis01):
    ext = build_cover(catalog.load("abelian-0-1"))
    assert ext.tags == frozenset({"central", "stem", "stem_cover"})
    assert isinstance(find_isomorphism(ext.total, heis01), Witness)


def test_cover_of_plane_is_heisenberg():
    ext = build_cover(catalog.load("abelian-2-0"))
    assert ext.total.dim == (3, 0)
    assert "stem_cover" in ext.tags
    assert isinstance(find_isomorphism(ext.total, catalog.load("heisenberg-1-0")), Witness)


def test_zero_multiplier_cover_is_itself():
    L = catalog.load("heisenberg-0-1")
    assert multiplier(L).graded_dim == (0, 0)
    ext = build_cover(L)
    assert ext.total.dim == L.dim and "stem_cover" in ext.tags
    assert verify_extension(trivial_extension(L)) == frozenset({"central", "stem", "stem_cover"})
    A = catalog.load("abelian-1-0")
    assert verify_extension(trivial_extension(A)) == frozenset({"central", "stem", "stem_cover"})
    assert verify_extension(trivial_extension(catalog.load("abelian-2-0"))) == frozenset({"central", "stem"})


def test_split_extension_is_central_not_stem(heis01):
    K = direct_sum(heis01, SuperAlgebra.abelian(QQ, 1, 0))
    I = GradedSubspace.from_vectors(QQ, K.dim, [[0, 1, 0]])  # the abelian summand sits at even position 1
    assert center(K).contains(I) and not derived(K).contains(I)
    ext = extension_from_quotient(K, I)
    assert "central" in ext.tags and "stem" not in ext.tags


def test_covers_satisfy_invariants():
    for L in valid_entries(QQ, max_dim=(3, 3)):
        ext = build_cover(L)
        K = ext.total
        img = ext.embed.image()
        assert ext.project.kernel() == img
        assert center(K).contains(img)
        if "stem" in ext.tags:
            assert derived(K).contains(img)
        assert "stem_cover" in ext.tags, L.name
        assert quotient_by_kernel_check(ext)


def test_extension_json_round_trip():
    ext = build_cover(catalog.load("abelian-1-1"))
    back = CentralExtension.from_json(ext.to_json())
    assert back.tags == ext.tags
    doc = ext.to_json()
    doc["tags"] = ["central"]
    with pytest.raises(DocumentError):
        CentralExtension.from_json(doc)


def test_choice_json_round_trip():
    c = RepresentativeChoice(even_mix=(("2",),))
    assert RepresentativeChoice.from_json(c.to_json()) == c
    with pytest.raises(DocumentError):
        RepresentativeChoice.from_json({"bogus": []})


def test_non_stem_choice_reported_then_retried():
    L = catalog.load("abelian-0-1")
    bad = RepresentativeChoice(even_mix=(("0",),))
    ext = build_cover(L, bad)
    assert "stem_cover" not in ext.tags and ext.note
    ext = build_cover(L, bad, retry=True)
    assert "stem_cover" in ext.tags
    with pytest.raises(ValueError):
        covers_isomorphic(L, bad, DEFAULT_CHOICE)


def test_homomorphism_check_examples():
    L = catalog.load("abelian-0-1")
    e1 = build_cover(L)
    assert extension_homomorphism_check(e1, e1, GradedLinearMap.identity(QQ, e1.total.dim))
    assert not extension_homomorphism_check(e1, e1, GradedLinearMap.zero(QQ, e1.total.dim, e1.total.dim))
    with pytest.raises(ValueError):
        extension_homomorphism_check(e1, e1, GradedLinearMap.identity(QQ, (0, 0)))


def test_scaled_covers_isomorphic():
    L = catalog.load("abelian-0-1")
    mult = multiplier(L)
    res, e1, e2 = covers_isomorphic(L, DEFAULT_CHOICE, scaled_choice(mult, {0: 2}))
    assert isinstance(res, Witness)
    assert extension_homomorphism_check(e1, e2, res.value)
    res, e1, _ = covers_isomorphic(L, DEFAULT_CHOICE, DEFAULT_CHOICE)
    assert isinstance(res, Witness)


def test_mixed_choice_plane():
    L = catalog.load("abelian-2-0")
    choice = RepresentativeChoice(even_mix=(("-3",),))
    res, e1, e2 = covers_isomorphic(L, DEFAULT_CHOICE, choice)
    assert isinstance(res, Witness) and extension_homomorphism_check(e1, e2, res.value)


def test_covers_isomorphic_over_gf5():
    for L in valid_entries(GF5, max_dim=(2, 2)):
        mult = multiplier(L)
        h = sum(mult.graded_dim)
        if h == 0 or h > 4:
            continue
        choice = scaled_choice(mult, {i: 2 + i % 3 for i in range(h)})
        res, e1, e2 = covers_isomorphic(L, DEFAULT_CHOICE, choice)
        assert isinstance(res, Witness), L.name
        assert extension_homomorphism_check(e1, e2, res.value)


def sheared_choice(mult):
    """Unitriangular mix plus a shift by every coboundary."""
    kw = {}
    for sigma, tag in ((0, "even"), (1, "odd")):
        h = mult.graded_dim[sigma]
        b = mult.coboundaries[sigma].shape[0]
        if h:
            kw[f"{tag}_mix"] = tuple(tuple("1" if j >= i else "0" for j in range(h)) for i in range(h))
            if b:
                kw[f"{tag}_shift"] = tuple(tuple("1" for _ in range(b)) for _ in range(h))
    return RepresentativeChoice(**kw)


@pytest.mark.parametrize("F", [QQ, GF5])
def test_cover_uniqueness_across_catalog(F):
    seen = 0
    for L in valid_entries(F):
        mult = multiplier(L)
        h0, h1 = mult.graded_dim
        if h0 > 2 or h1 > 2 or h0 + h1 == 0:
            continue
        scaled = scaled_choice(mult, {i: 2 + i % 3 for i in range(h0 + h1)})
        for choice in (scaled, sheared_choice(mult)):
            res, e1, e2 = covers_isomorphic(L, DEFAULT_CHOICE, choice)
            assert isinstance(res, Witness), (L.name, choice)
            assert extension_homomorphism_check(e1, e2, res.value)
        seen += 1
    assert seen >= 10
