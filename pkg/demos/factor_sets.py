"""Rebuild an algebra from its center, central quotient and factor set.

Pick a complement of the center, read off r(a, b) = [Ta, Tb] - T[a, b] for
the section T, and rebuild the algebra on pairs (x, a).  Then take two
isoclinic stem algebras over GF(5) and glue their factor sets into an
explicit isomorphism.

    python3 demos/factor_sets.py
"""

import numpy as np

from superiso import catalog
from superiso.exactlin import Field
from superiso.factorset import (
    factor_set_from_section,
    reconstruct,
    reconstruction_isomorphism,
    stem_isomorphism_from_witness,
)
from superiso.isoclinism import find_isoclinism, is_stem
from superiso.search import Witness
from superiso.superalg import is_isomorphism, random_change_of_basis

L = catalog.load("heisenberg-1-1")
sd = factor_set_from_section(L)
r = sd.factor_set
print(f"{L.name}: quotient {r.quotient.dim}, center {r.center_space.dim}")
nonzero = [(i, j) for i in range(r.quotient.N) for j in range(r.quotient.N) if any(x != 0 for x in r.values[i, j])]
print("nonzero factor-set entries at quotient index pairs:", nonzero)

rec = reconstruct(r)
theta = reconstruction_isomorphism(L, sd, rec)
print("rebuilt algebra isomorphic via theta:", is_isomorphism(theta, rec.algebra, L))
print("copy of Z(L) is the center of the rebuilt algebra:", rec.center_equals_center())

GF5 = Field(5)
S = catalog.load_over("heisenberg-1-1", GF5)
T, _ = random_change_of_basis(S, np.random.default_rng(7))
print(f"\nover {GF5}: stem {is_stem(S)} / {is_stem(T)}")
w = find_isoclinism(S, T)
assert isinstance(w, Witness)
out = stem_isomorphism_from_witness(w.value)
print("glued map is an isomorphism:", is_isomorphism(out.isomorphism, S, T))
