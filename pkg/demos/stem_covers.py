"""Stem covers from different cocycle representatives agree.

The multiplier is computed as graded scalar 2-cocycles modulo coboundaries,
one space per parity.  A cover is the central extension built from a basis
of cocycle representatives; changing that basis (by an invertible mix and by
adding coboundaries) gives another cover, and the search finds an
isomorphism between the two that commutes with the projections.

    python3 demos/stem_covers.py
"""

from superiso import catalog
from superiso.cohomcover import (
    RepresentativeChoice,
    covers_isomorphic,
    extension_homomorphism_check,
    multiplier,
    scaled_choice,
)
from superiso.exactlin import QQ
from superiso.search import Witness
from superiso.superalg import SuperAlgebra

for L in (SuperAlgebra.abelian(QQ, 1, 1), SuperAlgebra.abelian(QQ, 2, 0), catalog.load("heisenberg-0-2")):
    mult = multiplier(L)
    h0, h1 = mult.graded_dim
    print(f"{L.name} {L.dim}: multiplier ({h0}|{h1})")
    a = scaled_choice(mult, {i: 2 for i in range(h0 + h1)})
    b = RepresentativeChoice(
        even_mix=tuple(tuple("1" if j >= i else "0" for j in range(h0)) for i in range(h0)) or None,
        odd_mix=tuple(tuple("1" if j >= i else "0" for j in range(h1)) for i in range(h1)) or None,
    )
    res, e1, e2 = covers_isomorphic(L, a, b)
    print(f"  covers of dim {e1.total.dim}, tags {sorted(e1.tags)}")
    print("  isomorphic over the base:", isinstance(res, Witness) and extension_homomorphism_check(e1, e2, res.value))
