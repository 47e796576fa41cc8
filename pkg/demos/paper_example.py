"""Two superalgebras of different dimension that are isoclinic.

L has basis e1, e2 | e3 with [e1,e2] = e1 and [e3,e3] = e2; M adds a
central e3 to the even part.  Their derived algebras and central quotients
line up, so they are isoclinic, while the dimensions rule out isomorphism.
Neither table passes the graded Jacobi check, so everything below runs on
flagged input.

    python3 demos/paper_example.py
"""

from superiso import catalog
from superiso.cli import vector_json
from superiso.isoclinism import check_witness, find_isoclinism, lemma_1_10_check
from superiso.search import Witness, find_isomorphism
from superiso.superalg import center, derived, validate


def rows(F, M):
    return "\n".join("  [" + " ".join(F.format(x) for x in row) + "]" for row in M)


def show(A):
    print(f"{A.name}: dim {A.dim}")
    print("  L' basis:", [vector_json(A, v) for v in derived(A).basis])
    print("  Z  basis:", [vector_json(A, v) for v in center(A).basis])
    for i, j, k, res in validate(A).jacobi[:2]:
        print(f"  Jacobi fails on {(A.names[i], A.names[j], A.names[k])}: residual {vector_json(A, res)}")


L = catalog.load("paper-L")
M = catalog.load("paper-M")
show(L)
show(M)

res = find_isoclinism(L, M, force=True)
assert isinstance(res, Witness)
w = res.value
print("isoclinism found; square commutes:", check_witness(w), "| bracket identities:", lemma_1_10_check(w))
print("phi on L/Z(L):")
print(rows(L.field, w.phi.matrix))
print("theta on L':")
print(rows(L.field, w.theta.matrix))
print("isomorphic:", find_isomorphism(L, M, force=True))
