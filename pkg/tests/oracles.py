"""Independent reference computations used to cross-check the library.

They share no code with the package beyond reading structure constants and
calling the public bracket.
"""

import itertools

import numpy as np
import sympy


def jacobi_by_hand(A):
    """Signed Jacobi sums from the public bracket only, on all basis triples."""
    out = {}
    for i, j, k in itertools.product(range(A.N), repeat=3):
        out_ijk = jacobi_at(A, i, j, k)
        if any(x != 0 for x in out_ijk):
            out[(i, j, k)] = out_ijk
    return out


def jacobi_at(A, i, j, k):
    F, par = A.field, A.parity
    x, y, z = A.basis_vector(i), A.basis_vector(j), A.basis_vector(k)
    px, py, pz = int(par[i]), int(par[j]), int(par[k])
    total = (
        (-1) ** (px * pz) * A.bracket(x, A.bracket(y, z))
        + (-1) ** (py * px) * A.bracket(y, A.bracket(z, x))
        + (-1) ** (pz * py) * A.bracket(z, A.bracket(x, y))
    )
    return tuple(F.reduce(total))


def naive_rank_mod_p(M, p):
    """Plain Gaussian elimination on Python ints."""
    rows = [[int(x) % p for x in row] for row in M]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def rank_over(M, p):
    if p is None:
        return M.rank()
    return naive_rank_mod_p([[int(x) for x in row] for row in M.tolist()], p)


def brute_force_multiplier(L, sigma):
    """(cocycle dim, coboundary dim) of degree ``sigma`` from the defining identities.

    Unknowns ``c_ij`` for every ordered basis pair; equations are the parity
    support, graded skew-symmetry and
    ``c([x,y],z) = c(x,[y,z]) - (-1)^{|x||y|} c(y,[x,z])`` on all triples.
    """
    N = L.N
    p = L.field.p
    par = [int(x) for x in L.parity]
    c = sympy.Matrix(N, N, lambda i, j: sympy.Symbol(f"c_{i}_{j}"))

    def num(x):
        return sympy.Integer(int(x)) if p else sympy.Rational(str(x))

    const = [[[num(L.constants[i, j, k]) for k in range(N)] for j in range(N)] for i in range(N)]

    def c_left(vec, j):
        return sum(vec[k] * c[k, j] for k in range(N))

    def c_right(i, vec):
        return sum(vec[k] * c[i, k] for k in range(N))

    eqs = []
    for i, j in itertools.product(range(N), repeat=2):
        if (par[i] + par[j]) % 2 != sigma:
            eqs.append(c[i, j])
        eqs.append(c[j, i] + (-1) ** (par[i] * par[j]) * c[i, j])
    for x, y, z in itertools.product(range(N), repeat=3):
        lhs = c_left(const[x][y], z)
        rhs = c_right(x, const[y][z]) - (-1) ** (par[x] * par[y]) * c_right(y, const[x][z])
        eqs.append(lhs - rhs)
    if N == 0:
        return 0, 0
    A, _ = sympy.linear_eq_to_matrix([sympy.expand(e) for e in eqs], list(c))
    zdim = N * N - rank_over(A, p)
    cols = [[const[i][j][k] for i in range(N) for j in range(N)] for k in range(N) if par[k] == sigma]
    bdim = rank_over(sympy.Matrix(cols), p) if cols else 0
    return zdim, bdim


def abelian_multiplier_formula(m, n):
    return (m * (m - 1) // 2 + n * (n + 1) // 2, m * n)


def as_tuple(v):
    return tuple(np.asarray(v).tolist())
