"""Exact scalar fields and graded linear algebra.

Two kinds of field are supported: the rationals (entries are
:class:`fractions.Fraction` in ``object`` arrays) and prime fields GF(p) for
p >= 5 (entries are reduced integers).  Every routine works on plain numpy
arrays and takes the field as its first argument, so the same elimination
code serves both.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

# int64 products of two reduced entries summed over a short row never overflow
# below this bound; larger primes fall back to Python integers.
_INT64_PRIME_LIMIT = 1 << 20


class FieldError(ValueError):
    pass


class ContainmentError(ValueError):
    """Raised when a subspace is not contained where it has to be."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """The rationals (``p is None``) or the prime field GF(p)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is None:
            return
        if not isinstance(self.p, (int, np.integer)) or isinstance(self.p, bool):
            raise FieldError(f"field characteristic must be an integer, got {self.p!r}")
        if not _is_prime(int(self.p)):
            raise FieldError(f"{self.p} is not prime")
        if self.p in (2, 3):
            raise FieldError("characteristic 2 and 3 are not supported")
        object.__setattr__(self, "p", int(self.p))

    @classmethod
    def rationals(cls) -> "Field":
        return cls(None)

    @classmethod
    def gf(cls, p: int) -> "Field":
        return cls(p)

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def dtype(self):
        if self.p is not None and self.p < _INT64_PRIME_LIMIT:
            return np.int64
        return object

    def __str__(self) -> str:
        return "Q" if self.p is None else f"GF({self.p})"

    # -- scalars ---------------------------------------------------------

    def scalar(self, x):
        """Coerce an int, Fraction or exact string like ``"-2/7"``."""
        if isinstance(x, str):
            x = x.strip()
            if any(ch in x for ch in ".eE"):
                raise FieldError(f"coefficient {x!r} is not an exact rational")
            x = Fraction(x)
        if isinstance(x, (float, np.floating)):
            raise FieldError("floating point coefficients are not allowed")
        if self.p is None:
            return Fraction(x)
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise FieldError(f"{x} has a denominator divisible by {self.p}")
        value = x.numerator * pow(x.denominator, -1, self.p) % self.p
        return value if self.dtype is object else np.int64(value)

    def format(self, x) -> str:
        """Canonical exact string of a scalar: ``"3"``, ``"-2/7"``."""
        if self.p is None:
            return str(Fraction(x))
        return str(int(x) % self.p)

    def inv(self, x):
        if self.is_zero(x):
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / Fraction(x)
        value = pow(int(x), -1, self.p)
        return value if self.dtype is object else np.int64(value)

    @staticmethod
    def is_zero(x) -> bool:
        return x == 0

    @property
    def zero(self):
        return self.scalar(0)

    @property
    def one(self):
        return self.scalar(1)

    def elements(self) -> list:
        """All field elements (prime fields only)."""
        if self.p is None:
            raise FieldError("the rationals are infinite")
        return [self.scalar(i) for i in range(self.p)]

    # -- arrays ----------------------------------------------------------

    def array(self, data) -> np.ndarray:
        """Exact array over this field built from nested data."""
        if isinstance(data, np.ndarray) and data.dtype == self.dtype:
            # arrays of the native dtype come from this module and are exact
            return self.reduce(data.copy())
        raw = np.array(data, dtype=object)
        if self.p is None:
            out = np.empty(raw.shape, dtype=object)
            flat_in, flat_out = raw.reshape(-1), out.reshape(-1)
            for idx, x in enumerate(flat_in):
                flat_out[idx] = self.scalar(x)
            return out
        out = np.empty(raw.shape, dtype=self.dtype)
        flat_in, flat_out = raw.reshape(-1), out.reshape(-1)
        for idx, x in enumerate(flat_in):
            flat_out[idx] = int(self.scalar(x))
        return out

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            return np.full(shape, self.zero, dtype=object)
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def reduce(self, a):
        if self.p is None:
            return a
        if isinstance(a, np.ndarray):
            return a % self.p
        return a % self.p

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[-1] == 0:
            return self.zeros(a.shape[:-1] + b.shape[1:])
        return self.reduce(a @ b)

    def neg(self, a):
        return self.reduce(-a)

    def random_array(self, rng: np.random.Generator, shape, bound: int = 3) -> np.ndarray:
        """Random entries: uniform over GF(p), small integers over Q."""
        if self.p is None:
            ints = rng.integers(-bound, bound + 1, size=shape)
        else:
            ints = rng.integers(0, self.p, size=shape)
        return self.array(ints.tolist() if np.ndim(ints) else int(ints))


QQ = Field(None)


# -- elimination ------------------------------------------------------------


def rref(F: Field, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    The returned matrix has the same shape as ``M``; zero rows sit at the
    bottom and ``len(pivots)`` is the rank.
    """
    A = F.array(M)
    if A.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c] != 0)[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = F.reduce(A[r] * F.inv(A[r, c]))
        others = np.nonzero(A[:, c] != 0)[0]
        others = others[others != r]
        if others.size:
            A[others] = F.reduce(A[others] - np.outer(A[others, c], A[r]))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(F: Field, M) -> int:
    A = F.array(M)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def row_basis(F: Field, M, width: int | None = None) -> np.ndarray:
    """Canonical basis (nonzero rref rows) of the row space of ``M``."""
    A = F.array(M)
    if A.ndim == 1:
        A = A.reshape(0 if A.size == 0 else 1, -1)
    if A.shape[0] == 0:
        w = A.shape[1] if width is None else width
        return F.zeros((0, w))
    R, piv = rref(F, A)
    return R[: len(piv)]


def kernel(F: Field, M) -> np.ndarray:
    """Rows spanning ``{v : M v = 0}``, one per free column."""
    A = F.array(M)
    rows, cols = A.shape
    if rows == 0:
        return F.eye(cols)
    R, piv = rref(F, A)
    free = [c for c in range(cols) if c not in set(piv)]
    K = F.zeros((len(free), cols))
    for i, f in enumerate(free):
        K[i, f] = F.one
        for r, pc in enumerate(piv):
            K[i, pc] = F.neg(R[r, f])
    return K


def solve(F: Field, A, b) -> np.ndarray | None:
    """One solution of ``A x = b`` or ``None`` when the system is inconsistent.

    ``b`` may be a vector or a matrix of right-hand sides (solved column-wise).
    """
    A = F.array(A)
    b = F.array(b)
    vector = b.ndim == 1
    B = b.reshape(-1, 1) if vector else b
    rows, cols = A.shape
    if rows == 0:
        if np.any(B != 0):
            return None
        x = F.zeros((cols, B.shape[1]))
        return x[:, 0] if vector else x
    aug = np.concatenate([A, B], axis=1)
    R, piv = rref(F, aug)
    if any(p >= cols for p in piv):
        return None
    x = F.zeros((cols, B.shape[1]))
    for r, pc in enumerate(piv):
        x[pc] = R[r, cols:]
    return x[:, 0] if vector else x


def inverse(F: Field, M) -> np.ndarray:
    A = F.array(M)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, piv = rref(F, np.concatenate([A, F.eye(n)], axis=1))
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise np.linalg.LinAlgError("matrix is singular")
    return R[:, n:]


def coordinates(F: Field, basis_rows, vectors) -> np.ndarray:
    """Coordinates of ``vectors`` (rows) in the basis given by ``basis_rows``.

    Raises :class:`ContainmentError` when some vector is outside the span.
    """
    B = F.array(basis_rows)
    V = F.array(vectors)
    single = V.ndim == 1
    V2 = V.reshape(1, -1) if single else V
    if V2.shape[0] == 0:
        return F.zeros((0, B.shape[0]))
    if B.shape[0] == 0:
        if np.any(V2 != 0):
            raise ContainmentError("vector outside the zero subspace")
        out = F.zeros((V2.shape[0], 0))
        return out[0] if single else out
    x = solve(F, B.T, V2.T)
    if x is None:
        raise ContainmentError("vector outside the span of the basis")
    return x.T[0] if single else x.T


def in_span(F: Field, basis_rows, v) -> bool:
    try:
        coordinates(F, basis_rows, v)
    except ContainmentError:
        return False
    return True


def reduce_modulo(F: Field, R: np.ndarray, pivots: Sequence[int], V) -> np.ndarray:
    """Clear the pivot columns of rows of ``V`` using rref rows ``R``."""
    V = F.array(V).copy()
    for r, pc in enumerate(pivots):
        coef = V[:, pc].copy()
        if np.any(coef != 0):
            V = F.reduce(V - np.outer(coef, R[r]))
    return V


# -- graded subspaces -------------------------------------------------------


def parity_mask(dim: tuple[int, int]) -> np.ndarray:
    m, n = dim
    return np.array([0] * m + [1] * n, dtype=np.int64)


def _as_rows(a: np.ndarray, width: int) -> np.ndarray:
    if a.ndim == 2:
        return a
    return a.reshape(-1, width) if width else a.reshape(0, 0)


@dataclass(frozen=True, eq=False)
class GradedSubspace:
    """A parity-split subspace of a graded coordinate space of dimension (m|n).

    ``even`` and ``odd`` hold canonical (rref) basis rows in ambient
    coordinates; even rows vanish on odd coordinates and vice versa.
    """

    field: Field
    ambient: tuple[int, int]
    even: np.ndarray
    odd: np.ndarray

    def __post_init__(self):
        F = self.field
        N = sum(self.ambient)
        m = self.ambient[0]
        even = row_basis(F, _as_rows(F.array(self.even), N), N)
        odd = row_basis(F, _as_rows(F.array(self.odd), N), N)
        if np.any(even[:, m:] != 0):
            raise ValueError("even basis has odd coordinates")
        if np.any(odd[:, :m] != 0):
            raise ValueError("odd basis has even coordinates")
        even.setflags(write=False)
        odd.setflags(write=False)
        object.__setattr__(self, "even", even)
        object.__setattr__(self, "odd", odd)

    # construction

    @classmethod
    def from_vectors(cls, F: Field, ambient, vectors) -> "GradedSubspace":
        """Smallest graded subspace containing ``vectors``.

        Each vector is split into its even and odd parts, which is exact for
        homogeneous vectors and for vectors already in a graded subspace.
        """
        N = sum(ambient)
        V = F.array(vectors).reshape(-1, N) if N else F.zeros((0, 0))
        m = ambient[0]
        ev = V.copy()
        ev[:, m:] = F.zero
        od = V.copy()
        od[:, :m] = F.zero
        return cls(F, tuple(ambient), ev, od)

    @classmethod
    def zero(cls, F: Field, ambient) -> "GradedSubspace":
        N = sum(ambient)
        return cls(F, tuple(ambient), F.zeros((0, N)), F.zeros((0, N)))

    @classmethod
    def whole(cls, F: Field, ambient) -> "GradedSubspace":
        return cls.from_vectors(F, ambient, F.eye(sum(ambient)))

    # queries

    @property
    def dim(self) -> tuple[int, int]:
        return (self.even.shape[0], self.odd.shape[0])

    @property
    def total_dim(self) -> int:
        return sum(self.dim)

    @property
    def basis(self) -> np.ndarray:
        """Even rows followed by odd rows."""
        return np.concatenate([self.even, self.odd], axis=0)

    def contains_vector(self, v) -> bool:
        return in_span(self.field, self.basis, v)

    def contains(self, other: "GradedSubspace") -> bool:
        self._check(other)
        return all(self.contains_vector(v) for v in other.basis)

    def coordinates(self, vectors) -> np.ndarray:
        return coordinates(self.field, self.basis, vectors)

    def annihilator(self) -> np.ndarray:
        """Rows ``a`` with ``a . v = 0`` for every ``v`` in the subspace."""
        N = sum(self.ambient)
        if self.total_dim == 0:
            return self.field.eye(N)
        return kernel(self.field, self.basis)

    def _check(self, other: "GradedSubspace"):
        if self.field != other.field or tuple(self.ambient) != tuple(other.ambient):
            raise ValueError("subspaces live in different ambient spaces")

    def __eq__(self, other):
        if not isinstance(other, GradedSubspace):
            return NotImplemented
        return (
            self.field == other.field
            and tuple(self.ambient) == tuple(other.ambient)
            and self.even.shape == other.even.shape
            and self.odd.shape == other.odd.shape
            and bool(np.all(self.even == other.even))
            and bool(np.all(self.odd == other.odd))
        )

    def __hash__(self):
        return hash((self.field, tuple(self.ambient), self.dim))

    def __repr__(self):
        return f"GradedSubspace(dim={self.dim[0]}|{self.dim[1]} in {self.ambient[0]}|{self.ambient[1]})"


def subspace_sum(U: GradedSubspace, W: GradedSubspace) -> GradedSubspace:
    U._check(W)
    return GradedSubspace(
        U.field,
        U.ambient,
        np.concatenate([U.even, W.even]),
        np.concatenate([U.odd, W.odd]),
    )


def _intersect_rows(F: Field, A: np.ndarray, B: np.ndarray, width: int) -> np.ndarray:
    if A.shape[0] == 0 or B.shape[0] == 0:
        return F.zeros((0, width))
    stacked = np.concatenate([A, F.neg(B)], axis=0)
    K = kernel(F, stacked.T)
    if K.shape[0] == 0:
        return F.zeros((0, width))
    return F.matmul(K[:, : A.shape[0]], A)


def subspace_intersect(U: GradedSubspace, W: GradedSubspace) -> GradedSubspace:
    U._check(W)
    F = U.field
    N = sum(U.ambient)
    return GradedSubspace(
        F,
        U.ambient,
        _intersect_rows(F, U.even, W.even, N),
        _intersect_rows(F, U.odd, W.odd, N),
    )


def complement_rows(F: Field, U: np.ndarray, V: np.ndarray, width: int) -> np.ndarray:
    """Rows spanning a complement of ``row(U)`` inside ``row(V)`` (``U <= V`` assumed)."""
    if U.shape[0] == 0:
        return V.copy()
    R, piv = rref(F, U)
    reduced = reduce_modulo(F, R[: len(piv)], piv, V)
    return row_basis(F, reduced, width)


def graded_complement(U: GradedSubspace, V: GradedSubspace) -> GradedSubspace:
    """Deterministic graded complement ``W`` of ``U`` inside ``V``.

    ``W`` is spanned by the basis of ``V`` reduced modulo the echelon form of
    ``U``; it vanishes on ``U``'s pivot columns, so inside the whole space it
    is spanned by the standard vectors at non-pivot columns.
    """
    U._check(V)
    if not V.contains(U):
        raise ContainmentError("U is not contained in V")
    F = U.field
    N = sum(U.ambient)
    return GradedSubspace(
        F,
        U.ambient,
        complement_rows(F, U.even, V.even, N),
        complement_rows(F, U.odd, V.odd, N),
    )


def is_block_diagonal(matrix: np.ndarray, source: tuple[int, int], target: tuple[int, int]) -> bool:
    sm, tm = source[0], target[0]
    return not (np.any(matrix[:tm, sm:] != 0) or np.any(matrix[tm:, :sm] != 0))


@dataclass(frozen=True, eq=False)
class GradedLinearMap:
    """An even linear map between graded coordinate spaces.

    ``matrix`` has shape ``(target total, source total)`` and acts on column
    vectors; it must not mix parities.
    """

    field: Field
    source: tuple[int, int]
    target: tuple[int, int]
    matrix: np.ndarray

    def __post_init__(self):
        F = self.field
        shape = (sum(self.target), sum(self.source))
        M = F.array(self.matrix).reshape(shape)
        if not is_block_diagonal(M, self.source, self.target):
            raise ValueError("map does not preserve parity")
        M.setflags(write=False)
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))
        object.__setattr__(self, "matrix", M)

    @classmethod
    def identity(cls, F: Field, dim) -> "GradedLinearMap":
        return cls(F, dim, dim, F.eye(sum(dim)))

    @classmethod
    def zero(cls, F: Field, source, target) -> "GradedLinearMap":
        return cls(F, source, target, F.zeros((sum(target), sum(source))))

    def __call__(self, v) -> np.ndarray:
        return self.field.matmul(self.matrix, self.field.array(v))

    def __matmul__(self, other: "GradedLinearMap") -> "GradedLinearMap":
        """Composition ``self after other``."""
        if self.source != other.target:
            raise ValueError("cannot compose maps with mismatched dimensions")
        return GradedLinearMap(self.field, other.source, self.target, self.field.matmul(self.matrix, other.matrix))

    def blocks(self) -> tuple[np.ndarray, np.ndarray]:
        sm, tm = self.source[0], self.target[0]
        return self.matrix[:tm, :sm], self.matrix[tm:, sm:]

    def is_bijective(self) -> bool:
        if self.source != self.target:
            return False
        even, odd = self.blocks()
        F = self.field
        return rank(F, even) == self.source[0] and rank(F, odd) == self.source[1]

    def inverse(self) -> "GradedLinearMap":
        if not self.is_bijective():
            raise np.linalg.LinAlgError("map is not invertible")
        return GradedLinearMap(self.field, self.target, self.source, inverse(self.field, self.matrix))

    def image(self) -> GradedSubspace:
        return GradedSubspace.from_vectors(self.field, self.target, self.matrix.T)

    def kernel(self) -> GradedSubspace:
        return GradedSubspace.from_vectors(self.field, self.source, kernel(self.field, self.matrix))

    def __eq__(self, other):
        if not isinstance(other, GradedLinearMap):
            return NotImplemented
        return (
            self.field == other.field
            and self.source == other.source
            and self.target == other.target
            and bool(np.all(self.matrix == other.matrix))
        )

    def __hash__(self):
        return hash((self.field, self.source, self.target))

    def __repr__(self):
        s, t = self.source, self.target
        return f"GradedLinearMap({s[0]}|{s[1]} -> {t[0]}|{t[1]})"


def direct_sum_layout(a: tuple[int, int], b: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    """Positions of the two summands' coordinates inside ``a (+) b``.

    Even coordinates of both summands come first, then odd ones, so the
    result is again in the (even | odd) convention.
    """
    a0, a1 = a
    b0, b1 = b
    first = list(range(a0)) + list(range(a0 + b0, a0 + b0 + a1))
    second = list(range(a0, a0 + b0)) + list(range(a0 + b0 + a1, a0 + b0 + a1 + b1))
    return np.array(first, dtype=np.int64), np.array(second, dtype=np.int64)


def block_sum_map(f: GradedLinearMap, g: GradedLinearMap) -> GradedLinearMap:
    """``f (+) g`` acting on direct sums laid out by :func:`direct_sum_layout`."""
    F = f.field
    src = (f.source[0] + g.source[0], f.source[1] + g.source[1])
    tgt = (f.target[0] + g.target[0], f.target[1] + g.target[1])
    s1, s2 = direct_sum_layout(f.source, g.source)
    t1, t2 = direct_sum_layout(f.target, g.target)
    M = F.zeros((sum(tgt), sum(src)))
    M[np.ix_(t1, s1)] = f.matrix
    M[np.ix_(t2, s2)] = g.matrix
    return GradedLinearMap(F, src, tgt, M)


def stack_columns(F: Field, columns: Iterable[np.ndarray], height: int) -> np.ndarray:
    cols = list(columns)
    if not cols:
        return F.zeros((height, 0))
    return np.stack(cols, axis=1)
