"""Integer matrices and the Smith normal form (via sympy's DomainMatrix)."""
from __future__ import annotations

from typing import Sequence

from sympy import ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_decomp


class IntMatrix:
    """Immutable rectangular integer matrix stored as a tuple of row tuples."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence[int]], ncols: int | None = None):
        rows = tuple(tuple(int(v) for v in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("IntMatrix rows must all have the same length")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls([[0] * n for _ in range(m)], n)

    @classmethod
    def diag(cls, entries) -> "IntMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def tolist(self):
        return [list(r) for r in self.rows]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix([list(c) for c in zip(*self.rows)] if self.nrows else [], self.nrows)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __add__(self, other):
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other):
        return IntMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        return IntMatrix([[-a for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows], other.ncols)

    def vecmul(self, v: Sequence[int]) -> tuple:
        """Row vector times matrix."""
        return tuple(sum(v[i] * self.rows[i][j] for i in range(self.nrows)) for j in range(self.ncols))

    def det(self) -> int:
        return int(self.to_sympy().det())

    def is_diagonal(self) -> bool:
        return all(v == 0 for i, r in enumerate(self.rows) for j, v in enumerate(r) if i != j)

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and self == self.T

    def to_sympy(self) -> Matrix:
        return Matrix(self.nrows, self.ncols, [v for r in self.rows for v in r])

    @classmethod
    def from_sympy(cls, M: Matrix) -> "IntMatrix":
        return cls(M.tolist(), M.cols)

    @staticmethod
    def vstack(mats) -> "IntMatrix":
        mats = list(mats)
        ncols = mats[0].ncols
        return IntMatrix([r for m in mats for r in m.rows], ncols)

    @staticmethod
    def hstack(mats) -> "IntMatrix":
        mats = list(mats)
        return IntMatrix([sum((m.rows[i] for m in mats), ()) for i in range(mats[0].nrows)],
                         sum(m.ncols for m in mats))

    def __repr__(self):
        return f"IntMatrix({self.tolist()})"


def smith_normal_form(M: IntMatrix):
    """Return (U, D, V) with U*M*V = D, U and V unimodular, D = diag(d1 | d2 | ...) with di >= 0."""
    m, n = M.shape
    if m == 0 or n == 0:
        return IntMatrix.identity(m), M, IntMatrix.identity(n)
    D, U, V = smith_normal_decomp(M.to_sympy(), domain=ZZ)
    D, U = D.tolist(), U.tolist()
    for i in range(min(m, n)):
        if D[i][i] < 0:
            D[i][i] = -D[i][i]
            U[i] = [-v for v in U[i]]
    U, D, V = IntMatrix(U, m), IntMatrix(D, n), IntMatrix.from_sympy(V)
    diag = [D[i, i] for i in range(min(m, n))]
    assert U @ M @ V == D
    for a, b in zip(diag, diag[1:]):
        assert (a == 0 and b == 0) or (a != 0 and b % a == 0), diag
    return U, D, V


def rank(M: IntMatrix) -> int:
    if M.nrows == 0 or M.ncols == 0:
        return 0
    return M.to_sympy().rank()


def left_kernel(M: IntMatrix) -> IntMatrix:
    """Saturated Z-basis (as rows) of {v : v*M = 0}."""
    m = M.nrows
    if M.ncols == 0:
        return IntMatrix.identity(m)
    if M.ncols > m:
        # v M = 0 iff v M M^T = 0 (M M^T is semidefinite); both kernels are saturated
        M = M @ M.T
    U, D, _ = smith_normal_form(M)
    r = sum(1 for i in range(min(D.nrows, D.ncols)) if D[i, i] != 0)
    return IntMatrix(U.rows[r:], m)


def invariant_factors(M: IntMatrix) -> list:
    """Nonzero diagonal entries of the Smith form."""
    if M.nrows == 0 or M.ncols == 0:
        return []
    _, D, _ = smith_normal_form(M)
    return [D[i, i] for i in range(min(D.shape)) if D[i, i] != 0]


def solve_in_basis(basis: IntMatrix, vectors: IntMatrix) -> IntMatrix:
    """Coordinates c (rows) with c*basis = vectors; basis rows must be a saturated basis."""
    k, n = basis.shape
    if vectors.nrows == 0:
        return IntMatrix([], k)
    # U*basis*V = [I_k | 0] for a saturated basis, so c = (v*V)[:k] * U
    U, D, V = smith_normal_form(basis)
    for i in range(k):
        if D[i, i] != 1:
            raise ValueError("basis is not saturated")
    Vs, Us = V.to_sympy(), U.to_sympy()
    out = []
    for v in vectors.rows:
        w = Matrix([list(v)]) * Vs
        tail = w[0, k:]
        if any(x != 0 for x in tail):
            raise ValueError("vector is not in the span of the basis")
        c = w[0, :k] * Us
        out.append([int(x) for x in c])
    return IntMatrix(out, k)
