"""Exact rational and integer linear algebra primitives.

Everything here is exact: rationals are `fractions.Fraction`, integers are
Python ints, and no floating point is used anywhere.  Elimination follows
the Bareiss fraction-free scheme so intermediate entries stay bounded by
determinant-sized integers instead of blowing up as raw fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DimensionMismatch, ZeroVector

Rational = Fraction


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) = x*a + y*b."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


@dataclass(frozen=True)
class MatZ:
    """Dense integer matrix, row-major immutable storage."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows) -> "MatZ":
        rows = [list(r) for r in rows]
        n = len(rows[0]) if rows else 0
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), n, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "MatZ":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "MatZ":
        return cls(rows, cols, (0,) * (rows * cols))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols]

    def row_list(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "MatZ":
        return MatZ(self.cols, self.rows,
                    tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)))

    def add(self, other: "MatZ") -> "MatZ":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix sizes differ")
        return MatZ(self.rows, self.cols,
                    tuple(a + b for a, b in zip(self.entries, other.entries)))

    def scale(self, k: int) -> "MatZ":
        return MatZ(self.rows, self.cols, tuple(k * a for a in self.entries))

    def mul(self, other: "MatZ") -> "MatZ":
        if self.cols != other.rows:
            raise DimensionMismatch("inner dimensions differ")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                cj = other.col(j)
                out.append(sum(a * b for a, b in zip(ri, cj)))
        return MatZ(self.rows, other.cols, tuple(out))

    def apply(self, vec):
        """Matrix-vector product; accepts ints or Fractions, returns a tuple."""
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length differs from column count")
        return tuple(sum(self.at(i, j) * vec[j] for j in range(self.cols))
                     for i in range(self.rows))

    def sup_norm(self) -> int:
        return max((abs(a) for a in self.entries), default=0)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def to_matq(self) -> "MatQ":
        return MatQ(self.rows, self.cols, tuple(Fraction(a) for a in self.entries))


@dataclass(frozen=True)
class MatQ:
    """Dense rational matrix, row-major immutable storage."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows) -> "MatQ":
        rows = [list(r) for r in rows]
        n = len(rows[0]) if rows else 0
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), n, tuple(Fraction(x) for r in rows for x in r))

    def at(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return self.entries[j::self.cols]

    def transpose(self) -> "MatQ":
        return MatQ(self.cols, self.rows,
                    tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)))

    def mul(self, other: "MatQ") -> "MatQ":
        if self.cols != other.rows:
            raise DimensionMismatch("inner dimensions differ")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                cj = other.col(j)
                out.append(sum((a * b for a, b in zip(ri, cj)), Fraction(0)))
        return MatQ(self.rows, other.cols, tuple(out))

    def apply(self, vec):
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length differs from column count")
        return tuple(sum((self.at(i, j) * vec[j] for j in range(self.cols)), Fraction(0))
                     for i in range(self.rows))

    def scale(self, k) -> "MatQ":
        k = Fraction(k)
        return MatQ(self.rows, self.cols, tuple(k * a for a in self.entries))

    def sup_norm(self) -> Fraction:
        return max((abs(a) for a in self.entries), default=Fraction(0))

    def denominator_lcm(self) -> int:
        d = 1
        for a in self.entries:
            d = d * a.denominator // gcd(d, a.denominator)
        return d


def _integerized_rows(M: MatQ) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (rank-preserving)."""
    out = []
    for i in range(M.rows):
        row = M.row(i)
        d = 1
        for a in row:
            d = d * a.denominator // gcd(d, a.denominator)
        out.append([int(a * d) for a in row])
    return out


def _bareiss_echelon(a: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """In-place fraction-free row echelon; returns (matrix, pivot columns)."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    prev = 1
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(M: MatQ) -> int:
    """Rank over the rationals, by Bareiss fraction-free elimination."""
    if M.rows == 0 or M.cols == 0:
        return 0
    _, pivots = _bareiss_echelon(_integerized_rows(M))
    return len(pivots)


def rank_z(M: MatZ) -> int:
    return rank(M.to_matq())


def _normalize_primitive(vec) -> tuple:
    """Scale a rational vector to a primitive integer vector, first nonzero > 0."""
    d = 1
    for a in vec:
        a = Fraction(a)
        d = d * a.denominator // gcd(d, a.denominator)
    ints = [int(Fraction(a) * d) for a in vec]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if g > 1:
        ints = [a // g for a in ints]
    lead = next((a for a in ints if a != 0), 0)
    if lead < 0:
        ints = [-a for a in ints]
    return tuple(Fraction(a) for a in ints)


def kernel_basis(M: MatQ) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel {v : Mv = 0}; empty list iff the kernel is trivial.

    Vectors come back scaled to primitive integer form with positive leading
    entry, one per free column of the echelon form.
    """
    if M.cols == 0:
        return []
    if M.rows == 0:
        ech, pivots = [], []
    else:
        ech, pivots = _bareiss_echelon(_integerized_rows(M))
    pivot_set = set(pivots)
    free = [c for c in range(M.cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            p = pivots[r]
            s = sum((Fraction(ech[r][j]) * v[j] for j in range(p + 1, M.cols)),
                    Fraction(0))
            v[p] = -s / ech[r][p]
        basis.append(_normalize_primitive(v))
    return basis


def kernel_basis_z(M: MatZ) -> list[tuple[Fraction, ...]]:
    return kernel_basis(M.to_matq())


def det(M: MatZ) -> int:
    """Determinant via Bareiss; exact."""
    if M.rows != M.cols:
        raise DimensionMismatch("determinant needs a square matrix")
    n = M.rows
    if n == 0:
        return 1
    a = M.row_list()
    prev = 1
    sign = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) // prev
            a[i][c] = 0
        prev = a[c][c]
    return sign * a[n - 1][n - 1]


def adjugate_and_det(M: MatZ) -> tuple[MatZ, int]:
    """Return (adj(M), det(M)) with adj(M)*M = det(M)*I exactly.

    Works for singular input (det = 0).  Cofactor expansion; fine at desk
    scale since each minor determinant is fraction-free.
    """
    if M.rows != M.cols:
        raise DimensionMismatch("adjugate needs a square matrix")
    n = M.rows
    if n == 0:
        return M, 1
    if n == 1:
        return MatZ(1, 1, (1,)), M.at(0, 0)
    rows = M.row_list()
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[rows[r][c] for c in range(n) if c != i]
                     for r in range(n) if r != j]
            adj[i][j] = (-1) ** (i + j) * det(MatZ.from_rows(minor))
    return MatZ.from_rows(adj), det(M)


def row_hnf_with_transform(A: MatZ) -> tuple[MatZ, MatZ]:
    """Row Hermite form with its unimodular transform: returns (H, U), U*A = H.

    H is in row echelon form with positive pivots and reduced entries above
    them; U is unimodular, so rows of U facing zero rows of H are a basis of
    the left kernel lattice of A (automatically saturated).
    """
    rows, cols = A.rows, A.cols
    h = A.row_list()
    u = MatZ.identity(rows).row_list()
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if h[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            h[r], h[piv] = h[piv], h[r]
            u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, rows):
            if h[i][c] == 0:
                continue
            a, b = h[r][c], h[i][c]
            g, x, y = _xgcd(a, b)
            ag, bg = a // g, b // g
            h[r], h[i] = ([x * p + y * q for p, q in zip(h[r], h[i])],
                          [-bg * p + ag * q for p, q in zip(h[r], h[i])])
            u[r], u[i] = ([x * p + y * q for p, q in zip(u[r], u[i])],
                          [-bg * p + ag * q for p, q in zip(u[r], u[i])])
        if h[r][c] < 0:
            h[r] = [-p for p in h[r]]
            u[r] = [-p for p in u[r]]
        for i in range(r):
            q = h[i][c] // h[r][c]
            if q:
                h[i] = [p - q * s for p, s in zip(h[i], h[r])]
                u[i] = [p - q * s for p, s in zip(u[i], u[r])]
        r += 1
        if r == rows:
            break
    return MatZ.from_rows(h) if rows else A, MatZ.from_rows(u) if rows else MatZ.identity(0)


def saturated_integer_kernel(M: MatZ) -> MatZ:
    """Basis (as columns) of the saturation of the integer right kernel of M.

    Every integer v with Mv = 0 is an integer combination of the returned
    columns.  Saturation comes for free from the unimodular Hermite
    transform of the transpose.
    """
    if M.cols == 0:
        return MatZ(0, 0, ())
    h, u = row_hnf_with_transform(M.transpose())
    basis = []
    for i in range(h.rows):
        if all(x == 0 for x in h.row(i)):
            vec = list(u.row(i))
            lead = next((x for x in vec if x != 0), 0)
            if lead < 0:
                vec = [-x for x in vec]
            basis.append(vec)
    if not basis:
        return MatZ(M.cols, 0, ())
    return MatZ.from_rows(basis).transpose()


def solve_rational(M: MatQ, b) -> tuple[Fraction, ...] | None:
    """A particular rational solution of Mx = b, or None if inconsistent."""
    aug = [list(M.row(i)) + [Fraction(b[i])] for i in range(M.rows)]
    cols = M.cols
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [inv * x for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == len(aug):
            break
    for i in range(r, len(aug)):
        if aug[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for row_idx, c in enumerate(pivots):
        x[c] = aug[row_idx][cols]
    return tuple(x)


def solve_integer(M: MatZ, b) -> tuple[int, ...] | None:
    """An integral solution of Mz = b, or None if none exists."""
    h, u = row_hnf_with_transform(M.transpose())
    # M * u^t = h^t, so solve h^t y = b then z = u^t y.
    ht_rows = M.rows  # h^t is rows(M) x cols(M)
    pivots = []
    for i in range(h.rows):
        row = h.row(i)
        p = next((j for j, x in enumerate(row) if x != 0), None)
        if p is None:
            break
        pivots.append(p)
    y = [Fraction(0)] * M.cols
    for idx, p in enumerate(pivots):
        # column idx of h^t has its first nonzero entry at row p
        s = sum((Fraction(h.at(j, p)) * y[j] for j in range(idx)), Fraction(0))
        y[idx] = (Fraction(b[p]) - s) / h.at(idx, p)
    z = u.transpose().to_matq().apply(y)
    if any(x.denominator != 1 for x in z):
        return None
    z = tuple(int(x) for x in z)
    if M.apply(z) != tuple(int(v) for v in b):
        return None
    return z


def perp_basis(w) -> MatZ:
    """Integral N x (N-1) matrix of rank N-1 whose column span is the
    hyperplane orthogonal to w, with sup norm equal to that of w.

    Pivot is the last nonzero coordinate of w; column j is
    w_pivot * e_j - w_j * e_pivot.
    """
    w = [int(x) for x in w]
    n = len(w)
    p = next((i for i in range(n - 1, -1, -1) if w[i] != 0), None)
    if p is None:
        raise ZeroVector("perp_basis of the zero vector")
    cols = []
    for j in range(n):
        if j == p:
            continue
        col = [0] * n
        col[j] = w[p]
        col[p] = -w[j]
        cols.append(col)
    return MatZ.from_rows(cols).transpose()


def saturate_columns(M: MatZ) -> MatZ:
    """Saturated lattice basis (as columns) of the column span of M."""
    perp = saturated_integer_kernel(M.transpose())
    if perp.cols == 0:
        return MatZ.identity(M.rows)
    return saturated_integer_kernel(perp.transpose())


def dot(u, v):
    if len(u) != len(v):
        raise DimensionMismatch("dot product of different lengths")
    return sum(a * b for a, b in zip(u, v))
