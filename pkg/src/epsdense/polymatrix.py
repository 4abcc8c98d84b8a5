"""Polynomial matrices over Z[x], the two dilation conditions, and the
rank decomposition A(x) = T * B(x) used by the search engines."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConditionBViolated, DegenerateInput, DimensionMismatch
from .linalg import (
    MatQ,
    MatZ,
    adjugate_and_det,
    det,
    dot,
    kernel_basis,
    rank,
    solve_rational,
)


@dataclass(frozen=True)
class PolyMatrix:
    """A(x) = A_0 + x*A_1 + ... + x^D*A_D with integer coefficient matrices.

    D is the declared degree bound; the effective degree is the largest d
    with a nonzero A_d.
    """

    L: int
    N: int
    coeffs: tuple[MatZ, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise DimensionMismatch("need at least the constant coefficient")
        for c in self.coeffs:
            if (c.rows, c.cols) != (self.L, self.N):
                raise DimensionMismatch("coefficient matrix of wrong shape")

    @classmethod
    def from_coeffs(cls, coeffs) -> "PolyMatrix":
        coeffs = tuple(coeffs)
        return cls(coeffs[0].rows, coeffs[0].cols, coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def effective_degree(self) -> int:
        for d in range(self.degree, -1, -1):
            if not self.coeffs[d].is_zero():
                return d
        return 0

    @property
    def constant_part(self) -> MatZ:
        return self.coeffs[0]

    def nonconstant_coeffs(self) -> tuple[MatZ, ...]:
        return self.coeffs[1:]

    def nonconstant_sup_norm(self) -> int:
        return max((c.sup_norm() for c in self.coeffs[1:]), default=0)

    def nonconstant_is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs[1:])

    def vstack_nonconstant(self) -> MatZ:
        """Vertical stack of A_1, ..., A_D ((D*L) x N)."""
        rows = []
        for c in self.coeffs[1:]:
            rows.extend(c.row_list())
        return MatZ.from_rows(rows) if rows else MatZ.zeros(0, self.N)

    def hstack_nonconstant(self) -> MatZ:
        """Horizontal block [A_1 ... A_D] (L x (D*N))."""
        rows = []
        for i in range(self.L):
            row = []
            for c in self.coeffs[1:]:
                row.extend(c.row(i))
            rows.append(row)
        return MatZ.from_rows(rows) if self.degree >= 1 else MatZ.zeros(self.L, 0)


def evaluate(A: PolyMatrix, n: int) -> MatZ:
    """A(n) by Horner evaluation, exact."""
    acc = A.coeffs[-1]
    for d in range(A.degree - 1, -1, -1):
        acc = acc.scale(n).add(A.coeffs[d])
    return acc


def check_condition_a(A: PolyMatrix) -> bool:
    """True iff the columns of the nonconstant part are Q-linearly
    independent, i.e. the vertical stack of A_1..A_D has full column rank."""
    stack = A.vstack_nonconstant()
    if stack.rows == 0:
        return A.N == 0
    return rank(stack.to_matq()) == A.N


@dataclass(frozen=True)
class CondBVerdict:
    """Three-valued verdict for the constant-part compatibility condition."""

    status: str  # "holds" | "fails" | "unknown"
    certificate: tuple[Fraction, ...] | None = None
    witness_v: tuple[int, ...] | None = None
    witness_w: tuple[int, ...] | None = None
    search_bound: int | None = None

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    @property
    def fails(self) -> bool:
        return self.status == "fails"


@dataclass(frozen=True)
class ConditionReport:
    cond_a: bool
    cond_b: CondBVerdict
    notes: str = ""


def iter_integer_vectors(n: int, bound: int, canonical: bool = True):
    """Nonzero integer vectors of length n with sup norm <= bound, in order
    of increasing sup norm then lexicographic.

    With canonical=True only one of {w, -w} is produced (first nonzero
    entry positive); the conditions tested against these vectors are
    invariant under sign flip.
    """
    for s in range(1, bound + 1):
        for w in itertools.product(range(-s, s + 1), repeat=n):
            if max(abs(x) for x in w) != s:
                continue
            if canonical:
                lead = next(x for x in w if x != 0)
                if lead < 0:
                    continue
            yield w


def _span_coefficients(vectors, target):
    """Coefficients c with sum(c_i * vectors[i]) = target, or None."""
    if not vectors:
        return None if any(x != 0 for x in target) else ()
    cols = MatQ.from_rows(list(zip(*vectors)))
    return solve_rational(cols, target)


def _refuting_v(nonconstant_images, constant_image):
    """Integer v with v . u_d = 0 for all nonconstant images and
    v . u_0 != 0; assumes constant_image is outside their span."""
    rows = [list(u) for u in nonconstant_images]
    if not rows:
        rows = [[0] * len(constant_image)]
    for v in kernel_basis(MatQ.from_rows(rows)):
        if dot(v, constant_image) != 0:
            return tuple(int(x) for x in v)
    raise AssertionError("span test and kernel search disagree")


def check_condition_b(A: PolyMatrix, height_bound: int = 10) -> CondBVerdict:
    """Decide, three-valuedly, whether every pair (v, w) annihilating the
    nonconstant coefficients also annihilates the constant one.

    Stage 1 (sufficient): A_0 in the Q-span of A_1..A_D as flat vectors.
    Stage 2 (exact for N = 1): the condition reduces to column-span
    membership, which stage 1 already decided, so a refutation is built.
    Stage 3: bounded search over integer w; for each w the condition is
    equivalent to A_0 w lying in span{A_1 w, ..., A_D w}.
    """
    flat_target = [Fraction(x) for x in A.coeffs[0].entries]
    flat_vectors = [[Fraction(x) for x in c.entries] for c in A.coeffs[1:]]
    cert = _span_coefficients(flat_vectors, flat_target)
    if cert is not None:
        return CondBVerdict("holds", certificate=tuple(cert))

    if A.N == 1:
        v = _refuting_v([c.col(0) for c in A.coeffs[1:]], A.coeffs[0].col(0))
        w = (1,)
        _verify_fails_witness(A, v, w)
        return CondBVerdict("fails", witness_v=v, witness_w=w)

    for w in iter_integer_vectors(A.N, height_bound):
        images = [c.apply(w) for c in A.coeffs[1:]]
        target = A.coeffs[0].apply(w)
        if _span_coefficients([list(u) for u in images], list(target)) is None:
            v = _refuting_v(images, target)
            _verify_fails_witness(A, v, w)
            return CondBVerdict("fails", witness_v=v, witness_w=tuple(w))
    return CondBVerdict("unknown", search_bound=height_bound)


def _verify_fails_witness(A: PolyMatrix, v, w):
    for c in A.coeffs[1:]:
        if dot(v, c.apply(w)) != 0:
            raise AssertionError("refutation witness fails v.A_d w = 0")
    if dot(v, A.coeffs[0].apply(w)) == 0:
        raise AssertionError("refutation witness has v.A_0 w = 0")


def condition_report(A: PolyMatrix, height_bound: int = 10) -> ConditionReport:
    a = check_condition_a(A)
    b = check_condition_b(A, height_bound)
    notes = []
    if not a:
        notes.append("nonconstant columns are Q-linearly dependent")
    if b.fails:
        notes.append("constant part escapes the nonconstant span on a witness pair")
    elif b.status == "unknown":
        notes.append(f"no refutation up to height {height_bound}; condition not decided")
    return ConditionReport(a, b, "; ".join(notes))


@dataclass(frozen=True)
class Decomposition:
    """A(x) = T * B(x) with B built from a maximal independent row set of
    the nonconstant part; q*T is integral."""

    ell: int
    T: MatQ
    B: PolyMatrix
    q: int
    row_indices: tuple[int, ...]

    def qT(self) -> MatZ:
        scaled = self.T.scale(self.q)
        return MatZ(scaled.rows, scaled.cols,
                    tuple(int(x) for x in scaled.entries))


def decompose(A: PolyMatrix) -> Decomposition:
    """Factor A(x) = T * B(x) through a maximal set of independent rows.

    Raises DegenerateInput when the nonconstant part vanishes, and
    ConditionBViolated when the constant part cannot be reconstructed
    (which certifies that the span condition fails for this matrix).
    """
    if A.nonconstant_is_zero():
        raise DegenerateInput("nonconstant part is zero")
    hstack = A.hstack_nonconstant()

    selected: list[int] = []
    for i in range(A.L):
        candidate = selected + [i]
        sub = MatZ.from_rows([hstack.row_list()[r] for r in candidate])
        if rank(sub.to_matq()) == len(candidate):
            selected.append(i)
    ell = len(selected)

    b_coeffs = [MatZ.from_rows([c.row_list()[r] for r in selected]) for c in A.coeffs]
    B = PolyMatrix.from_coeffs(b_coeffs)
    b_stack = MatZ.from_rows([hstack.row_list()[r] for r in selected])

    minor_cols = None
    for combo in itertools.combinations(range(b_stack.cols), ell):
        sub = MatZ.from_rows([[b_stack.at(i, j) for j in combo] for i in range(ell)])
        if det(sub) != 0:
            minor_cols = combo
            b_prime = sub
            break
    if minor_cols is None:
        raise AssertionError("independent rows admit no invertible minor")

    a_prime = MatZ.from_rows([[hstack.at(i, j) for j in minor_cols] for i in range(A.L)])
    adj, d = adjugate_and_det(b_prime)
    q = abs(d)
    qT_signed = a_prime.mul(adj)  # equals det(B') * T
    sign = 1 if d > 0 else -1
    T = qT_signed.scale(sign).to_matq().scale(Fraction(1, q))

    for dd in range(1, A.degree + 1):
        if _mul_qz(T, B.coeffs[dd]) != A.coeffs[dd].to_matq():
            raise AssertionError("nonconstant reconstruction failed")
    if _mul_qz(T, B.coeffs[0]) != A.coeffs[0].to_matq():
        raise ConditionBViolated(
            "constant part is not T*B_0; the input violates the span condition")

    return Decomposition(ell, T, B, q, tuple(selected))


def _mul_qz(T: MatQ, M: MatZ) -> MatQ:
    return T.mul(M.to_matq())


def restrict_through(A: PolyMatrix, H: MatZ) -> PolyMatrix:
    """C(x) = A(x) * H, computed coefficient by coefficient."""
    if A.N != H.rows:
        raise DimensionMismatch("column count of A must match row count of H")
    return PolyMatrix.from_coeffs([c.mul(H) for c in A.coeffs])
