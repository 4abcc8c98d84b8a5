"""Search engines: the polynomial-dilation scan with its structure
extraction, the inductive descent through perpendicular subtori, and the
primitive coordinate-projection scan.

All scans go in increasing n from 1 with no skipping, so returned witnesses
are minimal and runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadEpsilon,
    ConditionViolated,
    DescentStalled,
    DimensionMismatch,
    PreconditionViolated,
    ZeroVector,
)
from .linalg import MatZ, dot, perp_basis, solve_rational
from .polymatrix import (
    Decomposition,
    PolyMatrix,
    check_condition_a,
    check_condition_b,
    decompose,
    evaluate,
    iter_integer_vectors,
    restrict_through,
)
from .torus import (
    SubtorusTranslate,
    TorusPoint,
    TorusPointSet,
    apply_matrix,
    density_in_translate,
    is_eps_dense,
    normalize,
)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SearchBudget:
    n_max: int
    height_bound: int

    def __post_init__(self):
        if self.n_max < 1 or self.height_bound < 1:
            raise PreconditionViolated("budget bounds must be positive")


@dataclass(frozen=True)
class StructureWitness:
    """Affine relation w.(y - y0) = J, as an equality in R (not merely mod 1),
    holding on the subset Y; the obstruction certificate when scans fail."""

    w: tuple[int, ...]
    y0: TorusPoint
    J: int
    Y: TorusPointSet
    w_sup: int

    def __post_init__(self):
        for y in self.Y:
            if dot(self.w, tuple(a - b for a, b in zip(y.coords, self.y0.coords))) != self.J:
                raise PreconditionViolated("witness relation fails on a member")


@dataclass(frozen=True)
class Found:
    n: int
    subtorus: SubtorusTranslate
    eps_ambient: Fraction
    eps_inner: Fraction
    decomposition: Decomposition


@dataclass(frozen=True)
class Exhausted:
    n_max: int
    structure: StructureWitness | None
    decomposition: Decomposition | None = None


def _scaled_down(X: TorusPointSet, q: int) -> TorusPointSet:
    """X/q: representatives in [0,1)^N divided by q (injective)."""
    return TorusPointSet.from_points(
        [tuple(c / q for c in p.coords) for p in X], dim=X.dim)


def find_structure(X: TorusPointSet, w) -> StructureWitness:
    """Partition X by w.(x - y) in Z, take a largest class, and split it by
    the exact integer value of w.(y - y0), maximized over (y0, J).

    The returned subset has at least ceil(c / (N*||w|| + 1)) members, where
    c is the size of the largest class.
    """
    w = tuple(int(c) for c in w)
    if len(w) != X.dim:
        raise DimensionMismatch("vector length differs from set dimension")
    if all(c == 0 for c in w):
        raise ZeroVector("structure search needs a nonzero direction")
    classes: dict[Fraction, list[TorusPoint]] = {}
    for p in X:
        val = dot(w, p.coords)
        key = val - (val.numerator // val.denominator)
        classes.setdefault(key, []).append(p)
    largest = max(classes.values(), key=len)
    best = None  # (count, y0, J, members)
    for y0 in largest:
        buckets: dict[int, list[TorusPoint]] = {}
        for y in largest:
            val = dot(w, tuple(a - b for a, b in zip(y.coords, y0.coords)))
            assert val.denominator == 1
            buckets.setdefault(int(val), []).append(y)
        for j in sorted(buckets):
            if best is None or len(buckets[j]) > best[0]:
                best = (len(buckets[j]), y0, j, buckets[j])
    count, y0, j, members = best
    return StructureWitness(
        w, y0, j, TorusPointSet.from_points(members, dim=X.dim),
        max(abs(c) for c in w))


def _best_structure(X: TorusPointSet, bound: int) -> StructureWitness:
    """Best witness over all candidate directions with sup norm <= bound,
    ranked by largest relation class (ties to the earliest candidate)."""
    best = None  # (class size, w)
    for w in iter_integer_vectors(X.dim, bound):
        sizes: dict[Fraction, int] = {}
        for p in X:
            val = dot(w, p.coords)
            key = val - (val.numerator // val.denominator)
            sizes[key] = sizes.get(key, 0) + 1
        c = max(sizes.values())
        if best is None or c > best[0]:
            best = (c, w)
    return find_structure(X, best[1])


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def search_poly_dilation(A: PolyMatrix, X: TorusPointSet, eps,
                         budget: SearchBudget, enforce: bool = True):
    """Scan n = 1..n_max for a dilation A(n)X that is eps-dense in the
    subtorus carried by the decomposition of A.

    The scan runs on the reduced pair (B, X/q) at the inner level
    eps1 = eps / (ell * ||qT||), which pushes forward to the ambient claim.
    On exhaustion the best structure witness over the candidate directions
    is attached.
    """
    eps = Fraction(eps)
    if not (0 < eps < HALF):
        raise BadEpsilon(f"eps must lie in (0, 1/2), got {eps}")
    if len(X) == 0:
        raise PreconditionViolated("cannot dilate an empty set")
    if X.dim != A.N:
        raise DimensionMismatch("set dimension differs from matrix columns")
    if enforce:
        if not check_condition_a(A):
            raise ConditionViolated("nonconstant columns are Q-linearly dependent")
        if check_condition_b(A, budget.height_bound).fails:
            raise ConditionViolated("constant part escapes the nonconstant span")

    dec = decompose(A)
    qT = dec.qT()
    eps1 = eps / (dec.ell * qT.sup_norm())
    Xq = _scaled_down(X, dec.q)
    for n in range(1, budget.n_max + 1):
        img = apply_matrix(evaluate(dec.B, n), Xq)
        if is_eps_dense(img, eps1).dense:
            return Found(n, SubtorusTranslate.from_span(qT),
                         eps1 * dec.ell * qT.sup_norm(), eps1, dec)
    bound = min(budget.height_bound,
                _ceil(Fraction(dec.ell * dec.B.nonconstant_sup_norm()) / eps1))
    bound = max(bound, 1)
    return Exhausted(budget.n_max, _best_structure(Xq, bound), dec)


@dataclass(frozen=True)
class GlasnerResult:
    T: MatZ
    n: int


@dataclass(frozen=True)
class GlasnerExhausted:
    n_max: int


def glasner_scan(X: TorusPointSet, eps, target_dim: int, budget: SearchBudget):
    """Scan for a primitive integer matrix T with T*X eps-dense in the
    target torus, acting through the best coordinate projection.

    The candidate action on the projected coordinate is
    (n, (M+1)n + 1, (M+1)^2 n, ..., (M+1)^(L-1) n) with M = floor(L/eps),
    which is primitive because gcd(n, (M+1)n + 1) = 1.  For L = 1 the
    single entry is (M+1)n + 1 so results stay primitive.
    """
    eps = Fraction(eps)
    if not (0 < eps < HALF):
        raise BadEpsilon(f"eps must lie in (0, 1/2), got {eps}")
    if len(X) == 0:
        raise PreconditionViolated("cannot dilate an empty set")
    if target_dim < 1:
        raise PreconditionViolated("target dimension must be >= 1")
    L = target_dim
    proj_sizes = [len({p.coords[j] for p in X}) for j in range(X.dim)]
    i_star = max(range(X.dim), key=lambda j: (proj_sizes[j], -j))
    m_cap = int(Fraction(L) / eps)
    for n in range(1, budget.n_max + 1):
        if L == 1:
            action = [(m_cap + 1) * n + 1]
        else:
            action = [(m_cap + 1) ** r * n for r in range(L)]
            action[1] += 1
        rows = [[action[r] if j == i_star else 0 for j in range(X.dim)]
                for r in range(L)]
        T = MatZ.from_rows(rows)
        if is_eps_dense(apply_matrix(T, X), eps).dense:
            return GlasnerResult(T, n)
    return GlasnerExhausted(budget.n_max)


@dataclass(frozen=True)
class LevelTrace:
    level: int
    dim: int
    matrix: PolyMatrix
    ell: int
    q: int
    qt_sup: int
    eps_level: Fraction
    eps_scan: Fraction
    found_n: int | None
    witness: StructureWitness | None
    descent_map: MatZ | None
    preimage_count: int | None


@dataclass(frozen=True)
class DescentReport:
    outcome: str  # "found" | "exhausted"
    eps: Fraction
    n: int | None
    subtorus: SubtorusTranslate | None
    dense_subset: TorusPointSet | None
    verified: bool
    levels: tuple[LevelTrace, ...]


def inductive_descent(A: PolyMatrix, X: TorusPointSet, eps,
                      budget: SearchBudget, enforce: bool = True) -> DescentReport:
    """Full recursion: scan, and on exhaustion descend through the
    perpendicular of the structure direction until a scan succeeds or the
    dimension reaches one.

    Each descent level solves H u = y - y1 exactly for the preimages and
    divides the working epsilon by that level's q, so the unwound claim
    holds at the requested epsilon.  The final result is re-verified
    against the reported subtorus translate.
    """
    eps = Fraction(eps)
    traces: list[LevelTrace] = []
    unwind: list[tuple[int, PolyMatrix, TorusPoint]] = []
    C, pts, eps_i = A, X, eps
    level = 0
    while True:
        res = search_poly_dilation(C, pts, eps_i, budget, enforce=enforce)
        dec = res.decomposition
        qt_sup = dec.qT().sup_norm()
        eps_scan = eps_i / (dec.ell * qt_sup)
        if isinstance(res, Found):
            traces.append(LevelTrace(level, C.N, C, dec.ell, dec.q, qt_sup,
                                     eps_i, eps_scan, res.n, None, None, None))
            return _unwind_found(res, C, pts, unwind, traces, eps)
        wit = res.structure
        if C.N == 1:
            traces.append(LevelTrace(level, C.N, C, dec.ell, dec.q, qt_sup,
                                     eps_i, eps_scan, None, wit, None, None))
            return DescentReport("exhausted", eps, None, None, None, False,
                                 tuple(traces))
        if len(wit.Y) < 2:
            raise DescentStalled(
                f"structure class has {len(wit.Y)} point(s) at level {level}")
        H = perp_basis(wit.w)
        y1 = wit.Y.points[0]
        preimages = []
        for y in wit.Y:
            delta = tuple(a - b for a, b in zip(y.coords, y1.coords))
            assert dot(wit.w, delta) == 0
            u = solve_rational(H.to_matq(), delta)
            assert u is not None, "witness differences must lie in the perp span"
            preimages.append(normalize(u))
        Z = TorusPointSet.from_points(preimages, dim=C.N - 1)
        assert len(Z) == len(wit.Y)
        traces.append(LevelTrace(level, C.N, C, dec.ell, dec.q, qt_sup,
                                 eps_i, eps_scan, None, wit, H, len(Z)))
        unwind.append((dec.q, C, y1))
        C = restrict_through(C, H)
        pts = Z
        eps_i = eps_i / dec.q
        level += 1


def _unwind_found(res: Found, C: PolyMatrix, pts: TorusPointSet,
                  unwind, traces, eps: Fraction) -> DescentReport:
    n = res.n
    L = C.L
    dense = apply_matrix(evaluate(C, n), pts)
    b = tuple(Fraction(0) for _ in range(L))
    for q_i, C_i, y1 in reversed(unwind):
        shift = evaluate(C_i, n).apply(y1.coords)
        dense = TorusPointSet.from_points(
            [tuple(q_i * (s + c) for s, c in zip(shift, p.coords)) for p in dense],
            dim=L)
        b = tuple(q_i * (s + c) for s, c in zip(shift, b))
    subtorus = SubtorusTranslate.from_span(res.decomposition.qT(), normalize(b))
    verdict = density_in_translate(dense, subtorus, eps)
    return DescentReport("found", eps, n, subtorus, dense,
                         verdict.status == "dense", tuple(traces))
