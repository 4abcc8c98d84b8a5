"""Exact rational points on tori, subtorus translates, and the epsilon
density decision procedures.

Density uses closed sup-norm balls of radius eps (boxes of side 2*eps),
boundary inclusive, so every decision is exact over the rationals.  The
decision procedure scales all coordinates to a common even denominator and
recurses over the elementary arcs of the per-axis endpoint arrangement in
pure integer arithmetic.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (
    BadEpsilon,
    DimensionMismatch,
    NotInTranslate,
    PreconditionViolated,
    ZeroVector,
)
from .linalg import (
    MatQ,
    MatZ,
    adjugate_and_det,
    dot,
    rank,
    row_hnf_with_transform,
    saturate_columns,
    saturated_integer_kernel,
    solve_integer,
    solve_rational,
)

HALF = Fraction(1, 2)


def _mod1(x) -> Fraction:
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class TorusPoint:
    """A point of the torus, stored as its unique representative in [0,1)^N."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        for c in self.coords:
            if not (0 <= c < 1):
                raise PreconditionViolated(f"coordinate {c} outside [0,1)")

    @property
    def dim(self) -> int:
        return len(self.coords)


def normalize(vec) -> TorusPoint:
    """Reduce each coordinate modulo 1 into [0,1)."""
    return TorusPoint(tuple(_mod1(c) for c in vec))


@dataclass(frozen=True)
class TorusPointSet:
    dim: int
    points: tuple[TorusPoint, ...]

    def __post_init__(self):
        for p in self.points:
            if p.dim != self.dim:
                raise DimensionMismatch("point of wrong dimension in set")

    @classmethod
    def from_points(cls, pts, dim: int | None = None) -> "TorusPointSet":
        norm = []
        for p in pts:
            norm.append(p if isinstance(p, TorusPoint) else normalize(p))
        dedup = sorted(set(p.coords for p in norm))
        if dim is None:
            if not dedup:
                raise PreconditionViolated("cannot infer dimension of an empty set")
            dim = len(dedup[0])
        return cls(dim, tuple(TorusPoint(c) for c in dedup))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def coord_rows(self) -> list[tuple[Fraction, ...]]:
        return [p.coords for p in self.points]


def circ_dist(a, b) -> Fraction:
    """Distance on the circle: min(|a-b| mod 1, 1 - |a-b| mod 1)."""
    d = _mod1(Fraction(a) - Fraction(b))
    return min(d, 1 - d)


def sup_dist(p: TorusPoint, q: TorusPoint) -> Fraction:
    if p.dim != q.dim:
        raise DimensionMismatch("points of different dimension")
    return max(circ_dist(a, b) for a, b in zip(p.coords, q.coords))


def dist_to_set(p: TorusPoint, X: TorusPointSet) -> Fraction:
    return min(sup_dist(p, x) for x in X)


def apply_matrix(M: MatZ, X: TorusPointSet) -> TorusPointSet:
    """Image of a point set under an integer matrix (a torus homomorphism)."""
    return TorusPointSet.from_points(
        [normalize(M.apply(p.coords)) for p in X], dim=M.rows)


def translate_set(X: TorusPointSet, t) -> TorusPointSet:
    return TorusPointSet.from_points(
        [normalize(tuple(c + Fraction(s) for c, s in zip(p.coords, t)))
         for p in X], dim=X.dim)


@dataclass(frozen=True)
class DensityVerdict:
    dense: bool
    hole: TorusPoint | None
    epsilon: Fraction


def _covers(c: int, e: int, a: int, b: int, lam: int) -> bool:
    # some lift [c-e+k*lam, c+e+k*lam] contains [a, b]
    k = (a - c + e) // lam
    return b - c - e <= k * lam


def _uncovered(pts, ndim: int, e: int, lam: int):
    """First uncovered elementary cell center, or None when the closed balls
    of scaled radius e around pts cover the ndim-torus (Z/lam scaling)."""
    if ndim == 0:
        return None if pts else ()
    if not pts:
        return (lam // 2,) * ndim
    endpoints = sorted({v for p in pts for v in ((p[0] - e) % lam, (p[0] + e) % lam)})
    m = len(endpoints)
    for idx in range(m):
        a = endpoints[idx]
        b = endpoints[idx + 1] if idx + 1 < m else endpoints[0] + lam
        if b == a:
            continue
        rest = [p[1:] for p in pts if _covers(p[0], e, a, b, lam)]
        sub = _uncovered(rest, ndim - 1, e, lam)
        if sub is not None:
            return (((a + b) // 2) % lam,) + sub
    return None


def is_eps_dense(X: TorusPointSet, eps) -> DensityVerdict:
    """Decide exactly whether the closed eps-balls around X cover the torus.

    When they do not, the returned hole is the center of an uncovered
    elementary cell and verifies min-distance > eps exactly.
    """
    eps = Fraction(eps)
    if not (0 < eps < HALF):
        raise BadEpsilon(f"eps must lie in (0, 1/2), got {eps}")
    if len(X) == 0:
        raise PreconditionViolated("density of the empty set is undefined")
    lam0 = eps.denominator
    for p in X:
        for c in p.coords:
            lam0 = lam0 * c.denominator // gcd(lam0, c.denominator)
    lam = 2 * lam0
    pts = [tuple(int(c * lam) for c in p.coords) for p in X]
    e = int(eps * lam)
    hole_int = _uncovered(pts, X.dim, e, lam)
    if hole_int is None:
        return DensityVerdict(True, None, eps)
    hole = TorusPoint(tuple(Fraction(h % lam, lam) for h in hole_int))
    assert dist_to_set(hole, X) > eps, "internal error: hole witness failed"
    return DensityVerdict(False, hole, eps)


def covering_radius(X: TorusPointSet, tol) -> tuple[Fraction, Fraction]:
    """Rational bracket of width <= tol around inf{eps : X is eps-dense}."""
    tol = Fraction(tol)
    if tol <= 0:
        raise PreconditionViolated("tol must be positive")
    if len(X) == 0:
        raise PreconditionViolated("covering radius of the empty set is undefined")
    lo, hi = Fraction(0), HALF  # every nonempty set is 1/2-dense in sup norm
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if is_eps_dense(X, mid).dense:
            hi = mid
        else:
            lo = mid
    return lo, hi


@dataclass(frozen=True)
class SubtorusTranslate:
    """Translate b + Im(H)/Z^L of a subtorus, with H a saturated integral
    basis (as columns) of the tangent lattice."""

    ambient_dim: int
    H: MatZ
    b: TorusPoint

    def __post_init__(self):
        if self.H.rows != self.ambient_dim or self.b.dim != self.ambient_dim:
            raise DimensionMismatch("parameterization shape mismatch")
        if self.H.cols < 1:
            raise PreconditionViolated("subtorus must have dimension >= 1")
        if rank(self.H.to_matq()) != self.H.cols:
            raise PreconditionViolated("tangent basis must have full column rank")

    @classmethod
    def from_span(cls, M: MatZ, b: TorusPoint | None = None) -> "SubtorusTranslate":
        """Subtorus translate spanned by the columns of M (saturated here)."""
        H = saturate_columns(M)
        if b is None:
            b = TorusPoint((Fraction(0),) * M.rows)
        return cls(M.rows, H, b)

    @property
    def dim(self) -> int:
        return self.H.cols

    def characters(self) -> MatZ:
        return _characters(self.H)


@functools.lru_cache(maxsize=None)
def _characters(H: MatZ) -> MatZ:
    """Saturated basis (columns) of the integer vectors orthogonal to Im(H);
    these cut out the subtorus as {t : v.t in Z for all basis v}."""
    return saturated_integer_kernel(H.transpose())


def membership_in_translate(x: TorusPoint, S: SubtorusTranslate) -> bool:
    """True iff v.(x - b) is an integer for every defining character v."""
    if x.dim != S.ambient_dim:
        raise DimensionMismatch("point dimension differs from ambient dimension")
    diff = tuple(a - b for a, b in zip(x.coords, S.b.coords))
    chars = S.characters()
    for j in range(chars.cols):
        if dot(chars.col(j), diff).denominator != 1:
            return False
    return True


def project_by_vector(X: TorusPointSet, v) -> TorusPointSet:
    """{v.x mod 1 : x in X} as a one-dimensional set (deduplicated)."""
    v = [int(c) for c in v]
    if len(v) != X.dim:
        raise DimensionMismatch("vector length differs from set dimension")
    if all(c == 0 for c in v):
        raise ZeroVector("projection by the zero vector")
    return TorusPointSet.from_points(
        [(_mod1(dot(v, p.coords)),) for p in X], dim=1)


@dataclass(frozen=True)
class TranslateDensityVerdict:
    status: str  # "dense" | "not_dense" | "inconclusive"
    hole: TorusPoint | None = None
    gap: tuple[Fraction, Fraction] | None = None


def _pullback_point(x: TorusPoint, S: SubtorusTranslate) -> TorusPoint:
    """The unique u in T^d with H u = x - b modulo Z^L (H saturated)."""
    diff = tuple(a - b for a, b in zip(x.coords, S.b.coords))
    chars = S.characters()
    if chars.cols:
        targets = [dot(chars.col(j), diff) for j in range(chars.cols)]
        assert all(t.denominator == 1 for t in targets)
        k_rows = MatZ.from_rows([chars.col(j) for j in range(chars.cols)])
        z = solve_integer(k_rows, [int(t) for t in targets])
        assert z is not None, "saturated character lattice must be surjective"
        diff = tuple(d - zz for d, zz in zip(diff, z))
    u = solve_rational(S.H.to_matq(), diff)
    assert u is not None, "membership holds but no preimage found"
    return normalize(u)


def _lower_stretch(S: SubtorusTranslate) -> Fraction:
    """Crude positive lower bound on how much the parameterization can
    shrink distances, used only to report a certified gap."""
    H = S.H
    d = H.cols
    gram = H.transpose().mul(H)
    adj, g = adjugate_and_det(gram)
    pseudo = adj.mul(H.transpose()).to_matq().scale(Fraction(1, g))
    ech, u = row_hnf_with_transform(H)
    adj_u, det_u = adjugate_and_det(u)
    v = adj_u.scale(det_u)  # u is unimodular, so this is its exact inverse
    c = S.ambient_dim ** 2 * v.sup_norm() * u.sup_norm()
    return Fraction(1, d * c) / pseudo.sup_norm()


def density_in_translate(X: TorusPointSet, S: SubtorusTranslate, eps) -> TranslateDensityVerdict:
    """Three-valued density decision for X inside the translate S, using the
    ambient sup metric restricted to S.

    The Dense branch is sound via the Lipschitz push-forward of the
    parameterization; the NotDense branch returns an exactly verified hole;
    otherwise the certified gap is reported.
    """
    eps = Fraction(eps)
    if X.dim != S.ambient_dim:
        raise DimensionMismatch("set dimension differs from ambient dimension")
    for x in X:
        if not membership_in_translate(x, S):
            raise NotInTranslate(f"point {x.coords} is not in the translate")
    if S.dim == S.ambient_dim:
        verdict = is_eps_dense(X, eps)
        return TranslateDensityVerdict(
            "dense" if verdict.dense else "not_dense", verdict.hole)
    pullback = TorusPointSet.from_points(
        [_pullback_point(x, S) for x in X], dim=S.dim)
    delta = eps / (S.dim * S.H.sup_norm())
    inner = is_eps_dense(pullback, delta)
    if inner.dense:
        return TranslateDensityVerdict("dense")
    forward = normalize(tuple(
        b + h for b, h in zip(S.b.coords, S.H.apply(inner.hole.coords))))
    if dist_to_set(forward, X) > eps:
        return TranslateDensityVerdict("not_dense", forward)
    return TranslateDensityVerdict(
        "inconclusive", gap=(delta * _lower_stretch(S), eps))
