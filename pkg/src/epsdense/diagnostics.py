"""Exact verification of the quantitative scaffolding: pair counts,
periodic exponential-sum averages, Gauss/Hua ratios, the explicit
lattice-point inequality, and the exponent recursion.

Averages over one period are computed in high-precision arithmetic
(mpmath) with a tracked error bound; the large lattice-ball sums use
numpy with phases reduced modulo one exactly before any rounding.
All asymptotic statements are reported as ratios, never asserted; only
the fully explicit inequalities are asserted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np
from mpmath import mp, mpc, mpf

from .errors import DimensionMismatch, GcdViolation, PreconditionViolated
from .linalg import dot
from .polymatrix import PolyMatrix, iter_integer_vectors
from .torus import TorusPointSet

_DPS = 50


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def _e(t: Fraction) -> mpc:
    """exp(2*pi*i*t) for rational t, reduced mod 1 before rounding."""
    t = _mod1(t)
    arg = mpf(2 * t.numerator) / t.denominator
    return mpc(mp.cospi(arg), mp.sinpi(arg))


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class PairCounts:
    k: int
    h: tuple[int, ...]
    H: tuple[int, ...]


def pair_counts(X: TorusPointSet, M: int) -> PairCounts:
    """h_m = #{(i,j) : m*(x_i - x_j) in Z}, exactly, via reduced denominators.

    m*(x_i - x_j) is an integer iff the reduced denominator of the
    difference divides m.
    """
    if X.dim != 1:
        raise DimensionMismatch("pair counts are defined for 1-D sets")
    if M < 1:
        raise PreconditionViolated("M must be positive")
    counts: dict[int, int] = {}
    values = [p.coords[0] for p in X]
    for x in values:
        for y in values:
            d = (x - y).denominator
            counts[d] = counts.get(d, 0) + 1
    h = []
    for m in range(1, M + 1):
        h.append(sum(c for d, c in counts.items() if m % d == 0))
    prefix = []
    total = 0
    for v in h:
        total += v
        prefix.append(total)
    return PairCounts(len(X), tuple(h), tuple(prefix))


@dataclass(frozen=True)
class WeylReport:
    period: int
    average: mpc
    modulus: mpf
    error_bound: mpf


def _periodic_mean(coeffs: list[Fraction]) -> tuple[int, mpc]:
    """Mean of e(c_0 + c_1 r + ... + c_d r^d) over one period of r.

    The period is the lcm of the denominators of the nonconstant
    coefficients; the Cesaro limit over r -> infinity equals this mean
    because all coefficients are rational.
    """
    b = 1
    for c in coeffs[1:]:
        b = _lcm(b, c.denominator)
    with mp.workdps(_DPS):
        total = mpc(0)
        for r in range(1, b + 1):
            phi = Fraction(0)
            for c in reversed(coeffs):
                phi = phi * r + c
            total += _e(phi)
        return b, total / b


def weyl_average(coeffs) -> WeylReport:
    """Cesaro average of e(c_1 r + ... + c_d r^d) (constant term excluded),
    equal to the exact mean over one period for rational coefficients."""
    coeffs = [Fraction(c) for c in coeffs]
    b, avg = _periodic_mean([Fraction(0)] + coeffs)
    with mp.workdps(_DPS):
        return WeylReport(b, avg, abs(avg), mpf(b) * mpf(10) ** (-_DPS + 2))


def hua_ratio(f_coeffs, q: int) -> float:
    """|sum_{r=1..q} e(f(r)/q)| / q^(1 - 1/d) for f with integer
    coefficients (ascending order, constant first) of degree d >= 1.

    Requires gcd(a_1, ..., a_d, q) = 1; the value is a diagnostic ratio,
    never asserted against a constant.
    """
    coeffs = [int(c) for c in f_coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    d = len(coeffs) - 1
    if d < 1:
        raise PreconditionViolated("polynomial must be nonconstant")
    if q < 1:
        raise PreconditionViolated("q must be a positive integer")
    g = q
    for a in coeffs[1:]:
        g = gcd(g, a)
    if g != 1:
        raise GcdViolation(f"gcd of nonconstant coefficients with q is {g}")
    with mp.workdps(_DPS):
        total = mpc(0)
        for r in range(1, q + 1):
            val = 0
            for c in reversed(coeffs):
                val = val * r + c
            total += _e(Fraction(val, q))
        ratio = abs(total) / mpf(q) ** (Fraction(d - 1, d))
        return float(ratio)


@dataclass(frozen=True)
class MontgomeryReport:
    lhs: Fraction
    rhs: float
    passed: bool
    m_cap: int


def _dist_to_int(x: Fraction) -> Fraction:
    f = _mod1(x)
    return min(f, 1 - f)


def montgomery_check(points, eps) -> MontgomeryReport:
    """Explicit lattice-ball inequality: k/3 <= sum over 0 < ||m|| <= M of
    |sum_i e(m . xi_i)| with M = floor(ell/eps).

    Every point must be at sup distance >= eps from the integer lattice.
    A failure on a valid instance indicates an implementation bug, not a
    mathematical possibility.
    """
    eps = Fraction(eps)
    if not (0 < eps <= Fraction(1, 2)):
        raise PreconditionViolated(f"eps must lie in (0, 1/2], got {eps}")
    pts = [tuple(Fraction(c) for c in p) for p in points]
    if not pts:
        raise PreconditionViolated("need at least one point")
    ell = len(pts[0])
    if any(len(p) != ell for p in pts):
        raise DimensionMismatch("points of different dimension")
    for p in pts:
        if max(_dist_to_int(c) for c in p) < eps:
            raise PreconditionViolated(
                f"point {p} is closer than eps to the integer lattice")
    k = len(pts)
    m_cap = int(Fraction(ell) / eps)
    rng = range(-m_cap, m_cap + 1)
    # per-axis tables of e(m * xi_ij), phases reduced mod 1 exactly
    tables = []
    for j in range(ell):
        tbl = np.empty((2 * m_cap + 1, k), dtype=np.complex128)
        for a, m in enumerate(rng):
            for i, p in enumerate(pts):
                f = _mod1(m * p[j])
                tbl[a, i] = np.exp(2j * np.pi * (f.numerator / f.denominator))
        tables.append(tbl)
    letters = "abcdefgh"[:ell]
    spec = ",".join(f"{c}i" for c in letters) + "->" + letters
    sums = np.einsum(spec, *tables, optimize=True)
    mags = np.abs(sums)
    mags[(m_cap,) * ell] = 0.0  # drop m = 0
    rhs = float(mags.sum())
    lhs = Fraction(k, 3)
    return MontgomeryReport(lhs, rhs, float(lhs) <= rhs + 1e-9, m_cap)


@dataclass(frozen=True)
class MainInequalityEntry:
    m: tuple[int, ...]
    d_tilde: int
    contribution: complex


@dataclass(frozen=True)
class MainInequalityReport:
    k: int
    ell: int
    m_cap: int
    eps: Fraction
    rhs: float
    ratio: float
    entries: tuple[MainInequalityEntry, ...]
    max_m: tuple[int, ...]
    pair_periods: tuple[tuple[int, ...], ...]


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def main_inequality_report(B: PolyMatrix, X: TorusPointSet, eps) -> MainInequalityReport:
    """Evaluate the right-hand side of the non-density inequality exactly
    through periodic averages and report the ratio k^2 / RHS.

    No assertion is made: the implied constant is unspecified.  Per
    lattice point the degree drop d~ (largest d >= 1 with B_d^t m != 0)
    is recorded; for the maximizing m the per-pair periods are reported.
    """
    eps = Fraction(eps)
    if X.dim != B.N:
        raise DimensionMismatch("set dimension differs from matrix columns")
    ell = B.L
    m_cap = _ceil(Fraction(ell) / eps)
    pts = X.coord_rows()
    k = len(pts)
    diffs = [[tuple(a - b for a, b in zip(p, q)) for q in pts] for p in pts]

    entries = []
    total = mpc(0)
    best = None  # (|contribution|, m)
    with mp.workdps(_DPS):
        for m in iter_integer_vectors(ell, m_cap, canonical=False):
            images = [B.coeffs[d].transpose().apply(m) for d in range(B.degree + 1)]
            d_tilde = 0
            for d in range(B.degree, 0, -1):
                if any(x != 0 for x in images[d]):
                    d_tilde = d
                    break
            contrib = mpc(0)
            for i in range(k):
                for j in range(k):
                    coeffs = [Fraction(dot(images[d], diffs[i][j]))
                              for d in range(B.degree + 1)]
                    _, mean = _periodic_mean(coeffs)
                    contrib += mean
            total += contrib
            entries.append(MainInequalityEntry(
                tuple(m), d_tilde, complex(contrib)))
            if best is None or abs(contrib) > best[0]:
                best = (abs(contrib), tuple(m), images)
        rhs_val = total / mpf(eps.numerator / eps.denominator) ** ell
        assert abs(rhs_val.imag) < 1e-20, "RHS must be real"
        rhs = float(rhs_val.real)

    _, max_m, images = best
    periods = []
    for i in range(k):
        row = []
        for j in range(k):
            b = 1
            for d in range(1, B.degree + 1):
                b = _lcm(b, Fraction(dot(images[d], diffs[i][j])).denominator)
            row.append(b)
        periods.append(tuple(row))
    ratio = float("inf") if rhs == 0 else k * k / rhs
    return MainInequalityReport(k, ell, m_cap, eps, rhs, ratio,
                                tuple(entries), max_m, tuple(periods))


@dataclass(frozen=True)
class ExponentTable:
    L: int
    D: int
    entries: tuple[tuple[int, int, int], ...]  # (n, c1, c2), n ascending

    def get(self, n: int) -> tuple[int, int]:
        for row in self.entries:
            if row[0] == n:
                return row[1], row[2]
        raise KeyError(n)


def exponent_table(N: int, L: int, D: int) -> ExponentTable:
    """Exponent pairs (c1, c2) for dimensions 1..N by the explicit recursion:
    base c1 = 4D(L(L+1)+1), c2 = 4D(L+1); step
    c2(n) = 4D(c1(n-1) + c2(n-1) + L + 1), c1(n) = L*c2(n) + 4D(1 + c1(n-1)).
    """
    if N < 1 or L < 1 or D < 1:
        raise PreconditionViolated("N, L, D must be >= 1")
    c1 = 4 * D * (L * (L + 1) + 1)
    c2 = 4 * D * (L + 1)
    rows = [(1, c1, c2)]
    for n in range(2, N + 1):
        c2_next = 4 * D * (c1 + c2 + L + 1)
        c1_next = L * c2_next + 4 * D * (1 + c1)
        c1, c2 = c1_next, c2_next
        rows.append((n, c1, c2))
    return ExponentTable(L, D, tuple(rows))


def corollary_ratio(s_seq, k: int, D: int) -> float:
    """(sum_{b>=2} s_b * b^(-1/D)) / k^(2 - 1/(2D)), a diagnostic ratio."""
    if k < 1 or D < 1:
        raise PreconditionViolated("k and D must be >= 1")
    total = sum(s * (b ** (-1.0 / D)) for b, s in enumerate(s_seq, start=2))
    return total / k ** (2 - 1 / (2 * D))
