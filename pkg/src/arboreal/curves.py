"""Hyperelliptic curves attached to progressions of orbit indices, at desk
scale: right-hand-side evaluation, the square-product point construction,
and naive bounded-height rational point search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .dynamics import QuadPair, adjusted_orbit
from .indexsets import IndexVector, is_progression
from .squares import sqrt_exact


@dataclass(frozen=True)
class CurveSpec:
    """y^2 = prod_{j=1..l} (f^(k*j + i0)(x) - alpha)."""

    pair: QuadPair
    k: int
    l: int
    i0: int

    def __post_init__(self) -> None:
        if self.k < 1 or self.l < 1 or self.i0 < 1:
            raise ValueError("k, l, i0 must be positive")

    @property
    def exponents(self) -> List[int]:
        return [self.k * j + self.i0 for j in range(1, self.l + 1)]

    @property
    def rhs_degree(self) -> int:
        return sum(1 << e for e in self.exponents)

    @property
    def genus(self) -> int:
        # hyperelliptic genus of y^2 = squarefree degree-d polynomial
        return (self.rhs_degree - 1) // 2

    def describe(self) -> str:
        factors = " * ".join(f"(f^{e}(x) - alpha)" for e in self.exponents)
        return f"y^2 = {factors} for {self.pair.describe()}"


def is_smooth(curve: CurveSpec) -> bool:
    """No repeated roots on the right-hand side.

    Each factor f^m - alpha is separable iff no adjusted-orbit value up to m
    vanishes; two factors f^(m1) - alpha, f^(m2) - alpha (m1 < m2) share a
    root iff f^(m2-m1)(alpha) = alpha, so distinct factors stay coprime as
    long as alpha is not periodic with period dividing the index gaps.
    """
    top = max(curve.exponents)
    orbit = adjusted_orbit(curve.pair, top)
    if orbit.degeneracy_index is not None and orbit.degeneracy_index <= top:
        return False
    if curve.l > 1:
        z = curve.pair.alpha
        for step in range(1, curve.k * (curve.l - 1) + 1):
            z = curve.pair.f(z)
            if step % curve.k == 0 and z == curve.pair.alpha:
                return False
    return True


def rhs_eval(curve: CurveSpec, x: Fraction) -> Fraction:
    """Exact value of the right-hand side at x."""
    x = Fraction(x)
    top = max(curve.exponents)
    wanted = set(curve.exponents)
    out = Fraction(1)
    z = x
    for m in range(1, top + 1):
        z = curve.pair.f(z)
        if m in wanted:
            out *= z - curve.pair.alpha
    return out


@dataclass(frozen=True)
class ConstructedPoint:
    curve: CurveSpec
    x: Fraction
    y: Fraction
    product: Fraction  # the adjusted-orbit product the point came from


def construct_point(
    pair: QuadPair, v: IndexVector, i0: int, k: Optional[int] = None
) -> Optional[ConstructedPoint]:
    """Rational point from a square product of adjusted-orbit values.

    The support of v must be an arithmetic progression {s, s+k, ...} with
    s >= 2 and s - k - i0 >= 0.  When the product of c_{i,alpha} over the
    support is a square y0^2, the point (f^(s-k-i0)(critical point), y0)
    lands on the curve for (k, |support|, i0), because
    f^(k*j + i0)(x0) - alpha = c_{s + k*(j-1), alpha} exactly.
    Returns None when the product is not a square.
    """
    support = tuple(v.support)
    if not support:
        raise ValueError("empty support names no curve")
    length = len(support)
    if k is None:
        if length < 2:
            raise ValueError("a singleton support needs an explicit k")
        k = support[1] - support[0]
    if not is_progression(v, k, length):
        raise ValueError("support must be an arithmetic progression")
    s = support[0]
    if s < 2:
        raise ValueError("support must start at index >= 2")
    if s - k - i0 < 0:
        raise ValueError(f"need s - k - i0 >= 0, got {s} - {k} - {i0}")
    curve = CurveSpec(pair, k, length, i0)
    orbit = adjusted_orbit(pair, support[-1])
    orbit.require_nondegenerate(support[-1])
    prod = Fraction(1)
    for i in support:
        prod *= orbit.adjusted[i - 1]
    y0 = sqrt_exact(prod)
    if y0 is None:
        return None
    steps = s - k - i0
    x0 = pair.critical_point
    for _ in range(steps):
        x0 = pair.f(x0)
    rhs = rhs_eval(curve, x0)
    assert rhs == prod, "orbit identity violated"
    return ConstructedPoint(curve, x0, y0, prod)


def naive_point_search(curve: CurveSpec, H: int) -> List[Tuple[Fraction, Fraction]]:
    """All rational points with x = p/q in lowest terms, |p| <= H, q <= H.

    Enumerates Farey-style lowest-term fractions (so each x appears once),
    tests the right-hand side for exact squareness, and returns points sorted
    by (x, y), including both square roots when y != 0.
    """
    if H < 0:
        raise ValueError("H must be nonnegative")
    points: List[Tuple[Fraction, Fraction]] = []
    for q in range(1, H + 1):
        for p in range(-H, H + 1):
            if math.gcd(abs(p), q) != 1:
                continue
            x = Fraction(p, q)
            val = rhs_eval(curve, x)
            if val < 0:
                continue
            y = sqrt_exact(val)
            if y is None:
                continue
            if y == 0:
                points.append((x, y))
            else:
                points.append((x, y))
                points.append((x, -y))
    points.sort()
    return points
