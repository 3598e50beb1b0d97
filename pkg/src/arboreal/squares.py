"""Square classes of rationals, coprime bases, and squares in Q(sqrt(d)).

The image of a nonzero rational in Q*/Q*^2 is recorded as a sign together
with the square-free prime support.  Spans of huge orbit values avoid full
factorization through a gcd-free (pairwise coprime) basis, and squareness in
a real or imaginary quadratic field reduces to rational square tests on the
norm.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .f2 import SIGN, F2Vector, base_label, prime_label, rank
from .primes import DEFAULT_BUDGET, BudgetExceeded, factorize

Rational = Union[int, Fraction]


class DegenerateSquareWarning(UserWarning):
    """0 was tested for squareness: a vanishing orbit value, not a square."""


@dataclass(frozen=True)
class SquareClass:
    """Image of a nonzero rational in Q*/Q*^2: sign and square-free support."""

    sign: int
    primes: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if list(self.primes) != sorted(set(self.primes)):
            raise ValueError("prime support must be sorted and duplicate-free")

    @property
    def is_trivial(self) -> bool:
        return self.sign == 1 and not self.primes

    def to_vector(self) -> F2Vector:
        labels = [prime_label(p) for p in self.primes]
        if self.sign < 0:
            labels.append(SIGN)
        return F2Vector.from_labels(labels)

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        support = set(self.primes) ^ set(other.primes)
        return SquareClass(self.sign * other.sign, tuple(sorted(support)))

    def squarefree_value(self) -> int:
        return self.sign * math.prod(self.primes)

    def to_json(self) -> dict:
        return {"sign": self.sign, "primes": list(self.primes)}


ONE = SquareClass(1, ())


def _as_fraction(q: Rational) -> Fraction:
    return q if isinstance(q, Fraction) else Fraction(q)


def square_class(q: Rational, budget: int = DEFAULT_BUDGET, seed: int = 0) -> SquareClass:
    """Reduce q (nonzero) modulo rational squares.

    Raises BudgetExceeded when factoring numerator*denominator is too costly;
    callers then fall back to coprime_base.
    """
    q = _as_fraction(q)
    if q == 0:
        raise ValueError("0 has no square class")
    n = q.numerator * q.denominator
    sign = 1 if n > 0 else -1
    odd = [p for p, e in factorize(abs(n), budget, seed).items() if e % 2]
    return SquareClass(sign, tuple(sorted(odd)))


def sqrt_exact(q: Rational) -> Optional[Fraction]:
    """Exact nonnegative square root of q, or None when q is not a square."""
    q = _as_fraction(q)
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    if rn * rn != q.numerator:
        return None
    rd = math.isqrt(q.denominator)
    if rd * rd != q.denominator:
        return None
    return Fraction(rn, rd)


def is_perfect_square(q: Rational) -> bool:
    """True iff q is the square of a rational; needs no factorization.

    By convention 0 returns True but raises DegenerateSquareWarning: callers
    must treat vanishing orbit values as degeneracy, not as squares.
    """
    q = _as_fraction(q)
    if q == 0:
        warnings.warn("square test on 0 (vanishing value)", DegenerateSquareWarning)
        return True
    return sqrt_exact(q) is not None


def all_valuations_even(q: Rational) -> bool:
    """True iff v_p(q) is even at every prime, i.e. |q| is a rational square."""
    q = _as_fraction(q)
    if q == 0:
        raise ValueError("0 has no valuations")
    return sqrt_exact(abs(q)) is not None


def coprime_base(values: Sequence[int]) -> Tuple[List[int], List[F2Vector]]:
    """GCD-free basis of the inputs plus per-value GF(2) exponent vectors.

    Each value equals +- a square times the product of base elements whose
    label appears in its vector.  Base elements are pairwise coprime integers
    > 1 (not necessarily prime, not necessarily square-free); base elements
    that are perfect squares contribute no label.
    """
    for v in values:
        if v == 0:
            raise ValueError("values must be nonzero")
    base: List[int] = []
    for v in values:
        stack = [abs(v)]
        while stack:
            n = stack.pop()
            if n == 1:
                continue
            for i, b in enumerate(base):
                g = math.gcd(n, b)
                if g > 1:
                    # Splitting (n, b) into (n/g, b/g, g) keeps the generated
                    # multiplicative group and strictly shrinks the product.
                    del base[i]
                    stack.extend((g, b // g, n // g))
                    break
            else:
                base.append(n)
    base.sort()
    is_square = {b: math.isqrt(b) ** 2 == b for b in base}
    vectors = []
    for v in values:
        n = abs(v)
        labels = [SIGN] if v < 0 else []
        for b in base:
            e = 0
            while n % b == 0:
                n //= b
                e += 1
            if e % 2 and not is_square[b]:
                labels.append(base_label(b))
        if n != 1:
            raise AssertionError("coprime base does not span input %d" % v)
        vectors.append(F2Vector.from_labels(labels))
    return base, vectors


# Orbit values double in bit length per step; beyond this size trial division
# plus rho has no realistic chance and the gcd route is the only sane one.
_FACTOR_BIT_LIMIT = 512


def span_dimension(
    values: Sequence[Rational],
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    method: str = "auto",
) -> int:
    """dim of the span of the values in Q*/Q*^2.

    method: "factor" forces the prime-factorization route, "coprime" the
    gcd-free-basis route, "auto" tries factoring when every value is small
    enough for it to have a chance and falls back to the gcd route on budget
    exhaustion.  Both routes agree wherever both run.
    """
    fracs = [_as_fraction(v) for v in values]
    if any(v == 0 for v in fracs):
        raise ValueError("values must be nonzero")
    if method not in ("auto", "factor", "coprime"):
        raise ValueError(f"unknown method {method!r}")
    ints = [v.numerator * v.denominator for v in fracs]
    attempt_factoring = method == "factor" or (
        method == "auto" and all(abs(n).bit_length() <= _FACTOR_BIT_LIMIT for n in ints)
    )
    if attempt_factoring:
        try:
            return rank([square_class(v, budget, seed).to_vector() for v in fracs])
        except BudgetExceeded:
            if method == "factor":
                raise
    _, vectors = coprime_base(ints)
    return rank(vectors)


def squarefree_part(
    q: Rational, budget: int = DEFAULT_BUDGET, seed: int = 0
) -> Tuple[int, Fraction]:
    """Write q = d * m^2 with d a square-free integer; returns (d, m), m > 0."""
    cls = square_class(q, budget, seed)
    d = cls.squarefree_value()
    m = sqrt_exact(_as_fraction(q) / d)
    assert m is not None and m > 0
    return d, m


@dataclass(frozen=True)
class QuadElement:
    """a + b*sqrt(d) with a, b rational and d a square-free integer != 0, 1."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _as_fraction(self.a))
        object.__setattr__(self, "b", _as_fraction(self.b))
        if self.d != int(self.d):
            raise ValueError(f"d must be an integer: {self.d}")
        object.__setattr__(self, "d", int(self.d))
        if self.d in (0, 1):
            raise ValueError("d must differ from 0 and 1")
        if not _is_squarefree(self.d):
            raise ValueError(f"d must be square-free: {self.d}")

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def __mul__(self, other: "QuadElement") -> "QuadElement":
        if self.d != other.d:
            raise ValueError("elements live in different quadratic fields")
        return QuadElement(
            self.a * other.a + self.d * self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.d,
        )

    def __str__(self) -> str:
        return f"{self.a} + {self.b}*sqrt({self.d})"


def _is_squarefree(d: int) -> bool:
    n = abs(d)
    if n == 0:
        return False
    for p, e in factorize(n).items():
        if e > 1:
            return False
    return True


def is_square_in_quad(x: QuadElement) -> Optional[Tuple[Fraction, Fraction]]:
    """Witness (u, v) with (u + v*sqrt(d))^2 = x, or None.

    For rational x test x or x*d for rational squareness; otherwise the norm
    a^2 - d b^2 must be a rational square n^2 and one of (a +- n)/2 must be a
    rational square.
    """
    if x.is_zero:
        raise ValueError("0 is excluded from square tests")
    if x.b == 0:
        u = sqrt_exact(x.a)
        if u is not None:
            return (u, Fraction(0))
        s = sqrt_exact(x.a * x.d)
        if s is not None:
            return (Fraction(0), s / x.d)
        return None
    n = sqrt_exact(x.norm())
    if n is None:
        return None
    for t in ((x.a + n) / 2, (x.a - n) / 2):
        if t == 0:
            continue
        u = sqrt_exact(t)
        if u is None or u == 0:
            continue
        v = x.b / (2 * u)
        if u * u + x.d * v * v == x.a and 2 * u * v == x.b:
            return (u, v)
    return None


def quad_independent(xs: Sequence[QuadElement]) -> int:
    """Dimension of the span of xs in Q(sqrt(d))* mod squares.

    Tests all nonempty subset products for squareness; intended for desk
    scale (|xs| <= 10 or so).
    """
    if not xs:
        return 0
    d = xs[0].d
    for x in xs:
        if x.d != d:
            raise ValueError("elements live in different quadratic fields")
        if x.is_zero:
            raise ValueError("0 spans nothing")
    if len(xs) > 20:
        raise ValueError("subset-product search capped at 20 elements")
    k = len(xs)
    products: Dict[int, QuadElement] = {}
    square_masks = 0
    for mask in range(1, 1 << k):
        low = mask & (-mask)
        rest = mask ^ low
        prod = xs[low.bit_length() - 1] if not rest else products[rest] * xs[low.bit_length() - 1]
        products[mask] = prod
        if not prod.is_zero and is_square_in_quad(prod) is not None:
            square_masks += 1
    kernel_size = square_masks + 1
    dim_kernel = kernel_size.bit_length() - 1
    if 1 << dim_kernel != kernel_size:
        raise AssertionError("square subsets do not form a subspace")
    return k - dim_kernel
