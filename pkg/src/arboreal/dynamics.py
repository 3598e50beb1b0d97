"""Quadratic pairs over Q: normal forms, adjusted orbits, PCF and
exceptional-point decisions, and orbit valuations.

A pair is f = (x-a)^2 - b with basepoint alpha.  Its adjusted orbit is
c_1 = -f(a) = b and c_n = f^n(a) for n >= 2, shifted by the basepoint as
c_{1,alpha} = c_1 + alpha and c_{n,alpha} = c_n - alpha.  Conjugating by
x -> x + a gives the normal form (x^2 + c, beta) with c = -(a+b) and
beta = alpha - a; adjusted orbits agree termwise, so every decision
procedure below works on the normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .primes import is_probable_prime, smallest_prime_factor

Rational = Union[int, Fraction]


class DegeneracyError(Exception):
    """The basepoint lies in the post-critical orbit (a vanishing c_{n,alpha})."""


def _frac(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def parse_rational(s: str) -> Fraction:
    return Fraction(s.strip().replace("−", "-"))


@dataclass(frozen=True)
class QuadPair:
    """f = (x - a)^2 - b with basepoint alpha."""

    a: Fraction
    b: Fraction
    alpha: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _frac(self.a))
        object.__setattr__(self, "b", _frac(self.b))
        object.__setattr__(self, "alpha", _frac(self.alpha))

    @classmethod
    def from_normal(cls, c: Rational, alpha: Rational) -> "QuadPair":
        return cls(Fraction(0), -_frac(c), _frac(alpha))

    @classmethod
    def parse(cls, text: str) -> "QuadPair":
        """Parse "a,b,alpha", or "c,alpha" for the normal form x^2 + c."""
        parts = [p for p in text.split(",") if p.strip()]
        if len(parts) == 2:
            return cls.from_normal(parse_rational(parts[0]), parse_rational(parts[1]))
        if len(parts) == 3:
            return cls(*(parse_rational(p) for p in parts))
        raise ValueError(f"expected 'a,b,alpha' or 'c,alpha', got {text!r}")

    @property
    def critical_point(self) -> Fraction:
        return self.a

    def f(self, x: Rational) -> Fraction:
        x = _frac(x)
        return (x - self.a) ** 2 - self.b

    def normal_form(self) -> Tuple[Fraction, Fraction]:
        """(c, beta) with (x^2 + c, beta) conjugate to this pair over Q."""
        return -(self.a + self.b), self.alpha - self.a

    def describe(self) -> str:
        c, beta = self.normal_form()
        return f"(x^2 + {c}, {beta})"


@dataclass(frozen=True)
class AdjustedOrbit:
    raw: Tuple[Fraction, ...]
    adjusted: Tuple[Fraction, ...]
    degeneracy_index: Optional[int]

    def require_nondegenerate(self, upto: Optional[int] = None) -> None:
        idx = self.degeneracy_index
        if idx is not None and (upto is None or idx <= upto):
            raise DegeneracyError(f"c_{idx} equals the basepoint shift (vanishing value)")


def adjusted_orbit(pair: QuadPair, N: int) -> AdjustedOrbit:
    """First N raw and basepoint-adjusted orbit values, flagging degeneracy."""
    if N < 1:
        raise ValueError("N must be >= 1")
    raw: List[Fraction] = [pair.b]
    z = pair.f(pair.a)  # f(a) = -b
    for _ in range(N - 1):
        z = pair.f(z)
        raw.append(z)
    adjusted = [raw[0] + pair.alpha] + [c - pair.alpha for c in raw[1:]]
    degeneracy = next((i + 1 for i, c in enumerate(adjusted) if c == 0), None)
    return AdjustedOrbit(tuple(raw), tuple(adjusted), degeneracy)


def in_post_critical_orbit(pair: QuadPair) -> bool:
    """Decide whether alpha lies in {f(a), f^2(a), ...}.

    On the normal form x^2 + c, iterate the critical orbit and stop on a hit,
    a cycle, an escape past max(|c|, 2, |beta|), or (for non-integral c) a
    denominator already larger than beta's: denominators of the orbit grow as
    den(c)^(2^(n-1)), so no later term can equal beta.
    """
    c, beta = pair.normal_form()
    if c.denominator == 1 and beta.denominator > 1:
        return False
    bound = max(abs(c), 2, abs(beta))
    seen = set()
    z = Fraction(0)
    while True:
        z = z * z + c
        if z == beta:
            return True
        if z in seen:
            return False
        if abs(z) > bound:
            return False
        if c.denominator > 1 and z.denominator > beta.denominator:
            return False
        seen.add(z)


@dataclass(frozen=True)
class PCF:
    """The critical orbit is finite, entering a cycle."""

    preperiod: int
    period: int

    kind = "pcf"


@dataclass(frozen=True)
class PCI:
    """The critical orbit is infinite, with a replayable witness.

    witness "valuation": c is non-integral at `prime`, so orbit denominators
    blow up doubly exponentially.  witness "escape": |value| = |c_index|
    exceeds max(|c|, 2), after which absolute values strictly increase.
    """

    witness: str
    index: int
    value: Fraction
    prime: Optional[int] = None

    kind = "pci"


def is_pcf(pair: QuadPair) -> Union[PCF, PCI]:
    """Total decision procedure for post-critical finiteness over Q."""
    c, _ = pair.normal_form()
    if c.denominator > 1:
        return PCI("valuation", 1, -c, smallest_prime_factor(c.denominator))
    bound = max(abs(c), 2)
    seen = {Fraction(0): 0}
    z = Fraction(0)
    n = 0
    while True:
        n += 1
        z = z * z + c
        if abs(z) > bound:
            # escape soundness: past the bound the orbit strictly grows
            assert abs(z * z + c) > abs(z)
            return PCI("escape", n, z)
        if z in seen:
            return PCF(seen[z], n - seen[z])
        seen[z] = n


def verify_pcf(pair: QuadPair, verdict: PCF) -> bool:
    """Replay a PCF certificate: the orbit returns to its cycle entry."""
    c, _ = pair.normal_form()
    z = Fraction(0)
    for _ in range(verdict.preperiod):
        z = z * z + c
    entry = z
    for _ in range(verdict.period):
        z = z * z + c
    return z == entry


def is_exceptional(pair: QuadPair) -> bool:
    """Whether the full backward orbit of alpha under f is finite.

    Over Q this happens exactly for the normal form (x^2, 0), i.e. b = -a and
    alpha = a: a backward-orbit collapse needs every preimage set to be a
    single point, so x^2 = beta - c forces beta = c, and then x^2 = c - c
    forces c = 0.  Cross-checked by brute-force preimage counting in tests.
    """
    c, beta = pair.normal_form()
    return c == 0 and beta == 0


def _valuation(q: Fraction, p: int) -> int:
    if q == 0:
        raise ValueError("0 has no valuation")
    v = 0
    n = q.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = q.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


@dataclass(frozen=True)
class ValuationReport:
    c: Fraction
    p: int
    values: Tuple[int, ...]
    pattern: str  # "negative" (v(c_1) < 0) or "rigid" (v(c_1) >= 0)
    n0: Optional[int]
    conformant: bool
    mismatches: Tuple[int, ...]


def orbit_valuations(c: Rational, p: int, N: int) -> ValuationReport:
    """Exact p-adic valuations of the raw orbit of x^2 + c, with conformance.

    With v = v_p: if v(c_1) < 0 the valuations must follow v(c_n) =
    2^(n-1) v(c_1); otherwise, with n0 the first index of positive valuation,
    v(c_m) = v(c_n0) exactly when n0 | m and 0 otherwise.
    """
    c = _frac(c)
    if not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    if N < 1:
        raise ValueError("N must be >= 1")
    raw: List[Fraction] = [-c]
    z = c
    if z == 0:
        raise DegeneracyError("c_1 = 0: the orbit vanishes")
    for n in range(2, N + 1):
        z = z * z + c
        if z == 0:
            raise DegeneracyError(f"c_{n} = 0: the orbit vanishes")
        raw.append(z)
    values = tuple(_valuation(cn, p) for cn in raw)
    mismatches: List[int] = []
    if values[0] < 0:
        pattern = "negative"
        n0 = None
        for n, v in enumerate(values, start=1):
            if v != (1 << (n - 1)) * values[0]:
                mismatches.append(n)
    else:
        pattern = "rigid"
        n0 = next((n for n, v in enumerate(values, start=1) if v > 0), None)
        for n, v in enumerate(values, start=1):
            expected = 0 if n0 is None or n % n0 else values[n0 - 1]
            if v != expected:
                mismatches.append(n)
    return ValuationReport(c, p, values, pattern, n0, not mismatches, tuple(mismatches))
