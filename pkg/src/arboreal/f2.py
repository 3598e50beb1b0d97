"""Sparse vectors over GF(2) with tagged labels, plus exact linear algebra.

One elimination kernel serves both square classes (labels: sign marker and
primes, or opaque coprime-base elements) and index vectors (labels: positive
integers).  Labels carry a fixed total order

    SIGN < Prime(2) < Prime(3) < ... < Base(...) < Index(1) < Index(2) < ...

and elimination always pivots on the smallest label, so every result is
deterministic for any input order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

_KIND_SIGN = 0
_KIND_PRIME = 1
_KIND_BASE = 2
_KIND_INDEX = 3

_KIND_NAMES = {_KIND_SIGN: "sign", _KIND_PRIME: "p", _KIND_BASE: "b", _KIND_INDEX: "i"}


class Label(NamedTuple):
    kind: int
    value: int

    def __str__(self) -> str:
        if self.kind == _KIND_SIGN:
            return "sign"
        return f"{_KIND_NAMES[self.kind]}:{self.value}"

    def __repr__(self) -> str:
        return f"Label({self})"


SIGN = Label(_KIND_SIGN, 0)


def prime_label(p: int) -> Label:
    if p < 2:
        raise ValueError(f"not a prime: {p}")
    return Label(_KIND_PRIME, p)


def base_label(b: int) -> Label:
    if b <= 1:
        raise ValueError(f"base elements must exceed 1: {b}")
    return Label(_KIND_BASE, b)


def index_label(i: int) -> Label:
    if i < 1:
        raise ValueError(f"indices are positive: {i}")
    return Label(_KIND_INDEX, i)


@dataclass(frozen=True)
class F2Vector:
    """A finite subset of labels, read as a vector of GF(2)^(labels)."""

    support: frozenset

    def __post_init__(self) -> None:
        kinds = {lab.kind for lab in self.support} - {_KIND_SIGN}
        if len(kinds) > 1:
            raise ValueError("mixed label kinds in one vector: %s" % sorted(self.support))

    @classmethod
    def from_labels(cls, labels: Iterable[Label]) -> "F2Vector":
        return cls(frozenset(labels))

    @property
    def is_zero(self) -> bool:
        return not self.support

    def sorted_labels(self) -> tuple:
        return tuple(sorted(self.support))

    def __add__(self, other: "F2Vector") -> "F2Vector":
        return F2Vector(self.support ^ other.support)

    def __len__(self) -> int:
        return len(self.support)

    def __str__(self) -> str:
        return "{" + ",".join(str(l) for l in self.sorted_labels()) + "}"

    def to_json(self) -> list:
        return [str(l) for l in self.sorted_labels()]


ZERO = F2Vector(frozenset())


class _Eliminator:
    """Gaussian elimination over GF(2), pivoting on the smallest label."""

    def __init__(self) -> None:
        # pivot label -> (reduced vector, combination as a frozenset of input indices)
        self.rows: dict = {}

    def reduce(self, vec: F2Vector, combo: frozenset) -> tuple:
        support = vec.support
        while support:
            lead = min(support)
            row = self.rows.get(lead)
            if row is None:
                return support, combo, lead
            support = support ^ row[0]
            combo = combo ^ row[1]
        return support, combo, None

    def insert(self, vec: F2Vector, index: int) -> bool:
        """Reduce and keep vec; returns True when it enlarged the span."""
        support, combo, lead = self.reduce(vec, frozenset([index]))
        if lead is None:
            return False
        self.rows[lead] = (support, combo)
        return True


def rank(vectors: Sequence[F2Vector]) -> int:
    """Dimension of the GF(2)-span of the given vectors."""
    elim = _Eliminator()
    r = 0
    for i, v in enumerate(vectors):
        if elim.insert(v, i):
            r += 1
    return r


def in_span(v: F2Vector, vectors: Sequence[F2Vector]) -> Optional[tuple]:
    """Certificate that v lies in the span of `vectors`, or None.

    The certificate is a sorted tuple of indices into `vectors` whose sum is
    exactly v; the zero vector yields the empty tuple.  Check membership with
    `is not None` (the empty certificate is falsy).
    """
    elim = _Eliminator()
    for i, w in enumerate(vectors):
        elim.insert(w, i)
    support, combo, lead = elim.reduce(v, frozenset())
    if lead is not None or support:
        return None
    return tuple(sorted(combo))
