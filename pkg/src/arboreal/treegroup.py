"""Finite truncations of the automorphism group of the rooted binary tree.

Elements are portraits: one GF(2) label vector per level, where the node at
level k indexed by the integer value of its (k-1)-bit path prefix (most
significant bit = level-1 choice) swaps its two children iff its bit is set.
Acting on a leaf, bit i of the image is leaf_i XOR the label of the original
prefix of length i-1.  Composition is "right acts first":
act(compose(g, h), x) = act(g, act(h, x)).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple


class CapExceeded(Exception):
    """Subgroup closure grew past the requested cap."""


@dataclass(frozen=True)
class TreeAut:
    """Depth-n portrait; levels[k-1] is a bitmask over the 2^(k-1) level-k nodes."""

    depth: int
    levels: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ValueError("depth must be positive")
        if len(self.levels) != self.depth:
            raise ValueError("need one label vector per level")
        for k, mask in enumerate(self.levels, start=1):
            if mask < 0 or mask >> (1 << (k - 1)):
                raise ValueError(f"level {k} labels exceed {1 << (k - 1)} bits")

    @classmethod
    def identity(cls, depth: int) -> "TreeAut":
        return cls(depth, (0,) * depth)

    @classmethod
    def from_strings(cls, bits: Sequence[str]) -> "TreeAut":
        """Parse ["1", "10", "1001", ...]; char j of level k is the node-j bit."""
        levels = []
        for k, s in enumerate(bits, start=1):
            if len(s) != 1 << (k - 1) or set(s) - {"0", "1"}:
                raise ValueError(f"level {k} wants {1 << (k - 1)} bits, got {s!r}")
            mask = 0
            for j, ch in enumerate(s):
                if ch == "1":
                    mask |= 1 << j
            levels.append(mask)
        return cls(len(bits), tuple(levels))

    def to_strings(self) -> List[str]:
        return [
            "".join("1" if (self.levels[k] >> j) & 1 else "0" for j in range(1 << k))
            for k in range(self.depth)
        ]

    def label(self, level: int, node: int) -> int:
        return (self.levels[level - 1] >> node) & 1

    @property
    def is_identity(self) -> bool:
        return not any(self.levels)

    def truncate(self, depth: int) -> "TreeAut":
        if not 1 <= depth <= self.depth:
            raise ValueError("bad truncation depth")
        return TreeAut(depth, self.levels[:depth])

    def __str__(self) -> str:
        return "[" + ",".join(self.to_strings()) + "]"


def act_node(g: TreeAut, node: int, length: int) -> int:
    """Image of the level-(length+1) node `node` (a length-bit prefix) under g."""
    if length > g.depth:
        raise ValueError("prefix longer than depth")
    out = 0
    prefix = 0
    for i in range(length):
        bit = (node >> (length - 1 - i)) & 1
        image = bit ^ g.label(i + 1, prefix)
        out = (out << 1) | image
        prefix = (prefix << 1) | bit
    return out


def act(g: TreeAut, leaf: str) -> str:
    """Apply g to a leaf given as a bitstring of length depth."""
    if len(leaf) != g.depth or set(leaf) - {"0", "1"}:
        raise ValueError(f"leaf must be {g.depth} bits, got {leaf!r}")
    node = int(leaf, 2) if leaf else 0
    image = act_node(g, node, g.depth)
    return format(image, f"0{g.depth}b")


def _level_perms(g: TreeAut) -> List[List[int]]:
    """perms[m][j] = image under g of the m-bit prefix j, for m = 0..depth-1."""
    perms: List[List[int]] = [[0]]
    for m in range(1, g.depth):
        prev = perms[m - 1]
        mask = g.levels[m - 1]
        cur = [0] * (1 << m)
        for j in range(1 << m):
            parent, bit = j >> 1, j & 1
            cur[j] = (prev[parent] << 1) | (bit ^ ((mask >> parent) & 1))
        perms.append(cur)
    return perms


def compose(g: TreeAut, h: TreeAut) -> TreeAut:
    """g after h: label at node w is label_h(w) XOR label_g(h(w))."""
    if g.depth != h.depth:
        raise ValueError("depth mismatch")
    hperms = _level_perms(h)
    levels = []
    for k in range(1, g.depth + 1):
        hmask = h.levels[k - 1]
        gmask = g.levels[k - 1]
        perm = hperms[k - 1]
        mask = 0
        for j in range(1 << (k - 1)):
            bit = ((hmask >> j) & 1) ^ ((gmask >> perm[j]) & 1)
            if bit:
                mask |= 1 << j
        levels.append(mask)
    return TreeAut(g.depth, tuple(levels))


def inverse(g: TreeAut) -> TreeAut:
    """The unique h with compose(g, h) = compose(h, g) = identity."""
    levels: List[int] = []
    for k in range(1, g.depth + 1):
        partial = TreeAut(k - 1, tuple(levels[: k - 1])) if k > 1 else None
        mask = 0
        for j in range(1 << (k - 1)):
            src = act_node(partial, j, k - 1) if partial is not None else 0
            if g.label(k, src):
                mask |= 1 << j
        levels.append(mask)
    return TreeAut(g.depth, tuple(levels))


def phi(k: int, g: TreeAut) -> int:
    """Character summing the level-k labels; a homomorphism to GF(2)."""
    if not 1 <= k <= g.depth:
        raise ValueError(f"level {k} out of range 1..{g.depth}")
    return g.levels[k - 1].bit_count() & 1


def abelianization(g: TreeAut) -> Tuple[int, ...]:
    return tuple(phi(k, g) for k in range(1, g.depth + 1))


def tilde_phi(k: int, g: TreeAut) -> int:
    """Half-level character, defined on portraits with zero abelianization.

    Sums the first 2^(k-2) labels of level k, for 2 <= k <= depth.
    """
    if not 2 <= k <= g.depth:
        raise ValueError(f"level {k} out of range 2..{g.depth}")
    if any(abelianization(g)):
        raise ValueError("tilde_phi needs zero abelianization")
    half = 1 << (k - 2)
    return (g.levels[k - 1] & ((1 << half) - 1)).bit_count() & 1


def _support_of(v) -> Tuple[int, ...]:
    support = getattr(v, "support", v)
    return tuple(sorted(set(support)))


def in_Mv(g: TreeAut, v) -> bool:
    """Whether g lies in the maximal subgroup cut out by the index vector v.

    v is an index vector (or bare iterable of positive levels); membership
    means the XOR over the support of phi(i, g) vanishes.
    """
    support = _support_of(v)
    if support and support[-1] > g.depth:
        raise ValueError("support index exceeds depth")
    acc = 0
    for i in support:
        acc ^= phi(i, g)
    return acc == 0


def enumerate_group(depth: int) -> Iterator[TreeAut]:
    """All 2^(2^depth - 1) elements, in increasing portrait-mask order."""
    total_bits = (1 << depth) - 1
    widths = [1 << k for k in range(depth)]
    for mask in range(1 << total_bits):
        levels = []
        shift = 0
        for w in widths:
            levels.append((mask >> shift) & ((1 << w) - 1))
            shift += w
        yield TreeAut(depth, tuple(levels))


@dataclass(frozen=True)
class SubgroupGens:
    depth: int
    generators: Tuple[TreeAut, ...]

    def __post_init__(self) -> None:
        if not self.generators:
            raise ValueError("need at least one generator")
        for g in self.generators:
            if g.depth != self.depth:
                raise ValueError("generator depth mismatch")


def closure(gens: SubgroupGens, cap: int = 200_000) -> List[TreeAut]:
    """Breadth-first closure of the generators; deterministic sorted output."""
    seen = {TreeAut.identity(gens.depth)}
    frontier = list(seen)
    while frontier:
        new = []
        for x in frontier:
            for g in gens.generators:
                y = compose(x, g)
                if y not in seen:
                    if len(seen) >= cap:
                        raise CapExceeded(f"closure exceeded cap {cap}")
                    seen.add(y)
                    new.append(y)
        frontier = new
    return sorted(seen, key=lambda t: t.levels)


def first_nontrivial_level(gens: SubgroupGens) -> int:
    """Smallest k with a nonzero level-k label among the generators (1-based)."""
    best = None
    for g in gens.generators:
        for k, mask in enumerate(g.levels, start=1):
            if mask:
                if best is None or k < best:
                    best = k
                break
    if best is None:
        raise ValueError("trivial subgroup has no level")
    return best


def level(gens: SubgroupGens) -> int:
    """Least n such that the image of the subgroup in depth n+1 is nontrivial."""
    return first_nontrivial_level(gens) - 1


def faithful_nodes(gens: SubgroupGens) -> List[str]:
    """Nodes at distance level(gens) under which some element swaps halves.

    Every element fixes those nodes pointwise, so the level-(n+1) labels form
    a homomorphic image and checking generators suffices.
    """
    n = level(gens)
    width = 1 << n
    mask = 0
    for g in gens.generators:
        mask |= g.levels[n]
    return [format(j, f"0{n}b") if n else "" for j in range(width) if (mask >> j) & 1]


def restrict(g: TreeAut, node: str) -> TreeAut:
    """Portrait of the subtree below `node`; g must fix the node."""
    if set(node) - {"0", "1"}:
        raise ValueError(f"node must be a bitstring, got {node!r}")
    m = len(node)
    if m >= g.depth:
        raise ValueError("node too deep to leave a subtree")
    idx = int(node, 2) if node else 0
    if act_node(g, idx, m) != idx:
        raise ValueError(f"element moves node {node!r}")
    levels = []
    for k in range(1, g.depth - m + 1):
        width = 1 << (k - 1)
        block = (g.levels[m + k - 1] >> (idx * width)) & ((1 << width) - 1)
        levels.append(block)
    return TreeAut(g.depth - m, tuple(levels))


def verify_noncommutation(
    depth: int, sample: Optional[int] = None, seed: int = 0
) -> Tuple[List[Tuple[TreeAut, TreeAut]], int]:
    """Search for commuting pairs that the half-swap criterion forbids.

    Scans ordered pairs (sigma, tau) with phi_1(tau) = 1 and the class of
    sigma outside {0, class of tau}; any commuting such pair is returned as a
    counterexample.  Exhaustive for depth <= 3; beyond that (or when `sample`
    is given) a seeded random sample of pairs is examined.  Returns the
    counterexample list plus the number of ordered pairs scanned.
    """
    counterexamples: List[Tuple[TreeAut, TreeAut]] = []

    def check(sigma: TreeAut, tau: TreeAut) -> None:
        if phi(1, tau) != 1:
            return
        ab_sigma = abelianization(sigma)
        if not any(ab_sigma) or ab_sigma == abelianization(tau):
            return
        if compose(sigma, tau) == compose(tau, sigma):
            counterexamples.append((sigma, tau))

    if sample is None and depth <= 3:
        elements = list(enumerate_group(depth))
        for sigma in elements:
            for tau in elements:
                check(sigma, tau)
        return counterexamples, len(elements) ** 2

    if sample is None:
        sample = 100_000
    rng = random.Random(seed)
    total_bits = (1 << depth) - 1

    def random_element() -> TreeAut:
        mask = rng.randrange(1 << total_bits)
        levels = []
        shift = 0
        for k in range(depth):
            w = 1 << k
            levels.append((mask >> shift) & ((1 << w) - 1))
            shift += w
        return TreeAut(depth, tuple(levels))

    for _ in range(sample):
        check(random_element(), random_element())
    return counterexamples, sample
