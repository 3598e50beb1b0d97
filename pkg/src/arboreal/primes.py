"""Budgeted integer factorization and small prime utilities.

Orbit values double in bit length per iteration step, so unbudgeted
factorization is a hang.  Every factorization here counts elementary
operations (trial probes, rho iterations) against an explicit budget and
raises BudgetExceeded when the bound is hit; callers fall back to gcd-based
methods.  The large-factor splitter is randomized but seeded, so parallel and
repeated runs are reproducible.
"""

from __future__ import annotations

import math
import random
from typing import Dict, Iterator, List

TRIAL_LIMIT = 10**6
DEFAULT_BUDGET = 2_000_000

# Deterministic Miller-Rabin witness set for n < 3.3 * 10^24; for larger n the
# same witnesses make the test a (very strong) probable-prime check.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981


class BudgetExceeded(Exception):
    """Factorization ran out of its operation budget."""


def sieve(limit: int) -> List[int]:
    """All primes <= limit, by Eratosthenes."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(flags[p * p :: p]))
    return [i for i, f in enumerate(flags) if f]


def primes_from(start: int) -> Iterator[int]:
    """Primes >= start in increasing order."""
    n = max(2, start)
    if n > 2 and n % 2 == 0:
        n += 1
    while True:
        if is_probable_prime(n):
            yield n
        n += 1 if n == 2 else 2


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, overwhelmingly safe above."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class _Budget:
    __slots__ = ("left",)

    def __init__(self, budget: int) -> None:
        self.left = budget

    def spend(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise BudgetExceeded("factorization budget exhausted")


def _brent_rho(n: int, seed: int, budget: _Budget) -> int:
    """A nontrivial factor of odd composite n (Brent's cycle variant)."""
    for attempt in range(64):
        rng = random.Random(f"{n}:{seed}:{attempt}")
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            budget.spend(r)
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                budget.spend(min(m, r - k))
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
                budget.spend()
        if g != n:
            return g
    raise BudgetExceeded("rho failed to split %d" % n)


def _split(n: int, out: Dict[int, int], mult: int, seed: int, budget: _Budget) -> None:
    if n == 1:
        return
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + mult
        return
    root = math.isqrt(n)
    if root * root == n:
        _split(root, out, 2 * mult, seed, budget)
        return
    d = _brent_rho(n, seed, budget)
    _split(d, out, mult, seed, budget)
    _split(n // d, out, mult, seed, budget)


def factorize(n: int, budget: int = DEFAULT_BUDGET, seed: int = 0) -> Dict[int, int]:
    """Prime factorization {p: e} of |n|; n must be nonzero.

    Trial division up to 10^6, then seeded Brent rho on what remains.  Raises
    BudgetExceeded once the operation count is spent.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    meter = _Budget(budget)
    out: Dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            n //= p
            out[p] = out.get(p, 0) + 1
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)  # steps between 7,11,13,17,19,23,29,31,37...
    i = 0
    while d <= TRIAL_LIMIT and d * d <= n:
        meter.spend()
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out[d] = out.get(d, 0) + e
        d += wheel[i]
        i = (i + 1) % 8
    if n > 1:
        if d * d > n:
            out[n] = out.get(n, 0) + 1
        else:
            _split(n, out, 1, seed, meter)
    return out


def smallest_prime_factor(n: int) -> int:
    """Smallest prime factor of |n| > 1 (cheap trial division first)."""
    n = abs(n)
    if n <= 1:
        raise ValueError("need |n| > 1")
    for p in (2, 3, 5):
        if n % p == 0:
            return p
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while d * d <= n and d <= TRIAL_LIMIT:
        if n % d == 0:
            return d
        d += wheel[i]
        i = (i + 1) % 8
    if is_probable_prime(n):
        return n
    return min(factorize(n))
