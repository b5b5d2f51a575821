"""Slow, obviously-correct reference implementations used only by the tests."""

from __future__ import annotations

import itertools
import math

import numpy as np


def is_prime_naive(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def order_naive(p: int) -> int:
    x, r = 2 % p, 1
    while x != 1:
        x = 2 * x % p
        r += 1
    return r


def factor_naive(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def covers_naive(pairs) -> bool:
    pairs = list(pairs)
    period = math.lcm(*(m for _, m in pairs))
    return all(any((x - r) % m == 0 for r, m in pairs) for x in range(period))


def coverable_naive(moduli) -> bool:
    """Try every residue tuple."""
    moduli = list(moduli)
    if not moduli:
        return False
    for residues in itertools.product(*(range(m) for m in moduli)):
        if covers_naive(zip(residues, moduli)):
            return True
    return False


def r_naive(n: int, isprime) -> int:
    return sum(1 for k in range(1, n.bit_length() + 1) if 2**k < n and isprime(n - 2**k))


def blocked_residues_naive(m: int) -> list[int]:
    """Odd a in [1, m) with some prime of m dividing a - 2**k for every k in one period.

    Scans every candidate residue with numpy, one power of two at a time.
    """
    primes = sorted(factor_naive(m))
    odd_primes = [p for p in primes if p > 2]
    period = math.lcm(*(order_naive(p) for p in odd_primes))
    a = np.arange(1, m, 2, dtype=np.int64)
    alive = np.ones(len(a), dtype=bool)
    reduced = {p: (a % p).astype(np.int32) for p in primes}
    v = (m & -m).bit_length() - 1
    for k in range(1, period + v + 1):
        hit = np.zeros(len(a), dtype=bool)
        for p in primes:
            hit |= reduced[p] == pow(2, k, p)
        alive &= hit
    return a[alive].tolist()
