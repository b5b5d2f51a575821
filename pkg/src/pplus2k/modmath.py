"""Exact integer arithmetic: primality, factorization, CRT and orders of 2."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import FactorizationBudgetExceeded, NonCoprimeModuli

TRIAL_DIVISION_LIMIT = 10**6
DEFAULT_RHO_BUDGET = 10**7

# Deterministic for n < 3.3e24, which covers every 64-bit integer.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_EXTRA_ROUNDS = 64  # 4**-64 == 2**-128


@dataclass(frozen=True)
class OrderedPrime:
    """An odd prime together with the multiplicative order of 2 modulo it."""

    p: int
    order: int

    @classmethod
    def of(cls, p: int) -> "OrderedPrime":
        return cls(p, mult_order_2(p))


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)


def pow_mod(base: int, exp: int, modulus: int) -> int:
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if exp < 0:
        raise ValueError("exponent must be nonnegative")
    return pow(base, exp, modulus)


@lru_cache(maxsize=1)
def small_primes() -> tuple[int, ...]:
    """All primes below TRIAL_DIVISION_LIMIT."""
    n = TRIAL_DIVISION_LIMIT
    flags = np.ones(n, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return tuple(int(p) for p in np.flatnonzero(flags))


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin test, deterministic below 2**64.

    Larger inputs get 64 extra rounds with bases drawn from a generator
    seeded by ``n`` itself, so repeated calls agree.
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < 41 * 41:
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        if not _strong_probable_prime(n, a, d, s):
            return False
    if n.bit_length() > 64:
        rng = random.Random(n)
        for _ in range(_EXTRA_ROUNDS):
            if not _strong_probable_prime(n, rng.randrange(2, n - 1), d, s):
                return False
    return True


def _rho(n: int, budget: int) -> int:
    # Brent's cycle finding with batched gcds; c walks 1, 2, 3, ... on failure.
    steps = 0
    c = 0
    while steps < budget:
        c += 1
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1 and steps < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            steps += r
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    raise FactorizationBudgetExceeded(n, budget)


def factorize(n: int, rho_budget: int = DEFAULT_RHO_BUDGET) -> Factorization:
    """Complete prime factorization, primes ascending.

    Trial division by primes below 10**6, then Pollard rho on whatever is
    left. Raises FactorizationBudgetExceeded if a cofactor survives
    ``rho_budget`` rho iterations.
    """
    if n < 1:
        raise ValueError("n must be positive")
    found: dict[int, int] = {}
    m = n
    for p in small_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    stack = [m] if m > 1 else []
    while stack:
        x = stack.pop()
        if is_prime(x):
            found[x] = found.get(x, 0) + 1
            continue
        r = math.isqrt(x)
        if r * r == x:
            stack += [r, r]
            continue
        d = _rho(x, rho_budget)
        stack += [d, x // d]
    return Factorization(n, tuple(sorted(found.items())))


def crt(congruences) -> tuple[int, int]:
    """Solve x = r_i (mod m_i) for pairwise coprime moduli.

    Returns ``(x, M)`` with ``0 <= x < M = prod(m_i)``.
    """
    congruences = [(int(r), int(m)) for r, m in congruences]
    for _, m in congruences:
        if m < 1:
            raise ValueError(f"modulus {m} must be positive")
    for i, (_, mi) in enumerate(congruences):
        for _, mj in congruences[i + 1 :]:
            if math.gcd(mi, mj) != 1:
                raise NonCoprimeModuli(mi, mj)
    x, big = 0, 1
    for r, m in congruences:
        # x + big*t = r (mod m)
        t = (r - x) * pow(big, -1, m) % m if m > 1 else 0
        x += big * t
        big *= m
    return x % big, big


def _strip_to_order(base: int, n: int, exponent: int, exp_factors) -> int:
    order = exponent
    for q in exp_factors:
        while order % q == 0 and pow(base, order // q, n) == 1:
            order //= q
    return order


def mult_order_2(p: int) -> int:
    """Least r >= 1 with 2**r = 1 (mod p), for an odd prime p."""
    if p < 3 or p % 2 == 0:
        raise ValueError(f"{p} is not an odd prime")
    if not is_prime(p):
        raise ValueError(f"{p} is composite")
    return _strip_to_order(2, p, p - 1, factorize(p - 1).primes)


def multiplicative_order(base: int, n: int) -> int:
    """Order of ``base`` in the unit group mod ``n`` (1 when n == 1)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return 1
    if math.gcd(base, n) != 1:
        raise ValueError(f"{base} is not a unit modulo {n}")
    lam = 1
    for p, e in factorize(n).factors:
        if p == 2:
            part = 1 if e == 1 else 2 if e == 2 else 2 ** (e - 2)
        else:
            part = (p - 1) * p ** (e - 1)
        lam = lam * part // math.gcd(lam, part)
    return _strip_to_order(base % n, n, lam, factorize(lam).primes)


def odd_part(n: int) -> int:
    while n % 2 == 0 and n:
        n //= 2
    return n


def primes_with_order(r: int, bound: int) -> list[int]:
    """Primes p <= bound for which 2 has order exactly r modulo p."""
    if r < 1:
        raise ValueError("r must be positive")
    if bound <= 2:
        raise ValueError("bound must exceed 2")
    maximal_divisors = [r // q for q in factorize(r).primes]
    out = []
    for p in factorize(2**r - 1).primes:
        if p > bound:
            continue
        if all(pow(2, d, p) != 1 for d in maximal_divisors):
            out.append(p)
    return out


def primes_with_order_at_most(order_bound: int) -> list[OrderedPrime]:
    """Every odd prime whose order of 2 is at most ``order_bound``.

    Each such prime divides 2**r - 1 for r = its order, so factoring
    2**r - 1 for r <= order_bound finds all of them.
    """
    pool = []
    for r in range(1, order_bound + 1):
        for p in primes_with_order(r, max(3, 2**r)):
            pool.append(OrderedPrime(p, r))
    return sorted(pool, key=lambda op: op.p)
