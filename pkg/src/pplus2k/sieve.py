"""Representation counts r(n) = #{(p, k) : n = p + 2**k, p prime, k >= 1}.

Only odd n are tabulated; entry ``i`` of the count table is r(2*i + 1).
For odd n the prime in a representation is odd, so the prime 2 (which is
a valid p) never contributes to the table.
"""

from __future__ import annotations

import io
import math
import struct
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import MemoryLimitExceeded
from .modmath import is_prime

DEFAULT_MEMORY_LIMIT = 2**31
DEFAULT_SEGMENT_SIZE = 2**22
MAGIC = b"PPLUS2K1"


def odd_prime_flags(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> np.ndarray:
    """Boolean array whose entry ``j`` says whether 2*j + 1 is prime, for 2*j + 1 <= limit.

    Segmented sieve of Eratosthenes over odd numbers; ``segment_size``
    counts odd entries per segment.
    """
    size = (limit + 1) // 2
    flags = np.zeros(size, dtype=bool)
    if size == 0:
        return flags
    root = math.isqrt(limit)
    base = np.ones(root + 1, dtype=bool)
    base[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if base[p]:
            base[p * p :: p] = False
    base_primes = [int(p) for p in np.flatnonzero(base) if p > 2]

    for lo in range(0, size, segment_size):
        hi = min(lo + segment_size, size)
        seg = np.ones(hi - lo, dtype=bool)
        # odd numbers 2*lo + 1 .. 2*hi - 1
        for p in base_primes:
            start = p * p
            if start > 2 * hi - 1:
                break
            first = 2 * lo + 1
            if start < first:
                start = first + (-first) % p
                if start % 2 == 0:
                    start += p
            seg[(start - 1) // 2 - lo :: p] = False
        flags[lo:hi] = seg
    flags[0] = False  # 1 is not prime
    return flags


@dataclass(frozen=True, eq=False)
class RepresentabilitySieve:
    limit: int
    counts: np.ndarray  # uint8, counts[i] = r(2*i + 1)

    def r(self, n: int) -> int:
        if n % 2 == 0 or not 1 <= n <= self.limit:
            raise ValueError(f"{n} is not an odd integer in [1, {self.limit}]")
        return int(self.counts[n // 2])

    def __eq__(self, other):
        return (
            isinstance(other, RepresentabilitySieve)
            and self.limit == other.limit
            and np.array_equal(self.counts, other.counts)
        )

    def odd_values(self) -> np.ndarray:
        return 2 * np.arange(len(self.counts), dtype=np.int64) + 1

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("n,r\n")
        for n, r in zip(self.odd_values().tolist(), self.counts.tolist()):
            buf.write(f"{n},{r}\n")
        return buf.getvalue()

    def to_bytes(self) -> bytes:
        return MAGIC + struct.pack("<Q", self.limit) + self.counts.tobytes()

    @classmethod
    def from_bytes(cls, blob: bytes) -> "RepresentabilitySieve":
        if blob[:8] != MAGIC:
            raise ValueError("bad magic header")
        (limit,) = struct.unpack("<Q", blob[8:16])
        counts = np.frombuffer(blob[16:], dtype=np.uint8).copy()
        if len(counts) != (limit + 1) // 2:
            raise ValueError(f"table has {len(counts)} entries, expected {(limit + 1) // 2}")
        return cls(limit, counts)


def build(
    limit: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    memory_limit: int = DEFAULT_MEMORY_LIMIT,
) -> RepresentabilitySieve:
    """Tabulate r(n) for every odd n <= limit."""
    if limit < 1:
        raise ValueError("limit must be positive")
    if limit > memory_limit:
        raise MemoryLimitExceeded(f"limit {limit} exceeds memory limit {memory_limit}")
    flags = odd_prime_flags(limit, segment_size)
    size = len(flags)
    counts = np.zeros(size, dtype=np.uint8)
    k = 1
    # odd p = 2j + 1 lands on n = p + 2**k = 2*(j + 2**(k-1)) + 1
    while 2**k + 3 <= limit:
        shift = 2 ** (k - 1)
        counts[shift:] += flags[: size - shift]
        k += 1
    # r(n) < 64 for any n < 2**63, so a uint8 never saturates here
    assert size == 0 or int(counts.max()) < 255
    return RepresentabilitySieve(limit, counts)


def non_representables(s: RepresentabilitySieve) -> list[int]:
    """Ascending odd n <= limit with r(n) == 0."""
    return (2 * np.flatnonzero(s.counts == 0) + 1).tolist()


@dataclass(frozen=True)
class Moments:
    sum_r: int
    sum_r_squared: int
    representable: int
    total: int

    @property
    def representable_proportion(self) -> Fraction:
        return Fraction(self.representable, self.total)


def moments(s: RepresentabilitySieve) -> Moments:
    """Sums of r(n) and r(n)**2 over odd n in (3, limit], plus the share with r(n) >= 1."""
    if s.limit < 5:
        raise ValueError("need limit >= 5 for a nonempty range (3, limit]")
    tail = s.counts[2:].astype(np.int64)
    return Moments(
        sum_r=int(tail.sum()),
        sum_r_squared=int((tail * tail).sum()),
        representable=int(np.count_nonzero(tail)),
        total=len(tail),
    )


def is_representable_direct(n: int) -> tuple[int, int] | None:
    """Return (p, k) with the least k such that n - 2**k is prime, or None."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"{n} is not a positive odd integer")
    if n >= 2**63:
        raise ValueError("n must be below 2**63")
    k = 1
    while 2**k < n:
        if is_prime(n - 2**k):
            return n - 2**k, k
        k += 1
    return None
