"""Covering systems of residue classes.

A cover is a finite list of classes ``r mod m`` whose union is all of Z.
Since the union is periodic with period ``lcm(m_i)``, a cover is checked
by sweeping one period.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np

from .errors import LcmLimitExceeded, NotACoverError, SearchBudgetExceeded
from .modmath import factorize, is_prime

DEFAULT_LCM_LIMIT = 2**32
DEFAULT_NODE_BUDGET = 10**6


@dataclass(frozen=True, order=True)
class ResidueClass:
    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(f"residue {self.residue} not in [0, {self.modulus})")

    @classmethod
    def of(cls, residue: int, modulus: int) -> "ResidueClass":
        return cls(residue % modulus, modulus)

    def __contains__(self, x: int) -> bool:
        return x % self.modulus == self.residue

    def __str__(self):
        return f"{self.residue} mod {self.modulus}"


def _lcm(values) -> int:
    return reduce(math.lcm, values, 1)


@dataclass(frozen=True)
class CoverSystem:
    classes: tuple[ResidueClass, ...]
    lcm: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if not self.classes:
            raise ValueError("a cover system needs at least one class")
        object.__setattr__(self, "lcm", _lcm(c.modulus for c in self.classes))

    @classmethod
    def from_pairs(cls, pairs) -> "CoverSystem":
        return cls(tuple(ResidueClass.of(r, m) for r, m in pairs))

    @property
    def moduli(self) -> list[int]:
        return [c.modulus for c in self.classes]

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)


def verify_cover(c: CoverSystem, limit: int = DEFAULT_LCM_LIMIT) -> bool:
    """True iff every integer lies in at least one class of ``c``."""
    if c.lcm > limit:
        raise LcmLimitExceeded(c.lcm, limit)
    hit = np.zeros(c.lcm, dtype=bool)
    for cls in c.classes:
        hit[cls.residue :: cls.modulus] = True
    return bool(hit.all())


def density_lower_bound_holds(moduli) -> bool:
    """Exact test of sum(1/m_i) >= 1, a necessary condition for coverability."""
    return sum((Fraction(1, m) for m in moduli), Fraction(0)) >= 1


def _strip_sparse_primes(moduli: list[int], active: list[int]) -> list[int]:
    # If fewer than q of the active moduli are divisible by the prime q, the
    # classes on those moduli miss some residue b mod q, so b + qZ must be
    # covered by the rest; the rest are then coverable on their own. The
    # converse is trivial, so dropping those moduli preserves coverability.
    changed = True
    while changed:
        changed = False
        primes = set()
        for i in active:
            primes.update(factorize(moduli[i]).primes)
        for q in sorted(primes):
            hit = [i for i in active if moduli[i] % q == 0]
            if 0 < len(hit) < q:
                active = [i for i in active if moduli[i] % q]
                changed = True
                break
    return active


def _search(moduli: list[int], node_budget: int):
    """Backtracking over the least uncovered integer of one period."""
    period = _lcm(moduli)
    full = (1 << period) - 1
    base = {m: full // ((1 << m) - 1) for m in set(moduli)}
    left = Counter(moduli)
    order = sorted(left)
    picks: list[tuple[int, int]] = []
    nodes = 0

    def capacity():
        return sum(n * (period // m) for m, n in left.items())

    def go(covered: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise SearchBudgetExceeded(f"coverability search exceeded {node_budget} nodes")
        if covered == full:
            return True
        if period - covered.bit_count() > capacity():
            return False
        free = ~covered & full
        x = (free & -free).bit_length() - 1
        # slots sharing a modulus are interchangeable, so try each modulus once
        for m in order:
            if not left[m]:
                continue
            r = x % m
            left[m] -= 1
            picks.append((m, r))
            if go(covered | (base[m] << r)):
                return True
            picks.pop()
            left[m] += 1
        return False

    return picks if go(0) else None


def is_coverable(
    moduli,
    limit: int = DEFAULT_LCM_LIMIT,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> tuple[int, ...] | None:
    """Find residues a_i with the union of a_i mod m_i equal to Z.

    Returns one residue per input modulus (in input order) or None when no
    assignment exists. Raises SearchBudgetExceeded when the search runs out
    of nodes, which says nothing about coverability.
    """
    moduli = [int(m) for m in moduli]
    if any(m < 1 for m in moduli):
        raise ValueError("moduli must be positive")
    if not moduli or not density_lower_bound_holds(moduli):
        return None
    residues = [0] * len(moduli)
    if 1 in moduli:
        return tuple(residues)
    active = _strip_sparse_primes(moduli, list(range(len(moduli))))
    sub = [moduli[i] for i in active]
    if not sub or not density_lower_bound_holds(sub):
        return None
    period = _lcm(sub)
    if period > limit:
        raise LcmLimitExceeded(period, limit)
    picks = _search(sub, node_budget)
    if picks is None:
        return None
    slots: dict[int, list[int]] = {}
    for i in active:
        slots.setdefault(moduli[i], []).append(i)
    for m, r in picks:
        residues[slots[m].pop(0)] = r
    return tuple(residues)


def is_minimal_coverable(moduli, **kwargs) -> bool:
    """Coverable, and no multiset with one element removed is.

    Removing a single element is enough: supersets of coverable multisets
    are coverable.
    """
    moduli = list(moduli)
    if is_coverable(moduli, **kwargs) is None:
        return False
    for i in range(len(moduli)):
        rest = moduli[:i] + moduli[i + 1 :]
        if is_coverable(rest, **kwargs) is not None:
            return False
    return True


def reduce_by_prime(c: CoverSystem, p: int, limit: int = DEFAULT_LCM_LIMIT) -> CoverSystem:
    """Drop the classes whose modulus is divisible by ``p`` and rescale the rest.

    Picks the least residue ``a`` mod ``p`` missed by the dropped classes;
    the progression a + pZ is covered by the survivors, and substituting
    x = a + p*n maps survivor ``r mod m`` to ``(r - a)/p mod m``.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not verify_cover(c, limit):
        raise NotACoverError("input classes do not cover Z")
    hit = {cls.residue % p for cls in c if cls.modulus % p == 0}
    if len(hit) == p:
        raise ValueError(
            f"residues of the classes with modulus divisible by {p} form a complete system mod {p}"
        )
    a = min(set(range(p)) - hit)
    out = [
        ResidueClass.of((cls.residue - a) * pow(p, -1, cls.modulus), cls.modulus)
        for cls in c
        if cls.modulus % p
    ]
    result = CoverSystem(tuple(out))
    if not verify_cover(result, limit):
        raise AssertionError("reduced system failed to cover Z")
    return result


_LINE = re.compile(r"^\s*(-?\d+)\s+mod\s+(\d+)\s*$")


def parse_cover(text: str) -> CoverSystem:
    """Parse one ``R mod M`` class per line; ``#`` starts a comment."""
    classes = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _LINE.match(line)
        if not match:
            raise ValueError(f"line {lineno}: expected 'R mod M', got {raw!r}")
        r, m = int(match[1]), int(match[2])
        if m < 1:
            raise ValueError(f"line {lineno}: modulus must be positive")
        classes.append(ResidueClass.of(r, m))
    return CoverSystem(tuple(classes))


def format_cover(c: CoverSystem) -> str:
    return "".join(f"{cls}\n" for cls in c)
