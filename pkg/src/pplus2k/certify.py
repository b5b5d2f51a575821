"""Blocked pairs and certificates for progressions avoiding p + 2**k.

A pair (a, m) is *blocked* when gcd(a - 2**k, m) > 1 for every k >= 1.
Then any representation n = p + 2**k of a term n = a (mod m) forces the
prime p to divide m, which is what every certificate here rests on.
"""

from __future__ import annotations

import heapq
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .covers import CoverSystem, verify_cover
from .errors import BudgetExceeded, NotACoverError, NotBlockedError
from .modmath import (
    crt,
    factorize,
    is_prime,
    mult_order_2,
    multiplicative_order,
    odd_part,
    primes_with_order_at_most,
)
from .sieve import is_representable_direct

MERSENNE_EXPONENTS = (2, 3, 5, 7, 13, 17, 19, 31, 61, 89, 107, 127)
DEFAULT_ENUMERATION_BUDGET = 10**7
DIRECT_TEST_LIMIT = 2**63


@dataclass(frozen=True)
class BlockedPair:
    a: int
    m: int
    period: int  # order of 2 modulo the odd part of m


def _check_odd(a: int):
    if a < 1 or a % 2 == 0:
        raise ValueError(f"a must be a positive odd integer, got {a}")


def blocking_period(m: int) -> int:
    return multiplicative_order(2, odd_part(m))


def is_blocked(a: int, m: int) -> BlockedPair | None:
    """Return the blocked pair if gcd(a - 2**k, m) > 1 for every k >= 1, else None.

    a - 2**k is odd, so only the odd part of m can share a factor with it,
    and 2**k mod odd(m) is purely periodic; checking one period suffices.
    """
    _check_odd(a)
    if m < 2:
        raise ValueError("m must exceed 1")
    period = blocking_period(m)
    for k in range(1, period + 1):
        if math.gcd(a - 2**k, m) == 1:
            return None
    return BlockedPair(a, m, period)


def _power_classes(p: int, r: int) -> dict[int, int]:
    """Map each power of 2 mod p to its exponent in [0, r)."""
    return {pow(2, e, p): e for e in range(r)}


def blocked_residues(m: int, budget: int = DEFAULT_ENUMERATION_BUDGET) -> list[int]:
    """All odd a in [0, m) with (a, m) blocked, ascending.

    Whether (a, m) is blocked depends only on a modulo each odd prime p | m:
    if a = 2**e (mod p) the prime removes the exponent class e mod r_p,
    otherwise it removes nothing. The search picks, prime by prime, either
    one exponent class or "no class", keeps the combinations whose classes
    cover every exponent, and assembles the residues by CRT.
    """
    if m < 2:
        raise ValueError("m must exceed 1")
    primes = factorize(odd_part(m)).primes
    if not primes:
        return []
    orders = [mult_order_2(p) for p in primes]
    period = math.lcm(*orders)
    full = (1 << period) - 1
    unit = {r: full // ((1 << r) - 1) for r in set(orders)}
    powers = [_power_classes(p, r) for p, r in zip(primes, orders)]
    tail_capacity = [0] * (len(primes) + 1)
    for i in range(len(primes) - 1, -1, -1):
        tail_capacity[i] = tail_capacity[i + 1] + period // orders[i]

    combos: list[list[list[int]]] = []

    def go(i: int, covered: int, choice: list[list[int]]):
        if covered == full:
            # any choice for the remaining primes keeps the cover
            combos.append(choice + [list(range(p)) for p in primes[i:]])
            return
        if i == len(primes) or period - covered.bit_count() > tail_capacity[i]:
            return
        p, r = primes[i], orders[i]
        for x, e in sorted(powers[i].items()):
            go(i + 1, covered | (unit[r] << e), choice + [[x]])
        idle = [x for x in range(p) if x not in powers[i]]
        if idle:
            go(i + 1, covered, choice + [idle])

    go(0, 0, [])

    radical = math.prod(primes)
    spread = m // radical
    total = sum(math.prod(len(c) for c in combo) for combo in combos) * spread
    if total > budget:
        raise BudgetExceeded(f"{total} candidate residues exceed budget {budget}")

    out = []
    for combo in combos:
        for s in _crt_product(combo, primes):
            for t in range(spread):
                a = s + radical * t
                if a % 2:
                    out.append(a)
    return sorted(set(out))


def _crt_product(choices: list[list[int]], primes: list[int]):
    # Incremental CRT over the Cartesian product of per-prime residues.
    partial = [(0, 1)]
    for values, p in zip(choices, primes):
        nxt = []
        for x, mod in partial:
            inv = pow(mod, -1, p)
            for v in values:
                nxt.append((x + mod * ((v - x) * inv % p), mod * p))
        partial = nxt
    return [x for x, _ in partial]


@dataclass(frozen=True)
class ProgressionCertificate:
    a: int
    m: int
    period: int
    intercepting_primes: tuple[int, ...]
    verdict: str  # "strict" or "quasi"
    hits: tuple[tuple[int, int], ...] = ()  # (p, k) with p + 2**k = a (mod m)
    verified_terms: int = 0

    @property
    def is_strict(self) -> bool:
        return self.verdict == "strict"

    @property
    def exceptions_description(self) -> str:
        if self.is_strict:
            return "none"
        primes = ", ".join(map(str, self.intercepting_primes))
        return f"{{2^k + p : k >= 1, p in {{{primes}}}}}"


def intercepting_primes(a: int, m: int) -> tuple[int, ...]:
    """Odd primes p | m with a = 2**k (mod p) for some k."""
    out = []
    for p in factorize(odd_part(m)).primes:
        if a % p in _power_classes(p, mult_order_2(p)):
            out.append(p)
    return tuple(out)


def classify_certificate(a: int, m: int) -> ProgressionCertificate:
    """Decide whether the blocked progression {m*h + a : h >= 0} avoids p + 2**k entirely.

    Any representation n = p + 2**k of a term has p among the intercepting
    primes, so the progression is strict exactly when no congruence
    a = p + 2**k (mod m) is realised by a term. Powers 2**k mod m are
    periodic once k >= v2(m), so k runs over [1, period + v2(m)]; a residue
    hit by a pre-periodic k < v2(m) counts only if p + 2**k >= a itself.
    """
    pair = is_blocked(a, m)
    if pair is None:
        raise NotBlockedError(f"({a}, {m}) is not blocked")
    v = (m & -m).bit_length() - 1
    top = pair.period if v <= 1 else pair.period + v
    primes = intercepting_primes(a, m)
    hits = []
    for p in primes:
        for k in range(1, top + 1):
            if (a - p - 2**k) % m:
                continue
            if k >= v or p + 2**k >= a:
                hits.append((p, k))
    return ProgressionCertificate(
        a=a,
        m=m,
        period=pair.period,
        intercepting_primes=primes,
        verdict="quasi" if hits else "strict",
        hits=tuple(hits),
    )


def verify_terms(a: int, modulus: int, count: int) -> int:
    """Check the first ``count`` terms of {modulus*h + a} are not p + 2**k."""
    if count <= 0:
        return 0
    last = modulus * (count - 1) + a
    if last >= DIRECT_TEST_LIMIT:
        raise ValueError(f"term {last} is beyond the direct-test range 2**63")
    for h in range(count):
        n = modulus * h + a
        if n % 2 == 0:
            continue
        hit = is_representable_direct(n)
        if hit is not None:
            raise AssertionError(f"term {n} = {hit[0]} + 2^{hit[1]} is representable")
    return count


@dataclass(frozen=True)
class LiftedProgression:
    a: int
    modulus: int
    base_modulus: int
    factor: int  # modulus == base_modulus * factor
    verified_terms: int = 0


def lift_progression(a: int, m: int, verify: int = 0) -> LiftedProgression:
    """Multiply m by 2**k0, with k0 least such that 2**(k0-1) > max(a, m).

    For a blocked pair with a not of the form p + 2**k, every term of the
    lifted progression is non-representable.
    """
    if is_blocked(a, m) is None:
        raise NotBlockedError(f"({a}, {m}) is not blocked")
    k0 = max(a, m).bit_length() + 1
    modulus = 2**k0 * m
    if verify > 0 and modulus * (verify - 1) + a >= DIRECT_TEST_LIMIT:
        raise ValueError("lifted modulus too large for direct verification")
    assert is_blocked(a, modulus) is not None
    done = verify_terms(a, modulus, verify)
    return LiftedProgression(a, modulus, m, 2**k0, done)


def mersenne_lift(a: int, m: int, verify: int = 0) -> LiftedProgression:
    """Multiply an odd squarefree m by a Mersenne prime q = 2**r - 1 with 2**(r-2) > max(a, m)."""
    if m % 2 == 0:
        raise ValueError("m must be odd")
    if any(e > 1 for _, e in factorize(m).factors):
        raise ValueError(f"m = {m} is not squarefree")
    if is_blocked(a, m) is None:
        raise NotBlockedError(f"({a}, {m}) is not blocked")
    bound = max(a, m)
    for r in MERSENNE_EXPONENTS:
        if 2 ** (r - 2) > bound:
            break
    else:
        raise ValueError(f"no listed Mersenne exponent r has 2^(r-2) > {bound}")
    q = 2**r - 1
    modulus = m * q
    if verify > 0 and modulus * (verify - 1) + a >= DIRECT_TEST_LIMIT:
        raise ValueError("lifted modulus too large for direct verification")
    assert is_blocked(a, modulus) is not None
    done = verify_terms(a, modulus, verify)
    return LiftedProgression(a, modulus, m, q, done)


@dataclass(frozen=True)
class ExponentCover:
    """Classes ``2**e mod p``; the exponent classes e mod r_p must cover every k."""

    entries: tuple[tuple[int, int], ...]
    parity: tuple[int, int] = (1, 2)

    def exponent_classes(self) -> CoverSystem:
        return CoverSystem.from_pairs((e, mult_order_2(p)) for p, e in self.entries)


_EC_LINE = re.compile(r"^\s*(\d+)\s+(\d+)\s*$")
_PARITY = re.compile(r"^\s*parity\s+(\d+)\s+mod\s+(\d+)\s*$")


def parse_exponent_cover(text: str) -> ExponentCover:
    entries = []
    parity = (1, 2)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if match := _PARITY.match(line):
            parity = (int(match[1]), int(match[2]))
        elif match := _EC_LINE.match(line):
            entries.append((int(match[1]), int(match[2])))
        else:
            raise ValueError(f"line {lineno}: expected 'p e' or 'parity R mod M', got {raw!r}")
    return ExponentCover(tuple(entries), parity)


def format_exponent_cover(cover: ExponentCover) -> str:
    head = f"parity {cover.parity[0]} mod {cover.parity[1]}\n"
    return head + "".join(f"{p} {e}\n" for p, e in cover.entries)


def exponent_cover_to_residue(cover: ExponentCover) -> tuple[int, int]:
    """CRT of {1 mod 2} and {2**e_i mod p_i}; returns (a, 2 * prod p_i)."""
    if cover.parity != (1, 2):
        raise ValueError("only the odd parity class 1 mod 2 yields a blocked pair")
    primes = [p for p, _ in cover.entries]
    if not primes:
        raise ValueError("empty exponent cover")
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    for p in primes:
        if p < 3 or not is_prime(p):
            raise ValueError(f"{p} is not an odd prime")
    if not verify_cover(cover.exponent_classes()):
        raise NotACoverError("exponent classes do not cover every k >= 1")
    a, m = crt([(1, 2)] + [(pow(2, e, p), p) for p, e in cover.entries])
    assert is_blocked(a, m) is not None
    return a, m


@dataclass(frozen=True)
class W1Result:
    status: str  # "certificate", "proven-W2" or "unknown"
    a: int
    m: int | None = None
    primes: tuple[int, ...] = ()
    witness_k: int | None = None
    subsets_examined: int = 0
    reason: str = ""


def w1_search(
    a: int,
    order_bound: int,
    max_subset_size: int = 12,
    node_budget: int = 10**6,
) -> W1Result:
    """Look for a modulus m > 1 blocking a, or prove none exists.

    If a - 2**k = +-1 for some k, no m can block a. Otherwise, primes with
    order of 2 at most ``order_bound`` are tried: each prime p with
    a = 2**e (mod p) removes the exponent class e mod r_p, and subsets are
    visited in increasing product so the first covering subset gives the
    least-product certificate. "unknown" only means the bounded search
    came up empty.
    """
    _check_odd(a)
    k = 1
    while 2**k <= a + 1:
        if abs(a - 2**k) == 1:
            return W1Result("proven-W2", a, witness_k=k, reason=f"a - 2^{k} = {a - 2**k}")
        k += 1

    useful = []
    for op in primes_with_order_at_most(order_bound):
        table = _power_classes(op.p, op.order)
        if a % op.p in table:
            useful.append((op.p, op.order, table[a % op.p]))
    if sum((Fraction(1, r) for _, r, _ in useful), Fraction(0)) < 1:
        return W1Result("unknown", a, reason="pool cannot reach density 1")

    n = len(useful)
    heap = [(useful[0][0], (0,))]
    examined = 0
    while heap:
        prod, idx = heapq.heappop(heap)
        examined += 1
        if examined > node_budget:
            return W1Result("unknown", a, subsets_examined=examined, reason="node budget exhausted")
        chosen = [useful[i] for i in idx]
        if sum(Fraction(1, r) for _, r, _ in chosen) >= 1:
            if verify_cover(CoverSystem.from_pairs((e, r) for _, r, e in chosen)):
                primes = tuple(p for p, _, _ in chosen)
                return W1Result("certificate", a, m=prod, primes=primes, subsets_examined=examined)
        last = idx[-1]
        if last + 1 < n:
            nxt = useful[last + 1][0]
            if len(idx) < max_subset_size:
                heapq.heappush(heap, (prod * nxt, idx + (last + 1,)))
            heapq.heappush(heap, (prod // useful[last][0] * nxt, idx[:-1] + (last + 1,)))
    return W1Result("unknown", a, subsets_examined=examined, reason="no covering subset in pool")
