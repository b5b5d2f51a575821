"""Explicit primes, residues and exponents for a covering-based obstruction.

Given even moduli m_1..m_t, choose l with 2**l > 4*max(m_i) and build
distinct primes p_1..p_s with residues c_i so that, with a the CRT solution
of a = c_i (mod p_i**alpha) and c = 3*2**l - 1:

  (i)   m_1*...*m_t divides (p_1*...*p_s)**alpha;
  (ii)  p_{l+3} divides no m_i;
  (iii) every a - 2**k (k >= 1) is divisible by one of p_1..p_{l+3};
  (iv)  no p_i with i != l+3 divides a - 2**c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .covers import CoverSystem, verify_cover
from .modmath import crt, factorize, mult_order_2

MIN_ELL = 4
MAX_ELL = 6

FERMAT = "fermat-factor"
QUOTIENT = "quotient-factor"
MODULUS = "modulus-prime"


@dataclass(frozen=True)
class ConstructionPrime:
    p: int
    order: int | None  # None for the prime 2
    provenance: str
    c: int


@dataclass(frozen=True)
class CoveringConstruction:
    ell: int
    m_list: tuple[int, ...]
    primes: tuple[ConstructionPrime, ...]
    alpha: int
    a: int
    c: int

    @property
    def modulus(self) -> int:
        return math.prod(cp.p for cp in self.primes) ** self.alpha

    @property
    def covering_primes(self) -> tuple[ConstructionPrime, ...]:
        """p_1..p_{l+3}, whose classes handle every exponent k."""
        return self.primes[: self.ell + 3]

    def with_residue(self, index: int, c: int) -> "CoveringConstruction":
        """Copy with c_index (1-based) replaced and a recomputed."""
        primes = list(self.primes)
        primes[index - 1] = replace(primes[index - 1], c=c)
        return replace(self, primes=tuple(primes), a=solve_residue(primes, self.alpha))


def choose_ell(m_list) -> int:
    """Least l > 3 with 2**l > 4*m_i for every i."""
    ell = MIN_ELL
    while 2**ell <= 4 * max(m_list):
        ell += 1
    return ell


def fermat_factor(i: int) -> int:
    return 2 ** (2 ** (i - 1)) + 1


def quotient(ell: int, i: int) -> int:
    j = 2 ** (2 * ell - i)
    return (2 ** (3 * j) + 1) // (2**j + 1)


def solve_residue(primes, alpha: int) -> int:
    a, _ = crt([(cp.c, cp.p**alpha) for cp in primes])
    return a


def construct(m_list, alternates: dict[int, int] | None = None) -> CoveringConstruction:
    """Build the primes, residues, alpha, a and c for the given even moduli.

    ``alternates`` maps a 1-based index i <= l+3 to a prime factor to use
    instead of the least prime factor of the i-th number.
    """
    m_list = tuple(int(m) for m in m_list)
    if not m_list:
        raise ValueError("need at least one modulus")
    for m in m_list:
        if m < 2 or m % 2:
            raise ValueError(f"every modulus must be even and >= 2, got {m}")
    ell = choose_ell(m_list)
    if ell > MAX_ELL:
        raise ValueError(
            f"l = {ell} is outside the supported range {MIN_ELL}..{MAX_ELL} (max modulus must be < 16)"
        )
    alternates = alternates or {}

    def pick(i: int, n: int) -> int:
        candidates = factorize(n).primes
        if i in alternates:
            if alternates[i] not in candidates:
                raise ValueError(f"{alternates[i]} does not divide {n} (candidates {candidates})")
            return alternates[i]
        return candidates[0]

    primes: list[ConstructionPrime] = []
    for i in range(1, ell + 1):
        p = pick(i, fermat_factor(i))
        primes.append(ConstructionPrime(p, mult_order_2(p), FERMAT, 2 ** (2 ** (i - 1) - 1)))
    for i in range(ell + 1, ell + 4):
        p = pick(i, quotient(ell, i))
        primes.append(ConstructionPrime(p, mult_order_2(p), QUOTIENT, 2 ** ((i - ell) * 2**ell - 1)))

    taken = {cp.p for cp in primes}
    product = math.prod(m_list)
    c_tail = 2 ** (3 * 2**ell - 1) + 1
    for q in factorize(product).primes:
        if q not in taken:
            order = None if q == 2 else mult_order_2(q)
            primes.append(ConstructionPrime(q, order, MODULUS, c_tail))

    expected = [2**i for i in range(1, ell + 1)] + [3 * 2 ** (ell - j) for j in range(0, 3)]
    actual = [cp.order for cp in primes[: ell + 3]]
    assert actual == expected, f"orders {actual} differ from {expected}"

    alpha = 1
    while any(product % cp.p**alpha == 0 for cp in primes):
        alpha += 1
    return CoveringConstruction(
        ell=ell,
        m_list=m_list,
        primes=tuple(primes),
        alpha=alpha,
        a=solve_residue(primes, alpha),
        c=3 * 2**ell - 1,
    )


@dataclass
class ConditionResult:
    ok: bool
    detail: str = ""
    witness: int | None = None


@dataclass
class VerificationReport:
    ell: int
    L: int
    conditions: dict[str, ConditionResult] = field(default_factory=dict)
    exponent_cover: bool = False
    a_odd: bool = False
    last_prime_divides: bool = False  # whether p_{l+3} | a - 2**c

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.conditions.values())

    def failures(self) -> list[str]:
        return [name for name, c in self.conditions.items() if not c.ok]


def exponent_class(cp: ConstructionPrime) -> int | None:
    """The e in [0, r_p) with 2**e = c (mod p), if any."""
    target = cp.c % cp.p
    for e in range(cp.order):
        if pow(2, e, cp.p) == target:
            return e
    return None


def covers_exponent(e: CoveringConstruction, k: int) -> int | None:
    """Some p_i (i <= l+3) dividing a - 2**k, or None."""
    for cp in e.covering_primes:
        if (e.a - pow(2, k, cp.p)) % cp.p == 0:
            return cp.p
    return None


def verify_construction(e: CoveringConstruction) -> VerificationReport:
    """Check conditions (i)-(iv); (iii) is checked for every k in one full period.

    Each 2**k mod p_i has period r_{p_i}, so the divisibility pattern of
    a - 2**k repeats with period lcm(r_{p_1}, ..., r_{p_{l+3}}); that lcm
    divides L below.
    """
    ell = e.ell
    head = e.covering_primes
    orders = [cp.order for cp in head if cp.order]
    L = math.lcm(*orders, 3 * 2**ell)
    report = VerificationReport(ell=ell, L=L)

    product = math.prod(e.m_list)
    big = math.prod(cp.p for cp in e.primes) ** e.alpha
    report.conditions["i"] = ConditionResult(
        big % product == 0, f"prod(m) = {product} {'divides' if big % product == 0 else 'does not divide'} (prod p)^alpha"
    )

    last = e.primes[ell + 2].p
    bad = [m for m in e.m_list if m % last == 0]
    report.conditions["ii"] = ConditionResult(
        not bad, f"p_(l+3) = {last}" + (f" divides {bad}" if bad else " divides no m_i")
    )

    miss = next((k for k in range(1, L + 1) if covers_exponent(e, k) is None), None)
    report.conditions["iii"] = ConditionResult(
        miss is None,
        f"all k in [1, {L}] covered" if miss is None else f"a - 2^{miss} has no divisor among p_1..p_(l+3)",
        miss,
    )

    hits = [
        cp.p
        for idx, cp in enumerate(e.primes, 1)
        if idx != ell + 3 and (e.a - pow(2, e.c, cp.p)) % cp.p == 0
    ]
    report.conditions["iv"] = ConditionResult(
        not hits, "no p_i (i != l+3) divides a - 2^c" if not hits else f"{hits} divide a - 2^c"
    )
    report.last_prime_divides = (e.a - pow(2, e.c, last)) % last == 0
    report.a_odd = e.a % 2 == 1

    classes = [(exponent_class(cp), cp.order) for cp in head]
    report.exponent_cover = all(x is not None for x, _ in classes) and verify_cover(
        CoverSystem.from_pairs(classes)
    )
    return report


def report_json(e: CoveringConstruction, report: VerificationReport | None = None) -> dict:
    def num(x):
        return str(x)

    out = {
        "ell": e.ell,
        "m_list": list(e.m_list),
        "primes": [
            {"p": num(cp.p), "order": cp.order, "provenance": cp.provenance, "c": num(cp.c)}
            for cp in e.primes
        ],
        "alpha": e.alpha,
        "a": num(e.a),
        "c": e.c,
    }
    if report is not None:
        out["L"] = report.L
        out["conditions"] = {name: cond.ok for name, cond in report.conditions.items()}
        out["details"] = {name: cond.detail for name, cond in report.conditions.items()}
        out["exponent_cover"] = report.exponent_cover
        out["a_odd"] = report.a_odd
        out["last_prime_divides_a_minus_2c"] = report.last_prime_divides
    return out
