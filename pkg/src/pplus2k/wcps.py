"""Well-constructed prime sets: odd primes whose orders of 2 form a coverable multiset."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .covers import is_coverable
from .errors import SearchBudgetExceeded
from .modmath import OrderedPrime, is_prime, primes_with_order_at_most


@dataclass(frozen=True)
class WellConstructedPrimeSet:
    primes: tuple[int, ...]
    orders: tuple[int, ...]
    witness: tuple[int, ...]  # residue per order; the classes cover Z

    @property
    def product(self) -> int:
        out = 1
        for p in self.primes:
            out *= p
        return out


def _ordered(primes) -> list[OrderedPrime]:
    primes = sorted(int(p) for p in primes)
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    for p in primes:
        if p < 3 or not is_prime(p):
            raise ValueError(f"{p} is not an odd prime")
    return [OrderedPrime.of(p) for p in primes]


def is_wcps(primes, **kwargs) -> WellConstructedPrimeSet | None:
    ops = _ordered(primes)
    orders = [op.order for op in ops]
    witness = is_coverable(orders, **kwargs)
    if witness is None:
        return None
    return WellConstructedPrimeSet(tuple(op.p for op in ops), tuple(orders), witness)


def is_minimal_wcps(primes, **kwargs) -> bool:
    primes = sorted(primes)
    if is_wcps(primes, **kwargs) is None:
        raise ValueError(f"{primes} is not a well-constructed prime set")
    return all(
        is_wcps(primes[:i] + primes[i + 1 :], **kwargs) is None for i in range(len(primes))
    )


@dataclass
class SearchResult:
    order_bound: int
    product_cap: int
    pool: list[tuple[int, int]]
    best: WellConstructedPrimeSet | None = None
    min_cardinality: int | None = None
    min_cardinality_example: WellConstructedPrimeSet | None = None
    none_up_to: int = 0  # no WCPS of this many primes or fewer exists in the pool
    subsets_tested: int = 0
    subsets_pruned: int = 0
    nodes: int = 0

    def to_dict(self) -> dict:
        def wcps(w):
            if w is None:
                return None
            return {
                "primes": list(w.primes),
                "orders": list(w.orders),
                "witness": list(w.witness),
                "product": w.product,
            }

        return {
            "order_bound": self.order_bound,
            "product_cap": self.product_cap,
            "pool": [{"p": p, "order": r} for p, r in self.pool],
            "best": wcps(self.best),
            "best_product": self.best.product if self.best else None,
            "best_cardinality": len(self.best.primes) if self.best else None,
            "min_cardinality": self.min_cardinality,
            "min_cardinality_example": wcps(self.min_cardinality_example),
            "no_wcps_with_at_most": self.none_up_to,
            "audit": {
                "subsets_tested": self.subsets_tested,
                "subsets_pruned": self.subsets_pruned,
                "nodes": self.nodes,
            },
        }


class _Searcher:
    def __init__(self, pool: list[OrderedPrime], result: SearchResult, node_budget: int):
        self.pool = pool
        self.result = result
        self.node_budget = node_budget

    def tick(self):
        self.result.nodes += 1
        if self.result.nodes > self.node_budget:
            r = self.result
            raise SearchBudgetExceeded(
                f"search exceeded {self.node_budget} nodes "
                f"(tested {r.subsets_tested}, pruned {r.subsets_pruned})"
            )

    def test(self, chosen: list[OrderedPrime]) -> WellConstructedPrimeSet | None:
        self.result.subsets_tested += 1
        orders = [op.order for op in chosen]
        witness = is_coverable(orders)
        if witness is None:
            return None
        return WellConstructedPrimeSet(tuple(op.p for op in chosen), tuple(orders), witness)

    def least_product(self, cap: int) -> WellConstructedPrimeSet | None:
        """Branch and bound over primes in ascending order."""
        pool = self.pool
        n = len(pool)
        tail = [Fraction(0)] * (n + 1)
        for i in range(n - 1, -1, -1):
            tail[i] = tail[i + 1] + Fraction(1, pool[i].order)
        best: list[WellConstructedPrimeSet | None] = [None]

        def bound() -> int:
            return cap if best[0] is None else min(cap, best[0].product - 1)

        def go(start: int, chosen: list[OrderedPrime], prod: int, dens: Fraction):
            self.tick()
            for i in range(start, n):
                op = pool[i]
                if prod * op.p > bound():
                    self.result.subsets_pruned += 1
                    break
                if dens + tail[i] < 1:
                    self.result.subsets_pruned += 1
                    break
                new = chosen + [op]
                new_dens = dens + Fraction(1, op.order)
                if new_dens >= 1:
                    found = self.test(new)
                    if found is not None:
                        # supersets only cost more
                        best[0] = found
                        continue
                go(i + 1, new, prod * op.p, new_dens)

        go(0, [], 1, Fraction(0))
        return best[0]

    def of_size(self, size: int) -> WellConstructedPrimeSet | None:
        """First WCPS with exactly ``size`` primes, scanning primes by ascending order of 2."""
        pool = sorted(self.pool, key=lambda op: (op.order, op.p))
        n = len(pool)
        recip = [Fraction(1, op.order) for op in pool]

        def go(start: int, chosen: list[OrderedPrime], dens: Fraction):
            self.tick()
            need = size - len(chosen)
            if need == 0:
                if dens >= 1:
                    return self.test(sorted(chosen, key=lambda op: op.p))
                return None
            for i in range(start, n - need + 1):
                # the largest reachable density takes the next `need` reciprocals
                if dens + sum(recip[i : i + need]) < 1:
                    self.result.subsets_pruned += 1
                    break
                found = go(i + 1, chosen + [pool[i]], dens + recip[i])
                if found is not None:
                    return found
            return None

        return go(0, [], Fraction(0))


def min_wcps_search(
    order_bound: int,
    product_cap: int,
    pool=None,
    certify_up_to: int = 5,
    max_size: int = 12,
    node_budget: int = 10**7,
) -> SearchResult:
    """Exhaustive search of a bounded prime pool for well-constructed prime sets.

    The pool is every prime with order of 2 at most ``order_bound`` unless
    given explicitly. Reports the least-product WCPS with product at most
    ``product_cap``, certifies that no WCPS with ``certify_up_to`` or fewer
    primes exists in the pool, and finds the least cardinality of any WCPS
    in the pool (up to ``max_size``). Every claim is relative to the pool.
    """
    if not 1 <= order_bound <= 64:
        raise ValueError("order_bound must be in [1, 64]")
    if pool is None:
        ops = primes_with_order_at_most(order_bound)
    else:
        ops = [op for op in _ordered(pool) if op.order <= order_bound]
    result = SearchResult(order_bound, product_cap, [(op.p, op.order) for op in ops])
    searcher = _Searcher(ops, result, node_budget)

    result.best = searcher.least_product(product_cap)

    for size in range(1, max_size + 1):
        if size > len(ops):
            break
        found = searcher.of_size(size)
        if found is not None:
            result.min_cardinality = size
            result.min_cardinality_example = found
            break
        if size <= certify_up_to:
            result.none_up_to = size
    if result.min_cardinality is not None and result.min_cardinality <= certify_up_to:
        result.none_up_to = result.min_cardinality - 1
    return result
