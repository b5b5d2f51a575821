import math

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from pplus2k.errors import FactorizationBudgetExceeded, NonCoprimeModuli
from pplus2k.modmath import (
    crt,
    factorize,
    is_prime,
    mult_order_2,
    multiplicative_order,
    odd_part,
    pow_mod,
    primes_with_order,
    primes_with_order_at_most,
)

from oracles import factor_naive, is_prime_naive, order_naive


def test_pow_mod_values():
    assert pow_mod(2, 23, 241) == 121
    assert pow_mod(2, 24, 241) == 1
    assert pow_mod(5, 0, 1) == 0


def test_pow_mod_rejects_bad_input():
    with pytest.raises(ValueError):
        pow_mod(2, -1, 7)
    with pytest.raises(ValueError):
        pow_mod(2, 3, 0)


def test_is_prime_small_range_matches_trial_division():
    for n in range(-5, 5000):
        assert is_prime(n) == is_prime_naive(n), n


@pytest.mark.parametrize(
    "n, expected",
    [
        (2**61 - 1, True),
        (2**64 - 59, True),
        (2**64 + 1, False),  # 274177 * 67280421310721
        (3215031751, False),  # strong pseudoprime to bases 2, 3, 5, 7
        (3825123056546413051, False),  # strong pseudoprime to bases 2..23
        (2**89 - 1, True),
        (2**127 - 1, True),
        ((2**89 - 1) * (2**61 - 1), False),
    ],
)
def test_is_prime_large(n, expected):
    assert is_prime(n) == expected


@settings(max_examples=200)
@given(st.integers(min_value=1, max_value=10**12))
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert f.value() == n
    assert f.as_dict() == sympy.factorint(n)


def test_factorize_matches_trial_division():
    for n in range(1, 3000):
        assert factorize(n).as_dict() == factor_naive(n), n


def test_factorize_known():
    assert factorize(2**24 - 1).as_dict() == {3: 2, 5: 1, 7: 1, 13: 1, 17: 1, 241: 1}
    assert factorize(65281).factors == ((97, 1), (673, 1))
    assert factorize(1).factors == ()
    assert factorize(2**64 + 1).primes == [274177, 67280421310721]
    assert factorize(2**32 + 1).primes == [641, 6700417]


def test_factorize_budget():
    with pytest.raises(FactorizationBudgetExceeded):
        factorize((2**61 - 1) * (2**89 - 1), rho_budget=10)


def test_factorize_rejects_nonpositive():
    with pytest.raises(ValueError):
        factorize(0)


def test_crt_reference_values():
    pairs = [(1, 2), (1, 3), (2, 5), (8, 17), (2, 7), (8, 13), (121, 241)]
    assert crt(pairs) == (992077, 11184810)
    pairs = [(1, 2), (2, 3), (1, 5), (4, 17), (1, 7), (4, 13), (pow(2, 22, 241), 241)]
    assert crt(pairs) == (3292241, 11184810)


def test_crt_non_coprime():
    with pytest.raises(NonCoprimeModuli) as info:
        crt([(1, 6), (1, 4)])
    assert info.value.pair == (6, 4)


@given(st.lists(st.sampled_from([2, 3, 5, 7, 11, 13, 17, 19, 23]), min_size=1, max_size=6, unique=True), st.data())
def test_crt_solution_property(moduli, data):
    residues = [data.draw(st.integers(min_value=-50, max_value=50)) for _ in moduli]
    x, m = crt(list(zip(residues, moduli)))
    assert m == math.prod(moduli)
    assert 0 <= x < m
    assert all((x - r) % q == 0 for r, q in zip(residues, moduli))


def test_mult_order_matches_brute_force():
    for p in range(3, 20000, 2):
        if is_prime_naive(p):
            assert mult_order_2(p) == order_naive(p), p


def test_mult_order_large_prime():
    q = 2**64 - 2**32 + 1
    assert mult_order_2(q) == 192
    assert mult_order_2(2**61 - 1) == 61


def test_mult_order_rejects():
    with pytest.raises(ValueError):
        mult_order_2(2)
    with pytest.raises(ValueError):
        mult_order_2(15)


def test_multiplicative_order_composite():
    assert multiplicative_order(2, 2**24 - 1) == 24
    assert multiplicative_order(3, 10) == 4
    with pytest.raises(ValueError):
        multiplicative_order(2, 12)


def test_odd_part():
    assert odd_part(11184810) == 5592405
    assert odd_part(48) == 3


def test_primes_with_order_bruteforce_pool():
    pool = [(op.p, op.order) for op in primes_with_order_at_most(16)]
    expected = [
        (p, order_naive(p))
        for p in range(3, 2**16)
        if is_prime_naive(p) and order_naive(p) <= 16
    ]
    assert pool == expected


def test_pool_for_order_bound_30():
    pool = primes_with_order_at_most(30)
    assert len(pool) == 34
    assert [op.p for op in pool] == sorted(op.p for op in pool)
    assert {3, 5, 7, 13, 17, 241} <= {op.p for op in pool}
    for op in pool:
        assert pow(2, op.order, op.p) == 1


def test_primes_with_order_respects_bound():
    assert primes_with_order(24, 300) == [241]
    assert primes_with_order(24, 240) == []
