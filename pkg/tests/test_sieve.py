import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from pplus2k.errors import MemoryLimitExceeded
from pplus2k.sieve import (
    RepresentabilitySieve,
    build,
    is_representable_direct,
    moments,
    non_representables,
    odd_prime_flags,
)

from oracles import r_naive


def test_odd_prime_flags_match_sympy():
    flags = odd_prime_flags(10**5, segment_size=1000)
    primes = [2 * j + 1 for j in np.flatnonzero(flags)]
    assert primes == list(sympy.primerange(3, 10**5 + 1))


def test_counts_match_naive():
    s = build(10**4)
    for n in range(1, 10**4 + 1, 2):
        assert s.r(n) == r_naive(n, sympy.isprime), n


@pytest.mark.parametrize("limit", [1, 2, 9, 10, 1000, 4097])
@pytest.mark.parametrize("segment", [1, 7, 64, 2**22])
def test_segmentation_does_not_change_counts(limit, segment):
    assert build(limit, segment_size=segment) == build(limit)


def test_sum_r_equals_prime_counting_sum():
    for limit in (5, 100, 1001, 10**4):
        expected = 0
        k = 1
        while 2**k + 3 <= limit:
            # odd primes p <= limit - 2**k
            expected += int(sympy.primepi(limit - 2**k)) - 1
            k += 1
        assert moments(build(limit)).sum_r == expected


def test_first_u_elements_and_the_next_two():
    u = non_representables(build(400))
    assert u[:6] == [1, 3, 127, 149, 251, 331]
    # independent check that 337 and 373 have no representation either
    for n in (337, 373):
        assert n in u
        assert all(not sympy.isprime(n - 2**k) for k in range(1, n.bit_length()))


def test_509203_in_u():
    assert build(10**6).r(509203) == 0
    assert is_representable_direct(509203) is None


def test_r_rejects_even_and_out_of_range():
    s = build(100)
    with pytest.raises(ValueError):
        s.r(10)
    with pytest.raises(ValueError):
        s.r(101)


def test_csv_and_bytes_roundtrip():
    s = build(99)
    lines = s.to_csv().splitlines()
    assert lines[0] == "n,r"
    assert lines[1:4] == ["1,0", "3,0", "5,1"]
    assert len(lines) == 51
    assert RepresentabilitySieve.from_bytes(s.to_bytes()) == s


def test_bytes_rejects_corruption():
    blob = build(99).to_bytes()
    with pytest.raises(ValueError):
        RepresentabilitySieve.from_bytes(b"XXXXXXXX" + blob[8:])
    with pytest.raises(ValueError):
        RepresentabilitySieve.from_bytes(blob[:-1])


def test_memory_limit():
    with pytest.raises(MemoryLimitExceeded):
        build(10**6, memory_limit=10**5)


def test_build_rejects_nonpositive():
    with pytest.raises(ValueError):
        build(0)


def test_moments_small():
    m = moments(build(15))
    # odd n in (3, 15]: r = 5:1, 7:2, 9:2, 11:2, 13:2, 15:3
    assert (m.sum_r, m.sum_r_squared, m.representable, m.total) == (12, 26, 6, 6)
    with pytest.raises(ValueError):
        moments(build(4))


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=2**40).map(lambda x: 2 * x + 1))
def test_direct_test_witness(n):
    hit = is_representable_direct(n)
    if hit is None:
        assert all(not sympy.isprime(n - 2**k) for k in range(1, n.bit_length()) if 2**k < n)
    else:
        p, k = hit
        assert p + 2**k == n and sympy.isprime(p)
        assert all(not sympy.isprime(n - 2**j) for j in range(1, k))


def test_direct_test_rejects():
    for bad in (0, 4, -3, 2**63 + 1):
        with pytest.raises(ValueError):
            is_representable_direct(bad)
