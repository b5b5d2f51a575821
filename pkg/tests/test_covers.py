import pytest
from hypothesis import given, settings, strategies as st

from pplus2k.covers import (
    CoverSystem,
    ResidueClass,
    density_lower_bound_holds,
    format_cover,
    is_coverable,
    is_minimal_coverable,
    parse_cover,
    reduce_by_prime,
    verify_cover,
)
from pplus2k.errors import LcmLimitExceeded, NotACoverError, SearchBudgetExceeded

from oracles import coverable_naive, covers_naive

MODULI_12 = [(0, 2), (0, 3), (1, 4), (5, 6), (7, 12)]
COVER_24 = [(1, 2), (0, 4), (2, 8), (0, 3), (2, 12), (22, 24)]


def test_residue_class_normalizes_and_orders():
    assert ResidueClass.of(-1, 4) == ResidueClass(3, 4)
    assert 7 in ResidueClass(3, 4)
    assert str(ResidueClass(3, 4)) == "3 mod 4"
    assert sorted([ResidueClass(1, 3), ResidueClass(0, 3)])[0] == ResidueClass(0, 3)
    with pytest.raises(ValueError):
        ResidueClass(4, 4)
    with pytest.raises(ValueError):
        ResidueClass(0, 0)


@pytest.mark.parametrize("pairs", [MODULI_12, COVER_24])
def test_known_covers(pairs):
    c = CoverSystem.from_pairs(pairs)
    assert verify_cover(c)
    assert covers_naive(pairs)


def test_cover_gap_detected():
    pairs = MODULI_12[:-1]
    assert not verify_cover(CoverSystem.from_pairs(pairs))
    assert not covers_naive(pairs)


def test_verify_cover_lcm_limit():
    with pytest.raises(LcmLimitExceeded):
        verify_cover(CoverSystem.from_pairs(MODULI_12), limit=10)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 11), st.integers(1, 12)), min_size=1, max_size=6))
def test_verify_cover_matches_naive(pairs):
    pairs = [(r % m, m) for r, m in pairs]
    assert verify_cover(CoverSystem.from_pairs(pairs)) == covers_naive(pairs)


def test_density_bound():
    assert density_lower_bound_holds([2, 3, 6])
    assert not density_lower_bound_holds([2, 3, 7])


@pytest.mark.parametrize(
    "moduli, coverable",
    [
        ([3, 3, 3], True),
        ([2, 3], False),
        ([2, 3, 4, 6, 12], True),
        ([3, 4, 6, 12], False),
        ([2, 4, 8, 8], True),
        ([2, 4, 3, 12, 8, 24], True),
        ([2, 3, 5, 7, 11, 13, 17, 19, 23], False),
        ([1], True),
        ([], False),
    ],
)
def test_is_coverable_examples(moduli, coverable):
    residues = is_coverable(moduli)
    assert (residues is not None) == coverable
    if residues is not None:
        assert verify_cover(CoverSystem.from_pairs(zip(residues, moduli)))


@settings(max_examples=120, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=1, max_size=4))
def test_is_coverable_matches_exhaustive_assignment(moduli):
    residues = is_coverable(moduli)
    assert (residues is not None) == coverable_naive(moduli)
    if residues is not None:
        assert covers_naive(zip(residues, moduli))


def test_is_coverable_is_deterministic():
    moduli = [2, 4, 3, 12, 8, 24]
    assert is_coverable(moduli) == is_coverable(list(moduli))


def test_is_coverable_budget():
    with pytest.raises(SearchBudgetExceeded):
        is_coverable([2, 4, 3, 12, 8, 24], node_budget=1)


def test_is_coverable_lcm_limit():
    with pytest.raises(LcmLimitExceeded):
        is_coverable([2, 3, 4, 6, 12], limit=10)


def test_minimality():
    assert is_minimal_coverable([2, 3, 4, 6, 12])
    assert is_minimal_coverable([2, 4, 8, 3, 12, 24])
    assert not is_minimal_coverable([2, 3, 4, 6, 12, 5])
    assert not is_minimal_coverable([2, 3])


def test_reduce_by_prime_drops_redundant_prime():
    c = CoverSystem.from_pairs(MODULI_12 + [(0, 5)])
    reduced = reduce_by_prime(c, 5)
    assert all(cls.modulus % 5 for cls in reduced)
    assert covers_naive([(cls.residue, cls.modulus) for cls in reduced])


def test_reduce_by_prime_complete_system_rejected():
    with pytest.raises(ValueError):
        reduce_by_prime(CoverSystem.from_pairs(MODULI_12), 3)


def test_reduce_by_prime_needs_cover():
    with pytest.raises(NotACoverError):
        reduce_by_prime(CoverSystem.from_pairs(MODULI_12[:-1]), 5)


def test_parse_format_roundtrip():
    text = "# lcm 12\n0 mod 2\n0 mod 3\n-3 mod 4   # normalized\n\n5 mod 6\n7 mod 12\n"
    c = parse_cover(text)
    assert [(cls.residue, cls.modulus) for cls in c] == MODULI_12
    assert parse_cover(format_cover(c)) == c


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_cover("1 mod\n")
