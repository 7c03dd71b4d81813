import itertools
import math
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rrshuffle.combinatorics import (
    IntegerPartition,
    binomial,
    epsilon_to_p,
    krr_histogram_transition,
    log_multinomial,
    multinomial,
    p_to_epsilon,
    partitions,
)

# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------


def pascal_triangle(n_max):
    """Binomials by the addition recurrence, no factorials involved."""
    rows = [[1]]
    for n in range(1, n_max + 1):
        prev = rows[-1]
        rows.append(
            [1] + [prev[i - 1] + prev[i] for i in range(1, n)] + [1]
        )
    return rows


@lru_cache(maxsize=None)
def count_partitions_atmost(n, k):
    """Partitions of n into at most k parts, by the standard recurrence."""
    if n == 0:
        return 1
    if k == 0 or n < 0:
        return 0
    return count_partitions_atmost(n - k, k) + count_partitions_atmost(n, k - 1)


def brute_histogram_transition(n_a_in, n_b_in, n_a_out, n_b_out, p):
    """Sum per-record noise probabilities over every output dataset with
    the requested histogram; exhaustive, independent of the formula."""
    n = n_a_in + n_b_in
    x = (0,) * n_a_in + (1,) * n_b_in
    total = Fraction(0)
    for w in itertools.product((0, 1), repeat=n):
        if w.count(0) != n_a_out:
            continue
        prob = Fraction(1)
        for a, b in zip(x, w):
            prob *= p if a == b else 1 - p
        total += prob
    return total


# ---------------------------------------------------------------------------
# binomial
# ---------------------------------------------------------------------------


def test_binomial_matches_pascal_recurrence():
    rows = pascal_triangle(64)
    for n in range(65):
        for i in range(n + 1):
            assert binomial(n, i) == rows[n][i]


def test_binomial_examples():
    assert binomial(3, 1) == 3
    assert binomial(5, 7) == 0
    assert binomial(3, -1) == 0


def test_binomial_large_value_exact():
    rows = pascal_triangle(199)
    big = binomial(199, 99)
    assert big == rows[199][99]
    assert float(Fraction(big, 2**200)) == pytest.approx(0.0282, abs=5e-5)


def test_binomial_rejects_negative_n():
    with pytest.raises(ValueError):
        binomial(-1, 0)


@given(st.integers(min_value=0, max_value=64))
def test_binomial_symmetry(n):
    for i in range(n + 1):
        assert binomial(n, i) == binomial(n, n - i)


# ---------------------------------------------------------------------------
# multinomial
# ---------------------------------------------------------------------------


def test_multinomial_examples():
    assert multinomial(3, [2, 1]) == 3
    assert multinomial(6, [2, 3, 1]) == 60
    assert multinomial(4, [4, 0, 0]) == 1


def test_multinomial_matches_factorials():
    for parts in itertools.product(range(5), repeat=3):
        n = sum(parts)
        expected = math.factorial(n)
        for p in parts:
            expected //= math.factorial(p)
        assert multinomial(n, list(parts)) == expected


def test_multinomial_sum_mismatch():
    with pytest.raises(ValueError, match="sum to n"):
        multinomial(5, [2, 2])
    with pytest.raises(ValueError):
        multinomial(2, [3, -1])


def test_multinomials_over_compositions_total_k_to_n():
    for k in (2, 3, 4):
        for n in range(0, 8):
            total = sum(
                multinomial(n, comp)
                for comp in itertools.product(range(n + 1), repeat=k)
                if sum(comp) == n
            )
            assert total == k**n


def test_log_multinomial_accuracy():
    for parts in [(3, 3), (10, 5, 5), (500, 300, 200)]:
        n = sum(parts)
        exact = math.log(multinomial(n, parts))
        assert abs(log_multinomial(n, parts) - exact) < 1e-9


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------


def test_partitions_6_into_3():
    got = [p.parts for p in partitions(6, 3)]
    assert got == [
        (6,), (5, 1), (4, 2), (4, 1, 1), (3, 3), (3, 2, 1), (2, 2, 2),
    ]


def test_partitions_empty_case():
    assert [p.parts for p in partitions(0, 3)] == [()]


def test_partitions_20_into_6_contains_88_1111():
    match = [p for p in partitions(20, 6) if p.parts == (8, 8, 1, 1, 1, 1)]
    assert len(match) == 1
    part = match[0]
    assert part.length == 6
    assert part.max_part == 8
    assert part.multiplicities == ((8, 2), (1, 4))


def test_partitions_count_matches_recurrence():
    for n in range(0, 31):
        for k in range(1, 9):
            assert sum(1 for _ in partitions(n, k)) == count_partitions_atmost(n, k)


def test_partitions_order_and_invariants():
    for n, k in [(9, 4), (12, 3), (7, 7)]:
        seen = [p.parts for p in partitions(n, k)]
        assert seen == sorted(seen, reverse=True)
        assert len(set(seen)) == len(seen)
        for parts in seen:
            assert sum(parts) == n
            assert len(parts) <= k
            assert list(parts) == sorted(parts, reverse=True)


def test_partitions_validation():
    with pytest.raises(ValueError):
        list(partitions(-1, 3))
    with pytest.raises(ValueError):
        list(partitions(3, 0))
    with pytest.raises(ValueError):
        IntegerPartition((1, 2))


# ---------------------------------------------------------------------------
# histogram transition probability
# ---------------------------------------------------------------------------


def test_histogram_transition_symbolic_entries():
    p = Fraction(3, 4)
    assert krr_histogram_transition(3, 0, 3, 0, p) == p**3
    assert krr_histogram_transition(2, 1, 3, 0, p) == p**2 * (1 - p)
    assert krr_histogram_transition(2, 1, 2, 1, p) == Fraction(33, 64)
    assert float(Fraction(33, 64)) == 0.515625


def test_histogram_transition_count_mismatch():
    with pytest.raises(ValueError, match="count-sum mismatch"):
        krr_histogram_transition(2, 1, 2, 2, Fraction(3, 4))


def test_histogram_transition_rejects_out_of_range_p():
    with pytest.raises(ValueError):
        krr_histogram_transition(1, 1, 1, 1, Fraction(1, 4))


@pytest.mark.parametrize("p", [Fraction(1, 2), Fraction(3, 5), Fraction(3, 4), Fraction(1)])
def test_histogram_transition_rows_normalize(p):
    for n in range(1, 9):
        for a_in in range(n + 1):
            total = sum(
                krr_histogram_transition(a_in, n - a_in, a_out, n - a_out, p)
                for a_out in range(n + 1)
            )
            assert total == 1


@pytest.mark.parametrize("p", [Fraction(1, 2), Fraction(3, 5), Fraction(3, 4), Fraction(1)])
def test_histogram_transition_matches_enumeration(p):
    for n in range(1, 7):
        for a_in in range(n + 1):
            for a_out in range(n + 1):
                assert krr_histogram_transition(
                    a_in, n - a_in, a_out, n - a_out, p
                ) == brute_histogram_transition(a_in, n - a_in, a_out, n - a_out, p)


# ---------------------------------------------------------------------------
# epsilon <-> p
# ---------------------------------------------------------------------------


def test_epsilon_to_p_examples():
    assert epsilon_to_p(0.0, 2) == 0.5
    assert p_to_epsilon(0.75, 2) == pytest.approx(math.log(3))


def test_p_to_epsilon_singularities():
    with pytest.raises(ValueError, match="infinite"):
        p_to_epsilon(1.0, 2)
    with pytest.raises(ValueError, match="below uniform"):
        p_to_epsilon(0.2, 3)
    with pytest.raises(ValueError):
        epsilon_to_p(-0.5, 2)


@given(st.floats(min_value=0.0, max_value=10.0), st.integers(min_value=2, max_value=10))
@settings(max_examples=200)
def test_epsilon_p_round_trip(epsilon, k):
    p = epsilon_to_p(epsilon, k)
    assert 1 / k - 1e-12 <= p <= 1
    if p < 1:
        assert p_to_epsilon(p, k) == pytest.approx(epsilon, abs=1e-9)
