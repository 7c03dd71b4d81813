import itertools
from fractions import Fraction

import pytest

from rrshuffle.channels import CapExceededError
from rrshuffle.combinatorics import krr_histogram_transition
from rrshuffle.oracle import (
    ORACLE_CAP,
    oracle_histogram_transition,
    oracle_posterior,
)


def test_oracle_shuffle_n3():
    assert oracle_posterior(3, 2, ["shuffle"]) == Fraction(3, 4)


def test_oracle_noise_then_shuffle_n3():
    assert oracle_posterior(3, 2, ["krr", "shuffle"], Fraction(3, 4)) == Fraction(5, 8)


def test_oracle_noise_alone():
    assert oracle_posterior(2, 2, ["krr"], Fraction(9, 10)) == Fraction(9, 10)


def test_oracle_pipeline_order_irrelevant():
    for n, k in [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)]:
        for p in (Fraction(1, 2), Fraction(3, 4), Fraction(1)):
            if p < Fraction(1, k):
                continue
            assert oracle_posterior(n, k, ["krr", "shuffle"], p) == oracle_posterior(
                n, k, ["shuffle", "krr"], p
            )


def test_oracle_rejects_excess_size():
    assert 3**7 > ORACLE_CAP
    with pytest.raises(CapExceededError, match="desk-scale"):
        oracle_posterior(7, 3, ["shuffle"])


def test_oracle_requires_rational_p():
    with pytest.raises(ValueError, match="rational-only"):
        oracle_posterior(2, 2, ["krr"], 0.9)
    with pytest.raises(ValueError, match="no p"):
        oracle_posterior(2, 2, ["krr"])
    with pytest.raises(ValueError, match="unknown pipeline stage"):
        oracle_posterior(2, 2, ["laplace"], Fraction(1, 2))


def test_oracle_histogram_transition_examples():
    p = Fraction(3, 4)
    # three datasets share the (2, 1) histogram; summing their noise
    # probabilities from aab gives 33/64
    assert oracle_histogram_transition((0, 0, 1), (2, 1), p) == Fraction(33, 64)
    assert oracle_histogram_transition((0, 0, 1), (2, 1), Fraction(1)) == 1
    total = sum(
        oracle_histogram_transition((0, 0, 1), (a, 3 - a), p) for a in range(4)
    )
    assert total == 1


def test_oracle_histogram_transition_general_k():
    p = Fraction(1, 2)
    x = (0, 1, 2)
    total = Fraction(0)
    for z in itertools.product(range(4), repeat=3):
        if sum(z) != 3:
            continue
        total += oracle_histogram_transition(x, z, p)
    assert total == 1


def test_oracle_histogram_transition_matches_formula():
    for p in (Fraction(1, 2), Fraction(3, 5), Fraction(3, 4), Fraction(1)):
        for n in range(1, 9):
            for a_in in range(n + 1):
                x = (0,) * a_in + (1,) * (n - a_in)
                for a_out in range(n + 1):
                    assert oracle_histogram_transition(
                        x, (a_out, n - a_out), p
                    ) == krr_histogram_transition(a_in, n - a_in, a_out, n - a_out, p)


def test_oracle_histogram_transition_validation():
    with pytest.raises(ValueError, match="sum"):
        oracle_histogram_transition((0, 1), (1, 2), Fraction(3, 4))
    with pytest.raises(ValueError, match="rational-only"):
        oracle_histogram_transition((0, 1), (1, 1), 0.75)
