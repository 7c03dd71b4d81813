"""Priors, gain functions, and the g-vulnerability of channels.

Vulnerability is the expected gain of an adversary acting optimally:
before observing a channel output (prior) or after (posterior, averaging
the best action per output).  Leakage compares the two.  Also includes
the strong all-but-one adversary who already knows every record except
the target's.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from .channels import (
    CanonicalChannel,
    Channel,
    dataset_label,
    enumerate_datasets,
    value_name,
)
from .combinatorics import krr_histogram_transition
from .scalars import FLOAT_TOL, Scalar, all_exact, require_probability


@dataclass(frozen=True)
class Prior:
    """Probability distribution over secrets, indexed by label."""

    labels: tuple[str, ...]
    probs: tuple[Scalar, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.probs):
            raise ValueError("labels and probabilities differ in length")
        if any(p < 0 for p in self.probs):
            raise ValueError("negative probability")
        total = sum(self.probs)
        if all_exact(self.probs):
            if total != 1:
                raise ValueError("probabilities sum to %s, not 1" % total)
        elif abs(total - 1) > FLOAT_TOL:
            raise ValueError("probabilities sum to %r, not 1" % total)

    @classmethod
    def uniform(cls, labels: Sequence[str], exact: bool = True) -> "Prior":
        m = len(labels)
        weight: Scalar = Fraction(1, m) if exact else 1.0 / m
        return cls(tuple(labels), (weight,) * m)


@dataclass(frozen=True)
class GainFunction:
    """Action-by-secret table of non-negative gains."""

    actions: tuple[str, ...]
    secret_labels: tuple[str, ...]
    gains: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        if len(self.gains) != len(self.actions):
            raise ValueError("one gain row per action required")
        for action, row in zip(self.actions, self.gains):
            if len(row) != len(self.secret_labels):
                raise ValueError("gain row for %r has wrong width" % action)
            if any(g < 0 for g in row):
                raise ValueError("gains must be non-negative")

    def scaled(self, factor: Scalar) -> "GainFunction":
        if factor <= 0:
            raise ValueError("scaling factor must be positive")
        return GainFunction(
            self.actions,
            self.secret_labels,
            tuple(tuple(g * factor for g in row) for row in self.gains),
        )


def single_target_gain(n: int, k: int, target: int = 0) -> GainFunction:
    """Gain 1 for correctly guessing one individual's value, 0 otherwise.

    Actions are the k attribute values; the guess is scored against the
    record at ``target`` (the first individual by default).
    """
    if not 0 <= target < n:
        raise ValueError("target index out of range")
    X = enumerate_datasets(n, k)
    labels = tuple(dataset_label(x, k) for x in X)
    actions = tuple(value_name(w, k) for w in range(k))
    gains = tuple(
        tuple(1 if x[target] == w else 0 for x in X) for w in range(k)
    )
    return GainFunction(actions, labels, gains)


def prior_vulnerability(prior: Prior, gain: GainFunction) -> Scalar:
    """Best expected gain from the prior alone: max_w sum_x pi_x g(w, x)."""
    if not gain.actions:
        raise ValueError("gain function has no actions")
    if gain.secret_labels != prior.labels:
        raise ValueError("gain function and prior index different secrets")
    return max(
        sum(p * g for p, g in zip(prior.probs, row) if g)
        for row in gain.gains
    )


def posterior_vulnerability(prior: Prior, gain: GainFunction, channel: Channel) -> Scalar:
    """Expected gain after observing the channel:
    sum_y max_w sum_x pi_x C[x,y] g(w, x)."""
    if not gain.actions:
        raise ValueError("gain function has no actions")
    if channel.row_labels != prior.labels:
        raise ValueError("channel rows and prior index different secrets")
    if gain.secret_labels != prior.labels:
        raise ValueError("gain function and prior index different secrets")
    # Weighted rows pi_x * C[x, :], with per-action support precomputed.
    weighted = [
        [p * e for e in row] if p else None
        for p, row in zip(prior.probs, channel.rows)
    ]
    support = [
        [(i, g) for i, g in enumerate(row) if g] for row in gain.gains
    ]
    total: Scalar = 0
    for j in range(len(channel.col_labels)):
        best: Scalar = 0
        for entries in support:
            s: Scalar = 0
            for i, g in entries:
                wrow = weighted[i]
                if wrow is not None:
                    s += wrow[j] * g
            if s > best:
                best = s
        total += best
    return total


def canonical_posterior_vulnerability(canon: CanonicalChannel, gain: GainFunction) -> Scalar:
    """Posterior vulnerability read off a canonical form.

    Valid for the uniform prior the canonical form was taken under:
    sum over stored columns of outer * max_w <posterior, g(w, .)>.
    """
    if gain.secret_labels != canon.row_labels:
        raise ValueError("gain function indexes different secrets")
    total: Scalar = 0
    for outer, posterior in canon.columns:
        best = max(
            sum(q * g for q, g in zip(posterior, row) if g)
            for row in gain.gains
        )
        total += outer * best
    return total


def leakage(
    prior: Prior,
    gain: GainFunction,
    channel: Channel,
    mode: Literal["multiplicative", "additive"] = "multiplicative",
) -> Scalar:
    """Posterior/prior vulnerability ratio, or their difference."""
    before = prior_vulnerability(prior, gain)
    after = posterior_vulnerability(prior, gain, channel)
    if mode == "multiplicative":
        if before == 0:
            raise ValueError("multiplicative leakage undefined: prior vulnerability is 0")
        if all_exact((after, before)):
            return Fraction(after) / Fraction(before)
        return after / before
    if mode == "additive":
        return after - before
    raise ValueError("mode must be 'multiplicative' or 'additive'")


# ---------------------------------------------------------------------------
# The all-but-one (strong) adversary, binary alphabet
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AboScenario:
    """Adversary who knows all records except the target's.

    ``known_a`` counts how many of the n-1 known records hold value 'a';
    the rest hold 'b'.  Only two datasets remain possible, differing in
    the target's record.
    """

    n: int
    p: Scalar
    known_a: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 0 <= self.known_a <= self.n - 1:
            raise ValueError("known_a must lie in [0, n-1]")
        require_probability(self.p, Fraction(1, 2))


def abo_posterior(scenario: AboScenario) -> Scalar:
    """Posterior vulnerability of noise-then-shuffle for the all-but-one
    adversary: half the sum, over output histograms, of the larger of
    the two candidate datasets' transition probabilities.

    Works directly on the n+1 binary histograms via the histogram
    transition probabilities, so it runs in O(n^2) without touching the
    2**n dataset space.
    """
    n, p = scenario.n, scenario.p
    known_b = n - 1 - scenario.known_a
    a_count_if_a = scenario.known_a + 1  # target holds 'a'
    a_count_if_b = scenario.known_a      # target holds 'b'
    total: Scalar = 0
    for a_out in range(n + 1):
        b_out = n - a_out
        if_a = krr_histogram_transition(a_count_if_a, known_b, a_out, b_out, p)
        if_b = krr_histogram_transition(a_count_if_b, known_b + 1, a_out, b_out, p)
        total += if_a if if_a >= if_b else if_b
    if all_exact((total,)):
        return Fraction(total) / 2
    return total / 2
