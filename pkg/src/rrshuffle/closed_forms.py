"""Posterior-vulnerability formulas: exact, fast, and asymptotic.

Everything here targets the single-target adversary with a uniform prior
over datasets.  The binary formulas are closed-form and cheap at any n.
For general k the sums run over integer partitions (one term per
partition instead of one per labeled histogram), exactly for moderate n
and in log-space binary64 for large sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Literal, NamedTuple, Optional

from .combinatorics import (
    IntegerPartition,
    binomial,
    log_multinomial,
    multinomial,
    partitions,
)
from .scalars import Scalar, is_exact, require_probability

#: Largest n for which the general-k evaluators default to exact rationals.
EXACT_N_DEFAULT = 64


@dataclass(frozen=True)
class MechanismSpec:
    """A mechanism to analyze: per-record noise, shuffling, or both."""

    kind: Literal["krr", "shuffle", "krr-shuffle"]
    n: int
    k: int
    p: Optional[Scalar] = None  # ignored for pure shuffle

    def __post_init__(self):
        if self.kind not in ("krr", "shuffle", "krr-shuffle"):
            raise ValueError("unknown mechanism kind %r" % (self.kind,))
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.kind != "shuffle":
            if self.p is None:
                raise ValueError("mechanism %r needs p" % (self.kind,))
            require_probability(self.p, Fraction(1, self.k))


# ---------------------------------------------------------------------------
# Per-record noise alone
# ---------------------------------------------------------------------------


def v_post_krr(p: Scalar, k: int) -> Scalar:
    """Noise alone leaves the target's report as the best guess: V = p,
    independent of the dataset size."""
    require_probability(p, Fraction(1, k))
    return p


# ---------------------------------------------------------------------------
# Binary alphabet
# ---------------------------------------------------------------------------


def v_post_shuffle_binary_sum(n: int) -> Fraction:
    """Shuffle alone, binary, by direct summation over histograms:
    (1/2^n) sum_i C(n,i) max(i, n-i)/n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    total = sum(binomial(n, i) * max(i, n - i) for i in range(n + 1))
    return Fraction(total, 2**n * n)


def v_post_shuffle_binary_fast(n: int) -> Fraction:
    """Shuffle alone, binary, single-binomial form:
    1/2 + C(n-1, floor((n-1)/2)) / 2^n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return Fraction(1, 2) + Fraction(binomial(n - 1, (n - 1) // 2), 2**n)


def v_post_ns_binary_sum(n: int, p: Scalar) -> Scalar:
    """Noise then shuffle, binary, by direct summation:
    (1/2^n) sum_i C(n,i) (max(i,n-i) p + min(i,n-i) (1-p)) / n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    require_probability(p, Fraction(1, 2))
    if is_exact(p):
        p = Fraction(p)
        total = sum(
            binomial(n, i) * (max(i, n - i) * p + min(i, n - i) * (1 - p))
            for i in range(n + 1)
        )
        return total / (Fraction(2) ** n * n)
    total = 0.0
    for i in range(n + 1):
        weight = float(Fraction(binomial(n, i), 2**n))
        total += weight * (max(i, n - i) * p + min(i, n - i) * (1 - p)) / n
    return total


def v_post_ns_binary_fast(n: int, p: Scalar) -> Scalar:
    """Noise then shuffle, binary, single-binomial form:
    1/2 + C(n-1, floor((n-1)/2)) (2p - 1) / 2^n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    require_probability(p, Fraction(1, 2))
    weight = Fraction(binomial(n - 1, (n - 1) // 2), 2**n)
    if is_exact(p):
        return Fraction(1, 2) + weight * (2 * Fraction(p) - 1)
    return 0.5 + float(weight) * (2 * p - 1)


# ---------------------------------------------------------------------------
# General alphabet via integer partitions
# ---------------------------------------------------------------------------


def _partition_coefficient(n: int, k: int, part: IntegerPartition) -> int:
    """Number of datasets sharing a histogram shape, times the histogram
    labelings: multinomial(n; parts) * multinomial(k; multiplicities, k - l)."""
    counts = [c for _, c in part.multiplicities]
    return multinomial(n, part.parts) * multinomial(k, counts + [k - part.length])


def _log_partition_coefficient(n: int, k: int, part: IntegerPartition) -> float:
    counts = [c for _, c in part.multiplicities]
    return log_multinomial(n, part.parts) + log_multinomial(
        k, counts + [k - part.length]
    )


def _compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def _pick_exact(n: int, exact: Optional[bool], p: Scalar = Fraction(1)) -> bool:
    if exact is not None:
        return exact
    return n <= EXACT_N_DEFAULT and is_exact(p)


def v_post_shuffle_general(
    n: int,
    k: int,
    method: Literal["partition", "composition"] = "partition",
    exact: Optional[bool] = None,
) -> Scalar:
    """Shuffle alone for any alphabet size.

    The underlying sum runs over all histograms, weighting each by its
    multinomial count and scoring the adversary's best guess max_j n_j / n.
    The default groups histograms by their partition shape, collapsing
    the labeled-histogram blow-up to one term per partition; the
    composition method evaluates the ungrouped sum and is kept as a slow
    reference.  Exact by default up to n = 64, log-space binary64 above.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if k < 2:
        raise ValueError("k must be at least 2")
    use_exact = _pick_exact(n, exact)

    if method == "composition":
        total = sum(
            multinomial(n, comp) * max(comp) for comp in _compositions(n, k)
        )
        result = Fraction(total, k**n * n)
        return result if use_exact else float(result)
    if method != "partition":
        raise ValueError("method must be 'partition' or 'composition'")

    if use_exact:
        total = sum(
            _partition_coefficient(n, k, lam) * lam.max_part
            for lam in partitions(n, k)
        )
        return Fraction(total, k**n * n)

    log_norm = n * math.log(k) + math.log(n)
    acc = 0.0
    comp = 0.0  # Kahan compensation
    for lam in partitions(n, k):
        term = math.exp(
            _log_partition_coefficient(n, k, lam) + math.log(lam.max_part) - log_norm
        )
        y = term - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    return acc


def v_post_ns_general(
    n: int,
    k: int,
    p: Scalar,
    method: Literal["relation", "partition"] = "relation",
    exact: Optional[bool] = None,
) -> Scalar:
    """Noise then shuffle for any alphabet size.

    The default rewrites the sum as a linear function of the pure-shuffle
    value: V = V_S (kp - 1)/(k - 1) + (1 - p)/(k - 1).  The partition
    method evaluates the direct sum, whose per-histogram score is
    (n* p + (n - n*)(1-p)/(k-1)) / n, and is kept for cross-checking.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    require_probability(p, Fraction(1, k))
    use_exact = _pick_exact(n, exact, p)

    if method == "relation":
        v_s = v_post_shuffle_general(n, k, exact=use_exact)
        if use_exact:
            p = Fraction(p)
            return v_s * Fraction(k * p - 1, k - 1) + Fraction(1 - p, k - 1)
        v_s = float(v_s)
        return v_s * (k * p - 1) / (k - 1) + (1 - p) / (k - 1)
    if method != "partition":
        raise ValueError("method must be 'relation' or 'partition'")

    if use_exact:
        p = Fraction(p)
        total = Fraction(0)
        for lam in partitions(n, k):
            score = lam.max_part * p + (n - lam.max_part) * (1 - p) / (k - 1)
            total += _partition_coefficient(n, k, lam) * score
        return total / (Fraction(k) ** n * n)

    p = float(p)
    log_norm = n * math.log(k) + math.log(n)
    acc = 0.0
    comp = 0.0
    for lam in partitions(n, k):
        coeff = math.exp(_log_partition_coefficient(n, k, lam) - log_norm)
        score = lam.max_part * p + (n - lam.max_part) * (1 - p) / (k - 1)
        term = coeff * score
        y = term - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    return acc


# ---------------------------------------------------------------------------
# The scaled maximum-load integer
# ---------------------------------------------------------------------------


def scaled_max_load(n: int, k: int) -> int:
    """k^n times the expected maximum bin load when n balls land
    uniformly in k labeled bins; an exact integer.

    Summed over integer partitions of n, each term being
    max_part * n!/(prod parts!) / (prod multiplicities!) * l! * C(k, l).
    Equals k^n * n * v_post_shuffle_general(n, k).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if k < 1:
        raise ValueError("k must be at least 1")
    total = 0
    for lam in partitions(n, n):
        length = lam.length
        if length > k:
            continue  # C(k, l) = 0
        term = math.factorial(n)
        for part in lam.parts:
            term //= math.factorial(part)
        for _, count in lam.multiplicities:
            term //= math.factorial(count)
        term *= math.factorial(length) * math.comb(k, length) * lam.max_part
        total += term
    return total


def scaled_max_load_via_multinomials(n: int, k: int) -> int:
    """Same integer as :func:`scaled_max_load`, written with the pair of
    multinomial coefficients used by the vulnerability sum."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if k < 1:
        raise ValueError("k must be at least 1")
    return sum(
        _partition_coefficient(n, k, lam) * lam.max_part for lam in partitions(n, k)
    )


# ---------------------------------------------------------------------------
# Asymptotic approximations
# ---------------------------------------------------------------------------


class ApproxValue(NamedTuple):
    """An asymptotic estimate plus whether n is in the regime n >= k ln k."""

    value: float
    in_regime: bool


def v_approx_shuffle(n: int, k: int, f: float = 1.0) -> ApproxValue:
    """Maximum-load approximation of the shuffle vulnerability:
    1/k + f sqrt(ln k / (k n)).

    f is the hidden constant of the asymptotic bound; f = 1 is a good
    empirical fit but carries no guarantee.  Outside the regime
    n >= k ln k the value is still returned, flagged.
    """
    if n < 1 or k < 2:
        raise ValueError("need n >= 1 and k >= 2")
    value = 1.0 / k + f * math.sqrt(math.log(k) / (k * n))
    return ApproxValue(value, n >= k * math.log(k))


def v_approx_ns(n: int, k: int, p: Scalar, f: float = 1.0) -> ApproxValue:
    """Noise-then-shuffle approximation: the shuffle deviation from 1/k
    scaled by (kp - 1)/(k - 1)."""
    require_probability(p, Fraction(1, k))
    base = v_approx_shuffle(n, k, f)
    deviation = base.value - 1.0 / k
    return ApproxValue(1.0 / k + deviation * (k * float(p) - 1) / (k - 1), base.in_regime)


# ---------------------------------------------------------------------------
# Dispatch for the CLI
# ---------------------------------------------------------------------------


def posterior_for(
    spec: MechanismSpec,
    method: Literal["closed", "sum", "approx"] = "closed",
    exact: Optional[bool] = None,
) -> Scalar:
    """Posterior single-target vulnerability of a mechanism spec.

    method 'closed' uses the fast forms (binary single-binomial,
    partition sum, linear relation); 'sum' the direct summation forms;
    'approx' the asymptotic estimate with f = 1.
    """
    n, k, p = spec.n, spec.k, spec.p
    if spec.kind == "krr":
        if method == "approx":
            raise ValueError("no asymptotic form for noise alone; V = p exactly")
        return v_post_krr(p, k)
    if spec.kind == "shuffle":
        if method == "approx":
            return v_approx_shuffle(n, k).value
        if k == 2:
            result = (
                v_post_shuffle_binary_fast(n)
                if method == "closed"
                else v_post_shuffle_binary_sum(n)
            )
            return result if _pick_exact(n, exact) else float(result)
        return v_post_shuffle_general(
            n, k, method="partition" if method == "closed" else "composition",
            exact=exact,
        )
    # noise then shuffle
    if method == "approx":
        return v_approx_ns(n, k, p).value
    if k == 2:
        if method == "closed":
            result = v_post_ns_binary_fast(n, p)
        else:
            result = v_post_ns_binary_sum(n, p)
        if _pick_exact(n, exact, p) or not is_exact(result):
            return result
        return float(result)
    return v_post_ns_general(
        n, k, p, method="relation" if method == "closed" else "partition",
        exact=exact,
    )
