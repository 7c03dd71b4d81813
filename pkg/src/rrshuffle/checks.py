"""Named invariant suites behind the ``check`` CLI command.

Each suite exercises one family of properties on a small grid and
reports a pass/fail line per property instance.  All comparisons run in
exact rationals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import closed_forms as cf
from .channels import (
    CascadeTypeError,
    build_krr,
    build_krr_reduced,
    build_shuffle_full,
    build_shuffle_reduced,
    cascade,
    equivalent,
)
from .combinatorics import partitions
from .oracle import ORACLE_CAP, oracle_posterior
from .vulnerability import (
    GainFunction,
    Prior,
    posterior_vulnerability,
    single_target_gain,
)

P_GRID = (Fraction(1, 2), Fraction(3, 4), Fraction(1))
P_GRID_ORACLE = (
    Fraction(1, 2),
    Fraction(3, 5),
    Fraction(3, 4),
    Fraction(9, 10),
    Fraction(1),
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    results: list[CheckResult] = field(default_factory=list)

    def record(self, name: str, passed: bool, detail: str = ""):
        self.results.append(CheckResult(name, passed, detail))

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)


def suite_equivalence(max_n: int = 5) -> list[CheckResult]:
    """Leakage equivalences between full and reduced channels."""
    report = Report()
    for k in (2, 3):
        for n in range(1, max_n + 1):
            s = build_shuffle_full(n, k)
            sr = build_shuffle_reduced(n, k)
            report.record(
                "shuffle equivalent to reduced shuffle (n=%d, k=%d)" % (n, k),
                equivalent(s, sr),
            )
            for p in P_GRID:
                if p < Fraction(1, k):
                    continue
                noise = build_krr(n, k, p)
                ns = cascade(noise, s)
                nsr = cascade(noise, sr)
                report.record(
                    "noise+shuffle equivalent to noise+reduced shuffle "
                    "(n=%d, k=%d, p=%s)" % (n, k, p),
                    equivalent(ns, nsr),
                )
                sn = cascade(s, noise)
                srnr = cascade(sr, build_krr_reduced(n, k, p))
                report.record(
                    "shuffle+noise equivalent to reduced shuffle+reduced noise "
                    "(n=%d, k=%d, p=%s)" % (n, k, p),
                    equivalent(sn, srnr),
                )
    return report.results


def suite_commute(max_n: int = 5) -> list[CheckResult]:
    """Order-independence of noise and shuffling."""
    report = Report()
    for k in (2, 3):
        for n in range(1, max_n + 1):
            s = build_shuffle_full(n, k)
            sr = build_shuffle_reduced(n, k)
            for p in P_GRID:
                if p < Fraction(1, k):
                    continue
                noise = build_krr(n, k, p)
                report.record(
                    "noise+shuffle equivalent to shuffle+noise (n=%d, k=%d, p=%s)"
                    % (n, k, p),
                    equivalent(cascade(noise, s), cascade(s, noise)),
                )
                nsr = cascade(noise, sr)
                srnr = cascade(sr, build_krr_reduced(n, k, p))
                report.record(
                    "noise+reduced shuffle equals reduced shuffle+reduced noise "
                    "entrywise (n=%d, k=%d, p=%s)" % (n, k, p),
                    nsr == srnr,
                )
    # The reverse reduced order is ill-typed: histograms cannot feed the
    # dataset-indexed noise channel.
    try:
        cascade(build_shuffle_reduced(2, 2), build_krr(2, 2, Fraction(3, 4)))
        report.record("reduced shuffle into full noise is rejected", False,
                      "cascade unexpectedly succeeded")
    except CascadeTypeError:
        report.record("reduced shuffle into full noise is rejected", True)
    return report.results


def _oracle_grid(max_n: int):
    for k, n_cap in ((2, 8), (3, 5), (4, 4)):
        for n in range(1, min(max_n, n_cap) + 1):
            if k**n <= ORACLE_CAP:
                yield n, k


def suite_oracle(max_n: int = 8) -> list[CheckResult]:
    """Exact agreement of every closed form with brute force."""
    report = Report()
    for n, k in _oracle_grid(max_n):
        truth_s = oracle_posterior(n, k, ["shuffle"])
        forms = {"partition sum": cf.v_post_shuffle_general(n, k, exact=True)}
        if k == 2:
            forms["binary sum"] = cf.v_post_shuffle_binary_sum(n)
            forms["binary fast form"] = cf.v_post_shuffle_binary_fast(n)
        for label, value in forms.items():
            report.record(
                "shuffle %s matches oracle (n=%d, k=%d)" % (label, n, k),
                value == truth_s,
                "%s != %s" % (value, truth_s),
            )
        for p in P_GRID_ORACLE:
            if p < Fraction(1, k):
                continue
            truth_ns = oracle_posterior(n, k, ["krr", "shuffle"], p)
            forms = {
                "linear relation": cf.v_post_ns_general(n, k, p, exact=True),
                "partition sum": cf.v_post_ns_general(
                    n, k, p, method="partition", exact=True
                ),
            }
            if k == 2:
                forms["binary sum"] = cf.v_post_ns_binary_sum(n, p)
                forms["binary fast form"] = cf.v_post_ns_binary_fast(n, p)
            for label, value in forms.items():
                report.record(
                    "noise+shuffle %s matches oracle (n=%d, k=%d, p=%s)"
                    % (label, n, k, p),
                    value == truth_ns,
                    "%s != %s" % (value, truth_ns),
                )
    return report.results


def suite_max_load(max_n: int = 12) -> list[CheckResult]:
    """Partition-sum identities for the scaled maximum load."""
    report = Report()
    count = sum(1 for _ in partitions(6, 3))
    report.record("partitions(6, 3) yields exactly 7 partitions", count == 7,
                  "got %d" % count)
    for k in range(2, 6):
        for n in range(1, max_n + 1):
            factorial_form = cf.scaled_max_load(n, k)
            multinomial_form = cf.scaled_max_load_via_multinomials(n, k)
            report.record(
                "factorial and multinomial max-load forms agree (n=%d, k=%d)"
                % (n, k),
                factorial_form == multinomial_form,
            )
            via_v = cf.v_post_shuffle_general(n, k, exact=True) * k**n * n
            report.record(
                "max load equals k^n * n * shuffle vulnerability (n=%d, k=%d)"
                % (n, k),
                factorial_form == via_v,
            )
            composition = cf.v_post_shuffle_general(
                n, k, method="composition", exact=True
            )
            partition = cf.v_post_shuffle_general(n, k, exact=True)
            report.record(
                "partition sum equals composition sum (n=%d, k=%d)" % (n, k),
                composition == partition,
            )
    return report.results


def suite_fastform(max_n: int = 64) -> list[CheckResult]:
    """Single-binomial forms equal the direct sums, exactly."""
    report = Report()
    shuffle_ok = all(
        cf.v_post_shuffle_binary_fast(n) == cf.v_post_shuffle_binary_sum(n)
        for n in range(1, max_n + 1)
    )
    report.record(
        "binary shuffle fast form equals sum for n <= %d" % max_n, shuffle_ok
    )
    for p in P_GRID_ORACLE:
        ok = all(
            cf.v_post_ns_binary_fast(n, p) == cf.v_post_ns_binary_sum(n, p)
            for n in range(1, max_n + 1)
        )
        report.record(
            "binary noise+shuffle fast form equals sum for n <= %d (p=%s)"
            % (max_n, p),
            ok,
        )
    return report.results


def random_prior_gain(rng: random.Random, labels: tuple[str, ...], k: int):
    """A random rational prior and gain function over the given secrets."""
    weights = [rng.randint(0, 9) for _ in labels]
    if sum(weights) == 0:
        weights[rng.randrange(len(weights))] = 1
    total = sum(weights)
    prior = Prior(labels, tuple(Fraction(w, total) for w in weights))
    n_actions = rng.randint(2, k + 1)
    gains = tuple(
        tuple(Fraction(rng.randint(0, 4), 4) for _ in labels)
        for _ in range(n_actions)
    )
    gain = GainFunction(tuple("w%d" % i for i in range(n_actions)), labels, gains)
    return prior, gain


def suite_dpi(max_n: int = 4, pairs: int = 50, seed: int = 23517) -> list[CheckResult]:
    """Shuffling the noisy output can never increase vulnerability."""
    report = Report()
    n = min(max_n, 4)
    rng = random.Random(seed)
    for k in (2, 3):
        noise_by_p = {
            p: build_krr(n, k, p) for p in (Fraction(3, 5), Fraction(9, 10))
        }
        shuffled = build_shuffle_full(n, k)
        ns_by_p = {p: cascade(noise, shuffled) for p, noise in noise_by_p.items()}
        labels = noise_by_p[Fraction(3, 5)].row_labels
        worst = None
        ok = True
        for _ in range(pairs):
            prior, gain = random_prior_gain(rng, labels, k)
            for p, noise in noise_by_p.items():
                v_noise = posterior_vulnerability(prior, gain, noise)
                v_ns = posterior_vulnerability(prior, gain, ns_by_p[p])
                if v_ns > v_noise:
                    ok = False
                    worst = "V_NS=%s > V_N=%s at p=%s" % (v_ns, v_noise, p)
        report.record(
            "post-shuffle vulnerability never exceeds noise-only "
            "(n=%d, k=%d, %d random prior/gain pairs)" % (n, k, pairs),
            ok,
            worst or "",
        )
        # Spot check with the canonical single-target adversary too.
        uniform = Prior.uniform(labels)
        target = single_target_gain(n, k)
        for p, noise in noise_by_p.items():
            v_noise = posterior_vulnerability(uniform, target, noise)
            v_ns = posterior_vulnerability(uniform, target, ns_by_p[p])
            report.record(
                "single-target post-shuffle bound (n=%d, k=%d, p=%s)" % (n, k, p),
                v_ns <= v_noise,
            )
    return report.results


SUITES = {
    "equivalence": suite_equivalence,
    "commute": suite_commute,
    "oracle": suite_oracle,
    "brown": suite_max_load,
    "fastform": suite_fastform,
    "dpi": suite_dpi,
}

DEFAULT_MAX_N = {
    "equivalence": 5,
    "commute": 5,
    "oracle": 8,
    "brown": 12,
    "fastform": 64,
    "dpi": 4,
}


def run_suite(name: str, max_n: int = None) -> list[CheckResult]:
    if name not in SUITES:
        raise ValueError(
            "unknown suite %r (choose from %s)" % (name, ", ".join(sorted(SUITES)))
        )
    if max_n is None:
        max_n = DEFAULT_MAX_N[name]
    return SUITES[name](max_n)
