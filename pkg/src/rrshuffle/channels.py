"""Channels for per-record randomization and shuffling, and their algebra.

A channel is a row-stochastic matrix from secrets to observables, with
explicit row/column labels.  Secrets here are datasets (tuples of n
attribute values from a k-letter alphabet, position 0 being the target
individual) and observables are either datasets or histograms.

Channels are immutable after construction; builders, cascade and the
comparison operations are pure, so values can be shared freely across
threads.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import krr_histogram_transition
from .scalars import FLOAT_TOL, Scalar, all_exact, close, is_exact, require_probability

#: Default bound on k**n for full (dataset-indexed) channel construction.
DEFAULT_CAP = 2**20


class CapExceededError(ValueError):
    """A construction would enumerate more datasets than the size cap allows."""


class CascadeTypeError(ValueError):
    """Two channels cannot be cascaded: inner dimensions/labels differ."""


# ---------------------------------------------------------------------------
# Alphabets, datasets, histograms and their labels
# ---------------------------------------------------------------------------

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def value_name(value: int, k: int) -> str:
    """Printable name of attribute value ``value`` in a k-letter alphabet."""
    if not 0 <= value < k:
        raise ValueError("value out of range")
    if k <= len(_LETTERS):
        return _LETTERS[value]
    return "v%d" % value


def dataset_label(x: tuple[int, ...], k: int) -> str:
    if k <= len(_LETTERS):
        return "".join(_LETTERS[v] for v in x)
    return ":".join("v%d" % v for v in x)


def histogram_label(counts: tuple[int, ...], k: int) -> str:
    """Label like ``a2:b1`` giving the count of each attribute value."""
    return ":".join("%s%d" % (value_name(j, k), c) for j, c in enumerate(counts))


def enumerate_datasets(n: int, k: int) -> list[tuple[int, ...]]:
    """All datasets of n records, base-k big-endian: the target's value
    (position 0) is the most significant digit."""
    return list(itertools.product(range(k), repeat=n))


def enumerate_histograms(n: int, k: int) -> list[tuple[int, ...]]:
    """All length-k count vectors summing to n, in lexicographic order."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], remaining: int):
        if len(prefix) == k - 1:
            out.append(tuple(prefix) + (remaining,))
            return
        for c in range(remaining + 1):
            prefix.append(c)
            rec(prefix, remaining - c)
            prefix.pop()

    rec([], n)
    return out


def histogram_of(x: tuple[int, ...], k: int) -> tuple[int, ...]:
    counts = [0] * k
    for v in x:
        counts[v] += 1
    return tuple(counts)


def _check_nk(n: int, k: int):
    if n < 1:
        raise ValueError("n must be at least 1")
    if k < 2:
        raise ValueError("k must be at least 2")


def _check_p(p: Scalar, k: int):
    require_probability(p, Fraction(1, k))


def _check_cap(n: int, k: int, cap: int):
    if k**n > cap:
        raise CapExceededError(
            "k**n = %d exceeds the full-channel size cap %d; "
            "raise the cap (--cap) to build this channel" % (k**n, cap)
        )


# ---------------------------------------------------------------------------
# The channel type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Channel:
    """Row-stochastic labeled matrix of conditional probabilities."""

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    rows: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        if len(set(self.row_labels)) != len(self.row_labels):
            raise ValueError("duplicate row labels")
        if len(set(self.col_labels)) != len(self.col_labels):
            raise ValueError("duplicate column labels")
        if len(self.rows) != len(self.row_labels):
            raise ValueError("row count does not match row labels")
        ncols = len(self.col_labels)
        for label, row in zip(self.row_labels, self.rows):
            if len(row) != ncols:
                raise ValueError("row %r has wrong width" % label)
            if any(e < 0 for e in row):
                raise ValueError("negative entry in row %r" % label)
            total = sum(row)
            if all_exact(row):
                if total != 1:
                    raise ValueError("row %r sums to %s, not 1" % (label, total))
            elif abs(total - 1) > FLOAT_TOL:
                raise ValueError("row %r sums to %r, not 1" % (label, total))

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.row_labels), len(self.col_labels))

    def entry(self, row_label: str, col_label: str) -> Scalar:
        return self.rows[self.row_labels.index(row_label)][
            self.col_labels.index(col_label)
        ]

    def is_exact(self) -> bool:
        return all(all_exact(row) for row in self.rows)

    def to_csv(self, exact: bool = False) -> str:
        """CSV dump: header of column labels, one row per secret.

        Entries are decimal strings, or exact ``num/den`` fractions when
        ``exact`` is set.  Labels are alphanumeric/colon so no quoting
        is needed; lines end with LF.
        """
        def fmt(e: Scalar) -> str:
            if exact:
                return str(Fraction(e)) if is_exact(e) else repr(e)
            return repr(float(e))

        lines = ["secret," + ",".join(self.col_labels)]
        for label, row in zip(self.row_labels, self.rows):
            lines.append(label + "," + ",".join(fmt(e) for e in row))
        return "\n".join(lines) + "\n"


def _freeze(rows: list[list[Scalar]]) -> tuple[tuple[Scalar, ...], ...]:
    return tuple(tuple(r) for r in rows)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def build_krr(n: int, k: int, p: Scalar, cap: int = DEFAULT_CAP) -> Channel:
    """Per-record randomized response over whole datasets (k**n x k**n).

    Each record independently keeps its value with probability p and
    switches to any specific other value with probability (1-p)/(k-1),
    so the entry at (x, y) is p**matches * ((1-p)/(k-1))**mismatches.
    """
    _check_nk(n, k)
    _check_p(p, k)
    _check_cap(n, k, cap)
    X = enumerate_datasets(n, k)
    labels = tuple(dataset_label(x, k) for x in X)
    off = (1 - p) / (k - 1)
    by_matches = [p**m * off ** (n - m) for m in range(n + 1)]
    rows = []
    for x in X:
        rows.append(
            [by_matches[sum(a == b for a, b in zip(x, y))] for y in X]
        )
    return Channel(labels, labels, _freeze(rows))


def build_shuffle_full(n: int, k: int, cap: int = DEFAULT_CAP) -> Channel:
    """Uniform permutation of the records (k**n x k**n).

    Every output dataset with the input's histogram is equally likely:
    entry (x, y) is 1/#h(x) when h(y) = h(x) and 0 otherwise.
    """
    _check_nk(n, k)
    _check_cap(n, k, cap)
    X = enumerate_datasets(n, k)
    labels = tuple(dataset_label(x, k) for x in X)
    hists = [histogram_of(x, k) for x in X]
    class_size = Counter(hists)
    rows = []
    for hx in hists:
        w = Fraction(1, class_size[hx])
        rows.append([w if hy == hx else 0 for hy in hists])
    return Channel(labels, labels, _freeze(rows))


def build_shuffle_reduced(n: int, k: int, cap: int = DEFAULT_CAP) -> Channel:
    """Deterministic dataset-to-histogram channel (k**n x #histograms)."""
    _check_nk(n, k)
    _check_cap(n, k, cap)
    X = enumerate_datasets(n, k)
    hist_list = enumerate_histograms(n, k)
    col_index = {h: j for j, h in enumerate(hist_list)}
    rows = []
    for x in X:
        row: list[Scalar] = [0] * len(hist_list)
        row[col_index[histogram_of(x, k)]] = 1
        rows.append(row)
    return Channel(
        tuple(dataset_label(x, k) for x in X),
        tuple(histogram_label(h, k) for h in hist_list),
        _freeze(rows),
    )


def build_krr_reduced(n: int, k: int, p: Scalar, cap: int = DEFAULT_CAP) -> Channel:
    """Randomized response lifted to histograms (#histograms x #histograms).

    The entry at (z1, z2) is the probability that per-record noise maps a
    dataset drawn uniformly from the histogram class z1 to some dataset
    with histogram z2.  The binary case has a closed form; general k is
    aggregated from the full channel, so it is cap-guarded.
    """
    _check_nk(n, k)
    _check_p(p, k)
    hist_list = enumerate_histograms(n, k)
    labels = tuple(histogram_label(h, k) for h in hist_list)
    if k == 2:
        rows = [
            [krr_histogram_transition(z1[0], z1[1], z2[0], z2[1], p) for z2 in hist_list]
            for z1 in hist_list
        ]
        return Channel(labels, labels, _freeze(rows))

    _check_cap(n, k, cap)
    full = build_krr(n, k, p, cap=cap)
    X = enumerate_datasets(n, k)
    hists = [histogram_of(x, k) for x in X]
    col_index = {h: j for j, h in enumerate(hist_list)}
    # Sum the full channel's columns within each output histogram class,
    # then average the rows within each input histogram class.
    acc: list[list[Scalar]] = [[0] * len(hist_list) for _ in hist_list]
    members = Counter(hists)
    for i, hx in enumerate(hists):
        zi = col_index[hx]
        row = full.rows[i]
        target = acc[zi]
        for j, hy in enumerate(hists):
            target[col_index[hy]] += row[j]
    if full.is_exact():
        rows = [
            [Fraction(e) / members[h] for e in acc_row]
            for h, acc_row in zip(hist_list, acc)
        ]
    else:
        rows = [
            [e / members[h] for e in acc_row]
            for h, acc_row in zip(hist_list, acc)
        ]
    return Channel(labels, labels, _freeze(rows))


# ---------------------------------------------------------------------------
# Cascade (sequential composition = matrix product)
# ---------------------------------------------------------------------------


def cascade(first: Channel, second: Channel) -> Channel:
    """Sequential composition: ``second`` post-processes ``first``.

    Ordinary matrix multiplication; requires the output labels of
    ``first`` to be exactly the input labels of ``second``.
    """
    if first.col_labels != second.row_labels:
        raise CascadeTypeError(
            "inner dimensions/labels differ: first outputs %d labels "
            "(%s, ...), second inputs %d labels (%s, ...)"
            % (
                len(first.col_labels),
                first.col_labels[0] if first.col_labels else "",
                len(second.row_labels),
                second.row_labels[0] if second.row_labels else "",
            )
        )
    if first.is_exact() and second.is_exact():
        rows = _matmul_exact(first.rows, second.rows)
    else:
        rows = _matmul_float(first.rows, second.rows)
    return Channel(first.row_labels, second.col_labels, _freeze(rows))


def _matmul_exact(A, B) -> list[list[Scalar]]:
    # Exact product done in integer arithmetic: rewrite each row of B
    # over a single denominator, pick a common denominator per output
    # row, accumulate integers, and reduce once at the end.
    ncols = len(B[0])
    b_den: list[int] = []
    b_num: list[list[int]] = []
    b_nonzero: list[list[int]] = []
    for row in B:
        d = 1
        for e in row:
            ed = Fraction(e).denominator
            d = d * ed // math.gcd(d, ed)
        nums = [int(e * d) for e in row]
        b_den.append(d)
        b_num.append(nums)
        b_nonzero.append([j for j, v in enumerate(nums) if v])
    out = []
    for arow in A:
        common = 1
        for i, a in enumerate(arow):
            if a:
                t = Fraction(a).denominator * b_den[i]
                common = common * t // math.gcd(common, t)
        acc = [0] * ncols
        for i, a in enumerate(arow):
            if not a:
                continue
            af = Fraction(a)
            scale = af.numerator * (common // (af.denominator * b_den[i]))
            nums = b_num[i]
            for j in b_nonzero[i]:
                acc[j] += scale * nums[j]
        out.append([Fraction(v, common) for v in acc])
    return out


def _matmul_float(A, B) -> list[list[Scalar]]:
    ncols = len(B[0])
    out = []
    for arow in A:
        acc = [0.0] * ncols
        for i, a in enumerate(arow):
            if not a:
                continue
            brow = B[i]
            for j in range(ncols):
                if brow[j]:
                    acc[j] += a * brow[j]
        out.append(acc)
    return out


def identity_channel(labels: tuple[str, ...]) -> Channel:
    rows = [[1 if i == j else 0 for j in range(len(labels))] for i in range(len(labels))]
    return Channel(tuple(labels), tuple(labels), _freeze(rows))


# ---------------------------------------------------------------------------
# Canonical form and leakage equivalence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalChannel:
    """Leakage-relevant core of a channel under the uniform prior.

    Holds the sorted (outer probability, posterior column) pairs with
    proportional columns merged and zero columns dropped.  Two channels
    over the same secrets leak identically for every prior and gain
    function exactly when their canonical forms coincide.
    """

    row_labels: tuple[str, ...]
    columns: tuple[tuple[Scalar, tuple[Scalar, ...]], ...]

    def __post_init__(self):
        total = sum(outer for outer, _ in self.columns)
        if all_exact(outer for outer, _ in self.columns):
            if self.columns and total != 1:
                raise ValueError("outer probabilities sum to %s, not 1" % total)
        elif abs(total - 1) > FLOAT_TOL:
            raise ValueError("outer probabilities sum to %r, not 1" % total)


def canonicalize(channel: Channel) -> CanonicalChannel:
    """Merge proportional columns, drop zero columns, normalize and sort."""
    nrows = len(channel.row_labels)
    cols = list(zip(*channel.rows)) if channel.rows else []
    if channel.is_exact():
        merged: dict[tuple[Scalar, ...], Scalar] = {}
        for col in cols:
            colsum = Fraction(sum(col))
            if colsum == 0:
                continue
            posterior = tuple(Fraction(e) / colsum for e in col)
            merged[posterior] = merged.get(posterior, 0) + colsum / nrows
        columns = tuple(sorted((outer, post) for post, outer in merged.items()))
        return CanonicalChannel(channel.row_labels, columns)

    # Float mode: group by the cross-multiplication proportionality test
    # |u * sum(v) - v * sum(u)|_inf <= FLOAT_TOL on the raw columns.
    reps: list[list] = []  # [raw column, column sum, accumulated outer]
    for col in cols:
        colsum = sum(col)
        if colsum == 0:
            continue
        for rep in reps:
            rcol, rsum, _ = rep
            if all(
                abs(u * rsum - v * colsum) <= FLOAT_TOL for u, v in zip(col, rcol)
            ):
                rep[2] += colsum / nrows
                break
        else:
            reps.append([col, colsum, colsum / nrows])
    columns = tuple(
        sorted(
            (outer, tuple(e / rsum for e in rcol))
            for rcol, rsum, outer in reps
        )
    )
    return CanonicalChannel(channel.row_labels, columns)


def equivalent(a: Channel, b: Channel) -> bool:
    """Leakage equivalence, decided by canonical-form equality.

    Exact when both channels are rational; entrywise within 1e-9
    otherwise.  The channels must share their secret (row) labels.
    """
    if a.row_labels != b.row_labels:
        raise ValueError("channels have different secret labels")
    ca, cb = canonicalize(a), canonicalize(b)
    if a.is_exact() and b.is_exact():
        return ca == cb
    if len(ca.columns) != len(cb.columns):
        return False
    for (oa, pa), (ob, pb) in zip(ca.columns, cb.columns):
        if not close(oa, ob):
            return False
        if any(not close(ea, eb) for ea, eb in zip(pa, pb)):
            return False
    return True


# ---------------------------------------------------------------------------
# Differential-privacy ratio checks
# ---------------------------------------------------------------------------


def verify_ldp(channel: Channel, epsilon: float, tol: float = FLOAT_TOL) -> bool:
    """Check the local-DP ratio bound on a single-user channel.

    True iff within every column the largest entry is at most e^epsilon
    times the smallest nonzero entry, and no column mixes zero with
    nonzero entries (which would force an infinite ratio).
    """
    bound = math.exp(epsilon) + tol
    for col in zip(*channel.rows):
        nonzero = [e for e in col if e > 0]
        if not nonzero:
            continue
        if len(nonzero) != len(col):
            return False
        if max(nonzero) > bound * min(nonzero):
            return False
    return True


def verify_dp_adjacent(channel: Channel, n: int, k: int, epsilon: float,
                       tol: float = FLOAT_TOL) -> bool:
    """Check the DP ratio bound over adjacent datasets.

    The channel's rows must be the standard dataset enumeration for
    (n, k).  True iff for every pair of datasets differing in exactly
    one record and every output, the probability ratio is at most
    e^epsilon (within ``tol``).
    """
    X = enumerate_datasets(n, k)
    expected = tuple(dataset_label(x, k) for x in X)
    if channel.row_labels != expected:
        raise ValueError("channel rows are not the dataset enumeration for (n, k)")
    index = {x: i for i, x in enumerate(X)}
    bound = math.exp(epsilon) + tol
    for x in X:
        rx = channel.rows[index[x]]
        for pos in range(n):
            for v in range(x[pos] + 1, k):
                y = x[:pos] + (v,) + x[pos + 1 :]
                ry = channel.rows[index[y]]
                for a, b in zip(rx, ry):
                    if (a > 0) != (b > 0):
                        return False
                    if a and b and (a > bound * b or b > bound * a):
                        return False
    return True


# ---------------------------------------------------------------------------
# The two introductory mechanisms over a binary alphabet
# ---------------------------------------------------------------------------


def _truth_probability(epsilon: float, exact: bool) -> Scalar:
    e = math.exp(epsilon)
    if exact:
        ef = Fraction(e)
        return ef / (1 + ef)
    return e / (1 + e)


def build_last_record_reporter(n: int, epsilon: float, exact: bool = True) -> Channel:
    """Binary mechanism that reports the last record's bit, or its
    complement, with probabilities e^eps/(1+e^eps) and 1/(1+e^eps).

    A 2**n x 2 channel over outputs {0, 1}.
    """
    _check_nk(n, 2)
    q = _truth_probability(epsilon, exact)
    X = enumerate_datasets(n, 2)
    rows = [[q, 1 - q] if x[-1] == 0 else [1 - q, q] for x in X]
    return Channel(
        tuple(dataset_label(x, 2) for x in X), ("0", "1"), _freeze(rows)
    )


def build_parity_masked_reporter(n: int, epsilon: float, exact: bool = True) -> Channel:
    """Variant that inverts the report probabilities whenever the binary
    sum (parity) of the other records is 1.

    Equally private as :func:`build_last_record_reporter` against an
    adversary who already knows every other record, yet its output is
    independent of the last record under a uniform prior.  With n = 1
    the parity of the empty record set is 0 and the two mechanisms
    coincide.
    """
    _check_nk(n, 2)
    q = _truth_probability(epsilon, exact)
    X = enumerate_datasets(n, 2)
    rows = []
    for x in X:
        truthful = [q, 1 - q] if x[-1] == 0 else [1 - q, q]
        if sum(x[:-1]) % 2 == 1:
            truthful.reverse()
        rows.append(truthful)
    return Channel(
        tuple(dataset_label(x, 2) for x in X), ("0", "1"), _freeze(rows)
    )
