"""Multinomial NML regret and maximum likelihood code lengths, all in bits.

log2 R(n, K) is the log of the sum, over every label sequence of length n on
K classes, of the maximized categorical likelihood of that sequence.

>>> log_regret(5, 1)
0.0
>>> round(log_regret(1, 3), 5)
1.58496
>>> round(log_regret(2, 2), 5)
1.32193
>>> round(log_ml_likelihood([3, 1]), 5)
-3.24511
"""

import math
import threading

import numpy as np
from scipy.special import gammaln, logsumexp, xlogy

from Products.UnorderedRules.config import BRUTEFORCE_LIMIT
from Products.UnorderedRules.exceptions import BruteForceLimitError

LN2 = math.log(2.0)


def _log2_binary_regret(n):
    """log2 R(n, 2) by the closed sum over the count of one class."""
    if n == 0:
        return 0.0
    h = np.arange(n + 1, dtype=float)
    rest = n - h
    terms = (gammaln(n + 1.0) - gammaln(h + 1.0) - gammaln(rest + 1.0)
             + xlogy(h, h / n) + xlogy(rest, rest / n))
    return float(logsumexp(terms)) / LN2


def _regret_row(n, num_classes):
    """[log2 R(n, 1), ..., log2 R(n, num_classes)]"""
    row = [0.0]
    if num_classes >= 2:
        row.append(_log2_binary_regret(n))
    for k in range(3, num_classes + 1):
        if n == 0:
            row.append(0.0)
            continue
        # R(n, k) = R(n, k-1) + n / (k-2) * R(n, k-2)
        row.append(float(np.logaddexp2(row[k - 2],
                                       math.log2(n / (k - 2.0)) + row[k - 3])))
    return row


class RegretTable(object):
    """Memoized log2 R(n, k) for every k up to num_classes.

    Lookups are thread safe; a row is computed outside the lock and the
    first stored row wins, so repeated calls always return the same value.
    """

    def __init__(self, num_classes):
        if num_classes < 1:
            raise ValueError('num_classes must be positive, got %r'
                             % num_classes)
        self.num_classes = num_classes
        self._cache = {}
        self._lock = threading.Lock()

    def _row(self, n):
        with self._lock:
            row = self._cache.get(n)
        if row is None:
            row = _regret_row(n, self.num_classes)
            with self._lock:
                row = self._cache.setdefault(n, row)
        return row

    def logRegret(self, n, num_classes=None):
        if num_classes is None:
            num_classes = self.num_classes
        if not 1 <= num_classes <= self.num_classes:
            raise ValueError('table holds up to %d classes, asked for %r'
                             % (self.num_classes, num_classes))
        if n < 0:
            raise ValueError('n must be nonnegative, got %r' % n)
        return self._row(int(n))[num_classes - 1]

    __call__ = logRegret

    def __len__(self):
        return len(self._cache)


_tables = {}
_tables_lock = threading.Lock()

def getRegretTable(num_classes):
    with _tables_lock:
        table = _tables.get(num_classes)
        if table is None:
            table = _tables[num_classes] = RegretTable(num_classes)
    return table


def log_regret(n, num_classes):
    """log2 R(n, K), exact up to floating point."""
    return getRegretTable(num_classes).logRegret(n)


def regret_bruteforce(n, num_classes, limit=BRUTEFORCE_LIMIT):
    """log2 R(n, K) by enumerating all K**n label sequences."""
    if n < 0 or num_classes < 1:
        raise ValueError('bad arguments (%r, %r)' % (n, num_classes))
    total = num_classes ** n
    if total > limit:
        raise BruteForceLimitError('%d**%d sequences exceed the limit of %d'
                                   % (num_classes, n, limit))
    if n == 0:
        return 0.0
    powers = num_classes ** np.arange(n, dtype=np.int64)
    classes = np.arange(num_classes)
    parts = []
    chunk = 1 << 16
    for start in range(0, total, chunk):
        index = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (index[:, np.newaxis] // powers) % num_classes
        counts = (digits[:, :, np.newaxis] == classes).sum(axis=1)
        loglik = xlogy(counts, counts / float(n)).sum(axis=1)
        parts.extend(np.exp(loglik).tolist())
    return math.log2(math.fsum(parts))


def log_likelihood_terms(counts, reference=None):
    """Terms of sum_c counts[c] * log2(reference[c] / sum(reference)).

    reference defaults to counts, which gives the maximum likelihood terms.
    Classes with a zero count contribute nothing (0 log 0 = 0); a positive
    count against a zero reference probability gives [-inf].

    >>> log_likelihood_terms([2, 0, 2])
    [-2.0, -2.0]
    >>> log_likelihood_terms([1, 1], reference=[4, 0])
    [-inf]
    """
    counts = [int(c) for c in counts]
    if reference is None:
        reference = counts
    reference = [int(r) for r in reference]
    total = sum(reference)
    terms = []
    for count, ref in zip(counts, reference):
        if count == 0:
            continue
        if ref == 0:
            return [float('-inf')]
        terms.append(count * math.log2(ref / total))
    return terms


def log_ml_likelihood(counts):
    """Maximum likelihood log2-probability of data with these class counts.

    >>> log_ml_likelihood([7, 0])
    0.0
    >>> log_ml_likelihood([0, 0])
    0.0
    """
    return math.fsum(log_likelihood_terms(counts))
