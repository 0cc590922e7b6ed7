"""Evaluation metrics: weighted one-vs-rest AUC and rule set complexity.
"""

import numpy as np
from sklearn.metrics import roc_auc_score

from Products.UnorderedRules.config import PROB_SUM_TOLERANCE
from Products.UnorderedRules.exceptions import EvaluationError


def weighted_ovr_auc(probs, labels, fold=None):
    """One-vs-rest ROC AUC per class present in labels, averaged with the
    class frequencies as weights. Ties count half (midrank).

    >>> weighted_ovr_auc([[0.1, 0.9], [0.2, 0.8], [0.7, 0.3], [0.8, 0.2]],
    ...                  [1, 0, 1, 0])
    0.75
    """
    probs = np.asarray(probs, dtype=float)
    labels = np.asarray(labels, dtype=np.int64)
    where = '' if fold is None else ' in fold %s' % fold
    if probs.ndim != 2 or len(probs) != len(labels):
        raise EvaluationError('%d labels for a probability matrix of shape %s%s'
                              % (len(labels), probs.shape, where))
    if not np.allclose(probs.sum(axis=1), 1.0, rtol=0.0,
                       atol=PROB_SUM_TOLERANCE):
        raise EvaluationError('probability rows do not sum to one%s' % where)
    if len(labels) and (labels.min() < 0 or labels.max() >= probs.shape[1]):
        raise EvaluationError('label index out of range%s' % where)
    present = np.unique(labels)
    if present.size < 2:
        raise EvaluationError('AUC is undefined for a single class%s' % where)
    aucs, weights = [], []
    for label in present:
        positive = labels == label
        aucs.append(roc_auc_score(positive, probs[:, label]))
        weights.append(np.count_nonzero(positive))
    return float(np.average(aucs, weights=weights))


def overlap_fraction(ruleset, dataset):
    """Fraction of instances satisfying at least two rules, before any
    nesting reduction."""
    if dataset.n == 0:
        return 0.0
    membership = ruleset.coveringMatrix(dataset)
    return float(np.count_nonzero(membership.sum(axis=0) >= 2)) / dataset.n


def total_literals(ruleset):
    return ruleset.totalLiterals()
