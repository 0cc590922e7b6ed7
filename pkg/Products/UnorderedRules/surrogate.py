"""Decision tree surrogate score for incomplete rule sets.

The instances the rule set leaves uncovered are described by an unpruned
CART tree (Gini impurity, minimum leaf size); its leaves stand in for the
rules still to be learned and replace the else rule when scoring.
"""

import hashlib
import math

import numpy as np
from zope.component import getGlobalSiteManager
from zope.component import queryUtility
from zope.interface import implementer

from Products.UnorderedRules.config import MIN_LEAF_SIZES
from Products.UnorderedRules.config import SURROGATE_AGGREGATION
from Products.UnorderedRules.exceptions import ConfigurationError
from Products.UnorderedRules.interfaces import ISurrogateAggregation
from Products.UnorderedRules.regret import log_likelihood_terms
from Products.UnorderedRules.regret import log_regret

# a split must lower the summed impurity by more than this
MIN_IMPURITY_DECREASE = 1e-12


class TreeNode(object):
    """split is (feature_index, value) where value is a threshold
    (left: x <= value) or a level code (left: x == level)."""

    def __init__(self, indices, counts, split=None, left=None, right=None):
        self.indices = indices
        self.counts = counts
        self.split = split
        self.left = left
        self.right = right

    def isLeaf(self):
        return self.split is None

    @property
    def leaf_indices(self):
        return self.indices if self.isLeaf() else None

    @property
    def leaf_counts(self):
        return self.counts if self.isLeaf() else None

    def depth(self):
        if self.isLeaf():
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def __repr__(self):
        if self.isLeaf():
            return '<TreeNode leaf n=%d>' % len(self.indices)
        return '<TreeNode split=%r n=%d>' % (self.split, len(self.indices))


def _impurity_sums(left, right):
    """n_left * gini(left) + n_right * gini(right) for rows of counts."""
    n_left = left.sum(axis=1)
    n_right = right.sum(axis=1)
    return (n_left - (left ** 2).sum(axis=1) / n_left +
            n_right - (right ** 2).sum(axis=1) / n_right)


def _best_numeric_split(column, labels, num_classes, min_leaf):
    order = np.argsort(column, kind='stable')
    values = column[order]
    onehot = np.eye(num_classes)[labels[order]]
    cumulative = np.cumsum(onehot, axis=0)
    n = len(values)
    # a split after position i puts i + 1 instances left
    positions = np.arange(min_leaf - 1, n - min_leaf)
    if not positions.size:
        return None
    positions = positions[values[positions] < values[positions + 1]]
    if not positions.size:
        return None
    left = cumulative[positions]
    right = cumulative[-1] - left
    impurity = _impurity_sums(left, right)
    best = int(np.argmin(impurity))
    position = positions[best]
    threshold = (values[position] + values[position + 1]) / 2.0
    return impurity[best], float(threshold)


def _best_categorical_split(column, labels, num_classes, min_leaf):
    n = len(column)
    levels = np.unique(column)
    if levels.size < 2:
        return None
    inside = column[np.newaxis, :] == levels[:, np.newaxis]
    onehot = np.eye(num_classes)[labels]
    left = inside.astype(float) @ onehot
    sizes = left.sum(axis=1)
    legal = (sizes >= min_leaf) & (n - sizes >= min_leaf)
    if not legal.any():
        return None
    right = onehot.sum(axis=0) - left[legal]
    impurity = _impurity_sums(left[legal], right)
    best = int(np.argmin(impurity))
    return impurity[best], int(levels[legal][best])


def _best_split(indices, dataset, min_leaf):
    labels = dataset.target[indices]
    best = None
    for index, feature in enumerate(dataset.features):
        column = dataset.columns[index][indices]
        if feature.isNumeric():
            found = _best_numeric_split(column, labels, dataset.num_classes,
                                        min_leaf)
        else:
            found = _best_categorical_split(column, labels,
                                            dataset.num_classes, min_leaf)
        if found is None:
            continue
        if best is None or found[0] < best[0] - MIN_IMPURITY_DECREASE:
            best = (found[0], index, found[1])
    return best


def _goes_left(dataset, split, indices):
    index, value = split
    column = dataset.columns[index][indices]
    if dataset.features[index].isNumeric():
        return column <= value
    return column == value


def fit_tree(instances, dataset, min_leaf):
    """Grow an unpruned Gini tree on the given training instances.

    Nodes stop splitting when pure, when no split leaves min_leaf instances
    on both sides, or when no split lowers the impurity. Ties go to the
    lowest feature index, then the lowest threshold or level.
    """
    if min_leaf < 1:
        raise ValueError('min_leaf must be at least 1, got %r' % min_leaf)
    indices = np.sort(np.asarray(instances, dtype=np.int64))
    root = TreeNode(indices, dataset.classCounts(indices))
    pending = [root]
    while pending:
        node = pending.pop()
        n = len(node.indices)
        if n < 2 * min_leaf or np.count_nonzero(node.counts) < 2:
            continue
        parent = n - (node.counts.astype(float) ** 2).sum() / n
        best = _best_split(node.indices, dataset, min_leaf)
        if best is None or parent - best[0] <= MIN_IMPURITY_DECREASE:
            continue
        node.split = (best[1], best[2])
        left = _goes_left(dataset, node.split, node.indices)
        node.left = TreeNode(node.indices[left],
                             dataset.classCounts(node.indices[left]))
        node.right = TreeNode(node.indices[~left],
                              dataset.classCounts(node.indices[~left]))
        pending.extend((node.right, node.left))
    return root


def tree_leaves_as_rules(tree):
    """(instance indices, class counts) of every leaf, left to right."""
    leaves = []
    stack = [tree]
    while stack:
        node = stack.pop()
        if node.isLeaf():
            leaves.append((node.indices, node.counts))
        else:
            stack.extend((node.right, node.left))
    return leaves


@implementer(ISurrogateAggregation)
class MaxAggregation(object):
    """Most optimistic potential: the largest log2 score."""

    def __call__(self, scores):
        return max(scores)


@implementer(ISurrogateAggregation)
class MinAggregation(object):
    """Most conservative potential: the smallest log2 score."""

    def __call__(self, scores):
        return min(scores)


def registerAggregations():
    gsm = getGlobalSiteManager()
    gsm.registerUtility(MaxAggregation(), ISurrogateAggregation, name='max')
    gsm.registerUtility(MinAggregation(), ISurrogateAggregation, name='min')

registerAggregations()


def availableAggregations():
    gsm = getGlobalSiteManager()
    return sorted(name for name, utility
                  in gsm.getUtilitiesFor(ISurrogateAggregation))


def getAggregation(name):
    aggregation = queryUtility(ISurrogateAggregation, name=name)
    if aggregation is None:
        raise ConfigurationError('Unknown surrogate aggregation %r; choose '
                                 'from %s' % (name, availableAggregations()))
    return aggregation


def mask_digest(mask):
    """Fixed size key for a boolean instance mask."""
    return hashlib.sha1(np.packbits(np.asarray(mask, dtype=bool))).digest()


def leaf_terms(uncovered, dataset, min_leaf, cache=None):
    """Likelihood and regret terms of the tree leaves on uncovered, an
    array of instance indices. cache maps (mask_digest, min_leaf) to terms."""
    key = None
    if cache is not None:
        mask = np.zeros(dataset.n, dtype=bool)
        mask[uncovered] = True
        key = (mask_digest(mask), min_leaf)
        terms = cache.get(key)
        if terms is not None:
            return terms
    terms = []
    for indices, counts in tree_leaves_as_rules(
            fit_tree(uncovered, dataset, min_leaf)):
        terms.extend(log_likelihood_terms(counts))
        terms.append(-log_regret(len(indices), dataset.num_classes))
    if cache is not None:
        cache[key] = terms
    return terms


def surrogate_log_score(ruleset, candidate=None, dataset=None,
                        min_leaf_sizes=MIN_LEAF_SIZES,
                        aggregation=SURROGATE_AGGREGATION, cache=None):
    """Approximate NML score of ruleset (plus candidate) with the else rule
    replaced by tree leaves fitted on the uncovered instances, aggregated
    over min_leaf_sizes."""
    if not min_leaf_sizes:
        raise ConfigurationError('min_leaf_sizes must not be empty')
    model = ruleset if candidate is None else ruleset.appendRule(candidate)
    if dataset is None:
        dataset = model.dataset
    uncovered = np.flatnonzero(model.elseMask())
    if not uncovered.size:
        return math.fsum(model.scoreTerms())
    base = model.scoreTerms(include_else=False)
    scores = [math.fsum(base + leaf_terms(uncovered, dataset, size, cache))
              for size in min_leaf_sizes]
    return getAggregation(aggregation)(scores)
