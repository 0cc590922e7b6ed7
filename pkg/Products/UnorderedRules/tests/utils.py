"""Synthetic datasets and rule sets shared by the tests.
"""

import numpy as np

from Products.UnorderedRules.dataio import CATEGORICAL
from Products.UnorderedRules.dataio import GREATER
from Products.UnorderedRules.dataio import LESS_EQ
from Products.UnorderedRules.dataio import Literal
from Products.UnorderedRules.dataio import build_dataset
from Products.UnorderedRules.model import RuleSet


def separable_dataset():
    """x = 1..100, class 'a' up to 50 and 'b' above; cut points at
    10.5, 20.5, ..., 90.5."""
    x = np.arange(1, 101, dtype=float)
    labels = ['a' if value <= 50 else 'b' for value in x]
    return build_dataset([x], labels, names=['x'], num_cut_points=10)


def line_dataset(labels, class_labels=('a', 'b')):
    """x = 0..n-1 with cut points k + 0.5 between every pair of values."""
    n = len(labels)
    return build_dataset([np.arange(n, dtype=float)], labels, names=['x'],
                         num_cut_points=n, class_labels=list(class_labels))


def interval(low, high, n):
    """Literals selecting the integer positions low..high of a line
    dataset of n values."""
    condition = []
    if low > 0:
        condition.append(Literal(0, GREATER, low - 0.5))
    if high < n - 1:
        condition.append(Literal(0, LESS_EQ, high + 0.5))
    return tuple(condition)


def grid_region(x1, x2):
    if x1 <= 1.0:
        return 'left'
    if x2 > 0.8:
        return 'top'
    return 'bottom'


# (column, row) grid positions in the top left block labelled 'bottom'
BLOCKADE_NOISE = ((1, 9), (5, 13), (8, 17))


def blockade_dataset(offset=0.0, num_cut_points=20, noisy=False):
    """20 x 20 grid on [0, 2]^2: the left half is one class, the right half
    splits at x2 = 0.8 into two more. Once the left half is a rule, a
    single literal on x2 overlaps it; only a two literal rule isolates the
    top right or the bottom right block. noisy relabels the few scattered
    BLOCKADE_NOISE points of the top left block as 'bottom'."""
    values = np.arange(20) * 0.1 + 0.05 + offset
    x1, x2 = [axis.ravel() for axis in np.meshgrid(values, values)]
    labels = [grid_region(a, b) for a, b in zip(x1, x2)]
    if noisy:
        for column, row in BLOCKADE_NOISE:
            labels[row * len(values) + column] = 'bottom'
    return build_dataset([x1, x2], labels, names=['x1', 'x2'],
                         num_cut_points=num_cut_points,
                         class_labels=['left', 'top', 'bottom'])


def nearest_cut(dataset, feature_index, value):
    cuts = dataset.features[feature_index].cut_points
    return min(cuts, key=lambda cut: abs(cut - value))


def gaussian_dataset(per_class=30, seed=0):
    """Three well separated Gaussian blobs in two dimensions."""
    rng = np.random.RandomState(seed)
    centers = [(0.0, 0.0), (6.0, 0.0), (0.0, 6.0)]
    points, labels = [], []
    for label, center in zip(('p', 'q', 'r'), centers):
        points.append(rng.normal(center, 0.5, size=(per_class, 2)))
        labels.extend([label] * per_class)
    points = np.vstack(points)
    return build_dataset([points[:, 0], points[:, 1]], labels,
                         names=['u', 'v'], num_cut_points=20)


def color_dataset():
    """One categorical feature; 'red' is mostly class 'x'."""
    colors = ['red'] * 6 + ['green'] * 4 + ['blue'] * 4
    labels = ['x'] * 5 + ['y'] + ['y'] * 3 + ['x'] + ['y'] * 4
    return build_dataset([colors], labels, names=['color'],
                         kinds=[CATEGORICAL])


def random_condition(dataset, rng, max_literals=2):
    condition = []
    for i in range(rng.randint(1, max_literals + 1)):
        feature_index = rng.randint(len(dataset.features))
        cuts = dataset.features[feature_index].cut_points
        op = (LESS_EQ, GREATER)[rng.randint(2)]
        condition.append(Literal(feature_index, op,
                                 cuts[rng.randint(len(cuts))]))
    return tuple(condition)


def random_ruleset(dataset, rng, max_rules=4):
    """Random, possibly overlapping or nested rules with nonempty covers."""
    conditions = []
    wanted = rng.randint(1, max_rules + 1)
    while len(conditions) < wanted:
        condition = random_condition(dataset, rng)
        ruleset = RuleSet.fromConditions([condition], dataset)
        if ruleset.rules[0].coverage:
            conditions.append(condition)
    return RuleSet.fromConditions(conditions, dataset)
