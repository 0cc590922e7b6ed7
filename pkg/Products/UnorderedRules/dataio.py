"""CSV ingestion, feature typing and the literal universe.

A Dataset is an immutable table: numeric features are float arrays,
categorical features are arrays of level codes and the target is an array of
class indices. Literals are the single feature constraints rules are grown
from; numeric literals use quantile cut points computed once per dataset.

>>> ds = build_dataset([[1.0, 2.0, 3.0, 4.0]], ['a', 'a', 'b', 'a'],
...                    names=['x'], num_cut_points=2)
>>> ds.n, ds.num_classes, ds.target.tolist()
(4, 2, [0, 0, 1, 0])
>>> ds.features[0].cut_points
(2.5,)
>>> [lit.describe(ds.features) for lit in enumerate_refinements((), ds)]
['x <= 2.5', 'x > 2.5']
"""

import os

import numpy as np
import pandas as pd
from zope.interface import implementer

from Products.UnorderedRules.config import NUM_CUT_POINTS
from Products.UnorderedRules.exceptions import DatasetException
from Products.UnorderedRules.exceptions import LoadError
from Products.UnorderedRules.exceptions import SchemaMismatchError
from Products.UnorderedRules.interfaces import IDataset
from Products.UnorderedRules.interfaces import IFeatureSchema
from Products.UnorderedRules.interfaces import ILiteral
from Products.UnorderedRules.log import log, debug
from Products.UnorderedRules.utils import first_appearance

NUMERIC = 'numeric'
CATEGORICAL = 'categorical'
KINDS = (NUMERIC, CATEGORICAL)

LESS_EQ = '<='
GREATER = '>'
EQUALS = '=='
NOT_EQUALS = '!='
OPERATORS = (LESS_EQ, GREATER, EQUALS, NOT_EQUALS)
_OP_ORDER = dict((op, i) for i, op in enumerate(OPERATORS))


def compute_cut_points(values, num_cuts):
    """Thresholds at the q/num_cuts empirical quantiles, q = 1..num_cuts-1.

    Quantiles interpolate with the midpoint of adjacent order statistics.
    Duplicates and thresholds outside the open (min, max) range are dropped.

    >>> compute_cut_points([1, 2, 3, 4], 2)
    [2.5]
    >>> compute_cut_points([5, 5, 5], 10)
    []
    """
    if num_cuts < 1:
        raise ValueError('num_cuts must be at least 1, got %r' % num_cuts)
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError('cannot compute cut points of an empty column')
    low, high = values.min(), values.max()
    if num_cuts < 2 or low == high:
        return []
    quantiles = np.arange(1, num_cuts) / float(num_cuts)
    cuts = np.unique(np.quantile(values, quantiles, method='midpoint'))
    cuts = cuts[(cuts > low) & (cuts < high)]
    return [float(cut) for cut in cuts]


@implementer(IFeatureSchema)
class FeatureSchema(object):

    def __init__(self, name, kind, levels=(), cut_points=()):
        if kind not in KINDS:
            raise DatasetException('Unknown feature kind %r for %r'
                                   % (kind, name))
        self.name = name
        self.kind = kind
        self.levels = tuple(levels)
        self.cut_points = tuple(float(c) for c in cut_points)
        if kind == CATEGORICAL:
            if not self.levels:
                raise DatasetException('Categorical feature %r has no levels'
                                       % name)
            if len(set(self.levels)) != len(self.levels):
                raise DatasetException('Duplicate levels in feature %r' % name)
            if self.cut_points:
                raise DatasetException('Categorical feature %r has cut points'
                                       % name)
        else:
            if self.levels:
                raise DatasetException('Numeric feature %r has levels' % name)
            cuts = np.asarray(self.cut_points)
            if cuts.size and not np.all(np.diff(cuts) > 0):
                raise DatasetException('Cut points of %r are not strictly '
                                       'ascending' % name)
        self._codes = dict((level, i) for i, level in enumerate(self.levels))

    def isNumeric(self):
        return self.kind == NUMERIC

    def levelIndex(self, label):
        return self._codes.get(label, -1)

    def withCutPoints(self, cut_points):
        return FeatureSchema(self.name, self.kind, self.levels, cut_points)

    def sameColumn(self, other):
        """Same name, kind and levels; cut points may differ."""
        return (self.name == other.name and self.kind == other.kind
                and self.levels == other.levels)

    def __repr__(self):
        return '<FeatureSchema %s (%s)>' % (self.name, self.kind)


@implementer(ILiteral)
class Literal(object):
    """X <= c, X > c, X == level or X != level on one feature.

    Categorical values are level codes; an unknown level (code -1) satisfies
    every NotEqualsLevel literal and no EqualsLevel literal.
    """

    __slots__ = ('feature_index', 'op', 'value')

    def __init__(self, feature_index, op, value):
        if op not in _OP_ORDER:
            raise ValueError('Unknown operator %r' % op)
        self.feature_index = int(feature_index)
        self.op = op
        if op in (LESS_EQ, GREATER):
            self.value = float(value)
        else:
            self.value = int(value)

    def isNumeric(self):
        return self.op in (LESS_EQ, GREATER)

    def evaluate(self, column):
        if self.op == LESS_EQ:
            return column <= self.value
        if self.op == GREATER:
            return column > self.value
        if self.op == EQUALS:
            return column == self.value
        return column != self.value

    def key(self):
        return (self.feature_index, _OP_ORDER[self.op], self.value)

    def describe(self, features):
        feature = features[self.feature_index]
        if self.isNumeric():
            return '%s %s %r' % (feature.name, self.op, self.value)
        return '%s %s %s' % (feature.name, self.op, feature.levels[self.value])

    def __eq__(self, other):
        return isinstance(other, Literal) and self.key() == other.key()

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return '<Literal f%d %s %r>' % (self.feature_index, self.op,
                                        self.value)


def validate_literal(literal, features):
    """Raise SchemaMismatchError unless the literal belongs to the universe
    of the given schema."""
    if not 0 <= literal.feature_index < len(features):
        raise SchemaMismatchError('Literal on unknown feature %d'
                                  % literal.feature_index)
    feature = features[literal.feature_index]
    if feature.isNumeric() != literal.isNumeric():
        raise SchemaMismatchError('Literal %r does not fit the kind of %r'
                                  % (literal, feature.name))
    if literal.isNumeric():
        if literal.value not in feature.cut_points:
            raise SchemaMismatchError('Threshold %r is not a cut point of %r'
                                      % (literal.value, feature.name))
    elif not 0 <= literal.value < len(feature.levels):
        raise SchemaMismatchError('Level code %r out of range for %r'
                                  % (literal.value, feature.name))


@implementer(IDataset)
class Dataset(object):

    def __init__(self, features, columns, target, class_labels):
        self.features = tuple(features)
        self.columns = tuple(np.asarray(column) for column in columns)
        self.class_labels = tuple(class_labels)
        self.num_classes = len(self.class_labels)
        if len(self.columns) != len(self.features):
            raise DatasetException('%d columns for %d features'
                                   % (len(self.columns), len(self.features)))
        if self.num_classes < 2:
            raise DatasetException('At least two classes are needed, got %r'
                                   % (self.class_labels,))
        if target is None:
            self.target = None
            self.n = len(self.columns[0]) if self.columns else 0
        else:
            self.target = np.asarray(target, dtype=np.int64)
            self.n = len(self.target)
            if self.n and (self.target.min() < 0 or
                           self.target.max() >= self.num_classes):
                raise DatasetException('Target index out of range')
        for feature, column in zip(self.features, self.columns):
            if len(column) != self.n:
                raise DatasetException('Column %r has %d values, expected %d'
                                       % (feature.name, len(column), self.n))

    def hasTarget(self):
        return self.target is not None

    def featureNames(self):
        return [feature.name for feature in self.features]

    def classCounts(self, mask=None):
        target = self.target if mask is None else self.target[mask]
        return np.bincount(target, minlength=self.num_classes)

    def subset(self, indices, num_cut_points=None):
        indices = np.asarray(indices, dtype=np.int64)
        columns = [column[indices] for column in self.columns]
        features = self.features
        if num_cut_points is not None:
            features = []
            for feature, column in zip(self.features, columns):
                if feature.isNumeric() and column.size:
                    feature = feature.withCutPoints(
                        compute_cut_points(column, num_cut_points))
                elif feature.isNumeric():
                    feature = feature.withCutPoints(())
                features.append(feature)
        target = None if self.target is None else self.target[indices]
        return Dataset(features, columns, target, self.class_labels)

    def sameSchema(self, features):
        return (len(features) == len(self.features) and
                all(a.sameColumn(b) for a, b in zip(features, self.features)))

    def __repr__(self):
        return '<Dataset n=%d features=%d classes=%d>' % (
            self.n, len(self.features), self.num_classes)


def build_dataset(columns, target, names=None, kinds=None,
                  num_cut_points=NUM_CUT_POINTS, class_labels=None):
    """Build a Dataset from raw columns.

    Numeric columns are any sequences of numbers; categorical columns hold
    labels whose levels are taken in first-appearance order. Target labels
    are mapped the same way unless class_labels fixes the order.
    """
    columns = [list(column) if not isinstance(column, np.ndarray) else column
               for column in columns]
    if names is None:
        names = ['x%d' % i for i in range(len(columns))]
    if kinds is None:
        kinds = [NUMERIC] * len(columns)
    target = list(target)
    if class_labels is None:
        class_labels = first_appearance(target)
    codes = dict((label, i) for i, label in enumerate(class_labels))
    try:
        target = [codes[label] for label in target]
    except KeyError as exc:
        raise DatasetException('Unknown class label %r' % exc.args[0])

    features, arrays = [], []
    for name, kind, column in zip(names, kinds, columns):
        if kind == NUMERIC:
            values = np.asarray(column, dtype=float)
            cuts = compute_cut_points(values, num_cut_points) \
                if values.size else []
            features.append(FeatureSchema(name, NUMERIC, cut_points=cuts))
            arrays.append(values)
        else:
            labels = [str(value) for value in column]
            feature = FeatureSchema(name, CATEGORICAL,
                                    levels=first_appearance(labels))
            features.append(feature)
            arrays.append(np.array([feature.levelIndex(label)
                                    for label in labels], dtype=np.int64))
    return Dataset(features, arrays, target, class_labels)


def _read_frame(path):
    if not os.path.exists(path):
        raise LoadError('No such file: %s' % path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False,
                            encoding='utf-8')
    except (pd.errors.ParserError, pd.errors.EmptyDataError,
            UnicodeDecodeError) as exc:
        raise LoadError('Cannot parse %s: %s' % (path, exc))
    frame = frame.fillna('')
    blank = frame.apply(lambda column: column.str.strip() == '').to_numpy()
    if blank.any():
        row, col = np.argwhere(blank)[0]
        raise LoadError('Missing value in %s at row %d, column %r'
                        % (path, row + 1, frame.columns[col]))
    return frame


def _infer_kind(name, column, override):
    parsed = pd.to_numeric(column, errors='coerce')
    numeric = parsed.notna().to_numpy()
    if override == CATEGORICAL:
        return CATEGORICAL, None
    if numeric.all():
        return NUMERIC, parsed.to_numpy(dtype=float)
    if override == NUMERIC:
        row = int(np.flatnonzero(~numeric)[0])
        raise LoadError('Column %r is not numeric at row %d: %r'
                        % (name, row + 1, column.iloc[row]))
    if numeric.any():
        row = int(np.flatnonzero(~numeric)[0])
        raise LoadError('Column %r mixes numbers and text (row %d: %r); '
                        'declare its kind explicitly'
                        % (name, row + 1, column.iloc[row]))
    return CATEGORICAL, None


def load_csv(path, target_column, schema_overrides=None,
             num_cut_points=NUM_CUT_POINTS):
    """Load a training table.

    schema_overrides maps column names to 'numeric' or 'categorical'.
    """
    overrides = dict(schema_overrides or {})
    frame = _read_frame(path)
    if target_column not in frame.columns:
        raise LoadError('Target column %r not found in %s'
                        % (target_column, path))
    for name, kind in overrides.items():
        if name not in frame.columns or name == target_column:
            raise LoadError('Cannot override unknown feature column %r'
                            % name)
        if kind not in KINDS:
            raise LoadError('Unknown kind %r for column %r' % (kind, name))

    names, kinds, columns = [], [], []
    for name in frame.columns:
        if name == target_column:
            continue
        kind, values = _infer_kind(name, frame[name], overrides.get(name))
        names.append(name)
        kinds.append(kind)
        columns.append(values if kind == NUMERIC else frame[name].tolist())
    labels = frame[target_column].tolist()
    if len(first_appearance(labels)) < 2:
        raise LoadError('Target column %r needs at least two classes'
                        % target_column)
    dataset = build_dataset(columns, labels, names=names, kinds=kinds,
                            num_cut_points=num_cut_points)
    log('%d rows, %d features (%d categorical), classes %s'
        % (dataset.n, len(names), kinds.count(CATEGORICAL),
           ', '.join(dataset.class_labels)), summary='Loaded %s' % path)
    return dataset


def load_instances(path, features, class_labels, target_column=None):
    """Load rows to predict against an existing schema.

    Columns are matched by name and extra columns are ignored. The target
    column is read when given and present.
    """
    frame = _read_frame(path)
    columns = []
    for feature in features:
        if feature.name not in frame.columns:
            raise SchemaMismatchError('Column %r missing from %s'
                                      % (feature.name, path))
        raw = frame[feature.name]
        if feature.isNumeric():
            parsed = pd.to_numeric(raw, errors='coerce')
            bad = parsed.isna().to_numpy()
            if bad.any():
                row = int(np.flatnonzero(bad)[0])
                raise SchemaMismatchError(
                    'Column %r is not numeric at row %d: %r'
                    % (feature.name, row + 1, raw.iloc[row]))
            columns.append(parsed.to_numpy(dtype=float))
        else:
            codes = np.array([feature.levelIndex(value) for value in raw],
                             dtype=np.int64)
            unseen = int(np.count_nonzero(codes < 0))
            if unseen:
                debug('%d unseen levels in column %r' % (unseen, feature.name))
            columns.append(codes)
    target = None
    if target_column is not None and target_column in frame.columns:
        codes = dict((label, i) for i, label in enumerate(class_labels))
        labels = frame[target_column].tolist()
        unknown = [label for label in labels if label not in codes]
        if unknown:
            raise SchemaMismatchError('Unknown class label %r in %s'
                                      % (unknown[0], path))
        target = [codes[label] for label in labels]
    return Dataset(features, columns, target, class_labels)


def instance_dataset(instance, features, class_labels):
    """One-row Dataset from a sequence (schema order) or a mapping of values.
    """
    if isinstance(instance, dict):
        missing = [f.name for f in features if f.name not in instance]
        if missing:
            raise SchemaMismatchError('Instance lacks feature %r' % missing[0])
        values = [instance[f.name] for f in features]
    else:
        values = list(instance)
        if len(values) != len(features):
            raise SchemaMismatchError('Instance has %d values, schema has %d '
                                      'features' % (len(values), len(features)))
    columns = []
    for feature, value in zip(features, values):
        if feature.isNumeric():
            try:
                columns.append(np.array([float(value)]))
            except (TypeError, ValueError):
                raise SchemaMismatchError('Feature %r expects a number, got %r'
                                          % (feature.name, value))
        else:
            columns.append(np.array([feature.levelIndex(str(value))],
                                    dtype=np.int64))
    return Dataset(features, columns, None, class_labels)


def condition_mask(condition, dataset):
    """Rows of dataset satisfying every literal of condition."""
    mask = np.ones(dataset.n, dtype=bool)
    for literal in condition:
        mask &= literal.evaluate(dataset.columns[literal.feature_index])
    return mask


def _numeric_bounds(condition, feature_index):
    low, high = -np.inf, np.inf
    for literal in condition:
        if literal.feature_index != feature_index:
            continue
        if literal.op == GREATER:
            low = max(low, literal.value)
        elif literal.op == LESS_EQ:
            high = min(high, literal.value)
    return low, high


def normalize_condition(condition, features):
    """Collapse a conjunction to one interval per numeric feature and drop
    categorical literals implied by an EqualsLevel on the same feature.
    The cover is unchanged."""
    result = []
    for index, feature in enumerate(features):
        literals = [l for l in condition if l.feature_index == index]
        if not literals:
            continue
        if feature.isNumeric():
            low, high = _numeric_bounds(literals, index)
            if low > -np.inf:
                result.append(Literal(index, GREATER, low))
            if high < np.inf:
                result.append(Literal(index, LESS_EQ, high))
            continue
        equals = sorted(set(l.value for l in literals if l.op == EQUALS))
        excluded = sorted(set(l.value for l in literals if l.op == NOT_EQUALS))
        if equals:
            result.extend(Literal(index, EQUALS, v) for v in equals)
            result.extend(Literal(index, NOT_EQUALS, v) for v in excluded
                          if v in equals)
        else:
            result.extend(Literal(index, NOT_EQUALS, v) for v in excluded)
    return tuple(result)


def _feature_refinements(condition, feature_index, feature, column):
    """Candidate literals on one feature and their masks on the column."""
    if feature.isNumeric():
        low, high = _numeric_bounds(condition, feature_index)
        cuts = np.asarray(feature.cut_points, dtype=float)
        cuts = cuts[(cuts > low) & (cuts < high)]
        if not cuts.size:
            return [], None
        below = column[np.newaxis, :] <= cuts[:, np.newaxis]
        masks = np.empty((2 * cuts.size, column.size), dtype=bool)
        masks[0::2] = below
        masks[1::2] = ~below
        literals = []
        for cut in cuts:
            literals.append(Literal(feature_index, LESS_EQ, cut))
            literals.append(Literal(feature_index, GREATER, cut))
        return literals, masks
    used = [l for l in condition if l.feature_index == feature_index]
    if any(l.op == EQUALS for l in used):
        return [], None
    excluded = set(l.value for l in used)
    levels = np.array([code for code in range(len(feature.levels))
                       if code not in excluded], dtype=np.int64)
    if not levels.size:
        return [], None
    equal = column[np.newaxis, :] == levels[:, np.newaxis]
    masks = np.empty((2 * levels.size, column.size), dtype=bool)
    masks[0::2] = equal
    masks[1::2] = ~equal
    literals = []
    for code in levels:
        literals.append(Literal(feature_index, EQUALS, code))
        literals.append(Literal(feature_index, NOT_EQUALS, code))
    return literals, masks


def refinement_masks(condition, dataset, cover=None):
    """Literals that strictly shrink the cover of condition and leave it
    nonempty, with the resulting child covers as a boolean matrix.

    Literals are ordered by feature, then by threshold or level, with
    '<=' before '>' and '==' before '!='.
    """
    if cover is None:
        cover = condition_mask(condition, dataset)
    size = np.count_nonzero(cover)
    literals, blocks = [], []
    if size == 0:
        return literals, np.zeros((0, dataset.n), dtype=bool)
    for index, feature in enumerate(dataset.features):
        candidates, masks = _feature_refinements(
            condition, index, feature, dataset.columns[index])
        if not candidates:
            continue
        masks &= cover
        sizes = masks.sum(axis=1)
        keep = np.flatnonzero((sizes > 0) & (sizes < size))
        literals.extend(candidates[i] for i in keep)
        blocks.append(masks[keep])
    if not blocks:
        return literals, np.zeros((0, dataset.n), dtype=bool)
    return literals, np.vstack(blocks)


def enumerate_refinements(condition, dataset):
    """Every literal that strictly shrinks the training cover of condition
    and leaves it nonempty; literals redundant with the constraints already
    on a feature are never proposed."""
    literals, masks = refinement_masks(condition, dataset)
    return literals
