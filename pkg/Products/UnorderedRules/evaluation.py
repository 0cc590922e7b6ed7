"""Stratified cross-validation harness and its JSON report.
"""

import json
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from sklearn.model_selection import StratifiedKFold
from zope.event import notify

from Products.UnorderedRules.config import DEFAULT_FOLDS
from Products.UnorderedRules.config import DEFAULT_SEED
from Products.UnorderedRules.config import OVERLAP_ON
from Products.UnorderedRules.config import REPORT_VERSION
from Products.UnorderedRules.event import FoldEvaluatedEvent
from Products.UnorderedRules.exceptions import ConfigurationError
from Products.UnorderedRules.exceptions import EvaluationError
from Products.UnorderedRules.log import log
from Products.UnorderedRules.metrics import overlap_fraction
from Products.UnorderedRules.metrics import weighted_ovr_auc
from Products.UnorderedRules.search import SearchConfig
from Products.UnorderedRules.search import fit_ruleset

OVERLAP_CHOICES = ('test', 'train')


class FoldResult(object):

    def __init__(self, index, auc, num_rules, total_literals,
                 overlap_fraction, n_train, n_test, fit_seconds):
        self.index = index
        self.auc = auc
        self.num_rules = num_rules
        self.total_literals = total_literals
        self.overlap_fraction = overlap_fraction
        self.n_train = n_train
        self.n_test = n_test
        self.fit_seconds = fit_seconds

    def asDict(self, timings=False):
        result = {
            'fold': self.index,
            'auc': self.auc,
            'num_rules': self.num_rules,
            'total_literals': self.total_literals,
            'overlap_fraction': self.overlap_fraction,
            'n_train': self.n_train,
            'n_test': self.n_test,
            }
        if timings:
            result['fit_seconds'] = self.fit_seconds
        return result

    def __repr__(self):
        return '<FoldResult %d auc=%.4f rules=%d>' % (self.index, self.auc,
                                                      self.num_rules)


class EvalReport(object):
    """Per-fold results in fold order plus their means."""

    def __init__(self, folds, dataset, search_config, seed, overlap_on):
        self.folds = list(folds)
        self.dataset = dataset
        self.config = search_config
        self.seed = seed
        self.overlap_on = overlap_on

    def _mean(self, name):
        return float(np.mean([getattr(fold, name) for fold in self.folds]))

    @property
    def mean_auc(self):
        return self._mean('auc')

    @property
    def mean_overlap_fraction(self):
        return self._mean('overlap_fraction')

    @property
    def mean_total_literals(self):
        return self._mean('total_literals')

    @property
    def mean_num_rules(self):
        return self._mean('num_rules')

    @property
    def fit_seconds(self):
        return sum(fold.fit_seconds for fold in self.folds)

    def asDict(self, timings=False):
        result = {
            'version': REPORT_VERSION,
            'dataset': {'n': self.dataset.n,
                        'num_features': len(self.dataset.features),
                        'class_labels': [str(label) for label
                                         in self.dataset.class_labels]},
            'num_folds': len(self.folds),
            'seed': self.seed,
            'overlap_on': self.overlap_on,
            'config': self.config.asDict(),
            'folds': [fold.asDict(timings) for fold in self.folds],
            'mean_auc': self.mean_auc,
            'mean_overlap_fraction': self.mean_overlap_fraction,
            'mean_total_literals': self.mean_total_literals,
            'mean_num_rules': self.mean_num_rules,
            }
        if timings:
            result['fit_seconds'] = self.fit_seconds
        return result

    def toJSON(self, timings=False):
        return json.dumps(self.asDict(timings), sort_keys=True, indent=2) + '\n'


def evaluate_fold(dataset, index, train_indices, test_indices, search_config,
                  overlap_on=OVERLAP_ON):
    """Fit on the training rows (cut points from them only) and score the
    test rows."""
    train = dataset.subset(train_indices,
                           num_cut_points=search_config.num_cut_points)
    test = dataset.subset(test_indices)
    started = time.time()
    model = fit_ruleset(train, search_config)
    fit_seconds = time.time() - started
    probs, explanations = model.predict_dataset(test)
    auc = weighted_ovr_auc(probs, test.target, fold=index)
    overlap = overlap_fraction(model, test if overlap_on == 'test' else train)
    return FoldResult(index, auc, len(model.rules), model.totalLiterals(),
                      overlap, train.n, test.n, fit_seconds)


def _evaluate_task(task):
    return evaluate_fold(*task)


def stratified_folds(dataset, folds, seed):
    if folds < 2:
        raise ConfigurationError('folds must be at least 2, got %r' % folds)
    counts = dataset.classCounts()
    present = counts[counts > 0]
    if present.size < 2:
        raise EvaluationError('cross-validation needs at least two classes')
    if present.min() < folds:
        label = dataset.class_labels[int(np.flatnonzero(
            counts == present.min())[0])]
        raise EvaluationError('class %r has %d instances, fewer than %d folds'
                              % (label, present.min(), folds))
    splitter = StratifiedKFold(n_splits=folds, shuffle=True,
                               random_state=seed)
    return list(splitter.split(np.zeros(dataset.n), dataset.target))


def cross_validate(dataset, folds=DEFAULT_FOLDS, search_config=None,
                   seed=DEFAULT_SEED, overlap_on=OVERLAP_ON, jobs=1):
    """Stratified k-fold evaluation; folds may run in worker processes, the
    report is always in fold order."""
    search_config = search_config or SearchConfig(seed=seed)
    if overlap_on not in OVERLAP_CHOICES:
        raise ConfigurationError('overlap_on must be one of %s'
                                 % (OVERLAP_CHOICES,))
    tasks = [(dataset, index, train, test, search_config, overlap_on)
             for index, (train, test)
             in enumerate(stratified_folds(dataset, folds, seed))]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(_evaluate_task, tasks))
    else:
        results = [_evaluate_task(task) for task in tasks]
    for result in results:
        log('auc %.4f, %d rules, %d literals' % (
            result.auc, result.num_rules, result.total_literals),
            summary='Fold %d' % result.index)
        notify(FoldEvaluatedEvent(result))
    return EvalReport(results, dataset, search_config, seed, overlap_on)
