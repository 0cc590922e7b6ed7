"""Rules and rule sets as probabilistic models.

Every rule estimates its class distribution on its whole training cover.
An instance is mapped to exactly one effective group: the else rule when it
satisfies no rule, a single rule when the covering rules reduce to one (the
smallest of a nested chain), or the union of the reduced covering rules,
whose distribution is pooled over the union of their training covers.

Training data is summarized by membership atoms: the distinct rows of the
rule by instance satisfaction matrix, each with its class counts. Atoms are
enough to re-estimate any union, so a rule set can predict without the
training data.
"""

import math

import numpy as np
from scipy.special import xlogy
from zope.interface import implementer

from Products.UnorderedRules.config import BRUTEFORCE_LIMIT
from Products.UnorderedRules.dataio import condition_mask
from Products.UnorderedRules.dataio import instance_dataset
from Products.UnorderedRules.exceptions import BruteForceLimitError
from Products.UnorderedRules.exceptions import InvariantViolation
from Products.UnorderedRules.exceptions import SchemaMismatchError
from Products.UnorderedRules.interfaces import IPredictionExplanation
from Products.UnorderedRules.interfaces import IRule
from Products.UnorderedRules.interfaces import IRuleSet
from Products.UnorderedRules.regret import log_likelihood_terms
from Products.UnorderedRules.regret import log_regret

SINGLE = 'single'
UNION = 'union'
NESTED = 'nested'
ELSE = 'else'

ELSE_KEY = ()


def _distribution(counts):
    counts = np.asarray(counts, dtype=np.int64)
    return counts / counts.sum()


@implementer(IRule)
class Rule(object):

    def __init__(self, condition, counts, cover=None):
        self.condition = tuple(condition)
        self.counts = tuple(int(c) for c in counts)
        self.coverage = sum(self.counts)
        self.cover = cover

    @classmethod
    def fromCondition(cls, condition, dataset):
        cover = condition_mask(condition, dataset)
        return cls(condition, dataset.classCounts(cover), cover)

    @property
    def prob(self):
        if not self.coverage:
            return None
        return _distribution(self.counts)

    @property
    def log_regret_term(self):
        return log_regret(self.coverage, len(self.counts))

    def coverIndices(self):
        if self.cover is None:
            return None
        return np.flatnonzero(self.cover)

    def matches(self, dataset):
        return condition_mask(self.condition, dataset)

    def literalCount(self):
        return len(self.condition)

    def describe(self, features):
        if not self.condition:
            return 'TRUE'
        return ' AND '.join(lit.describe(features) for lit in self.condition)

    def __repr__(self):
        return '<Rule %d literals, coverage %d>' % (len(self.condition),
                                                   self.coverage)


def reduce_covering_rules(covering, nesting):
    """Drop every rule whose cover contains another covering rule's cover.

    nesting[i][j] is true when cover(i) is a subset of cover(j). Rules with
    identical covers keep the lower index.

    >>> import numpy as np
    >>> nesting = np.array([[True, True, False],
    ...                     [False, True, False],
    ...                     [False, False, True]])
    >>> reduce_covering_rules([0, 1, 2], nesting)
    (0, 2)
    >>> reduce_covering_rules([1, 2], nesting)
    (1, 2)
    """
    covering = sorted(set(int(i) for i in covering))
    kept = []
    for s in covering:
        for t in covering:
            if t == s or not nesting[t][s]:
                continue
            if not nesting[s][t] or t < s:
                break
        else:
            kept.append(s)
    return tuple(kept)


class CoverStatistics(object):
    """Membership atoms of a list of rules over one dataset.

    signatures: atoms x rules boolean matrix, one row per distinct
    membership pattern; inverse: atom of every instance (None for loaded
    models); counts: atoms x classes class counts (None without a target).
    """

    def __init__(self, signatures, counts, inverse=None):
        self.signatures = np.asarray(signatures, dtype=bool)
        self.counts = None if counts is None else \
            np.asarray(counts, dtype=np.int64)
        self.inverse = inverse

    @classmethod
    def fromMembership(cls, membership, target, num_classes):
        membership = np.asarray(membership, dtype=bool)
        num_rules, n = membership.shape
        if n == 0:
            signatures = np.zeros((0, num_rules), dtype=bool)
            inverse = np.zeros(0, dtype=np.int64)
        elif num_rules == 0:
            signatures = np.zeros((1, 0), dtype=bool)
            inverse = np.zeros(n, dtype=np.int64)
        else:
            signatures, inverse = np.unique(membership.T, axis=0,
                                            return_inverse=True)
            inverse = np.asarray(inverse, dtype=np.int64).reshape(-1)
        counts = None
        if target is not None:
            counts = np.zeros((len(signatures), num_classes), dtype=np.int64)
            np.add.at(counts, (inverse, np.asarray(target)), 1)
        return cls(signatures, counts, inverse)

    @property
    def num_atoms(self):
        return len(self.signatures)

    def nesting(self):
        """nesting[i, j]: every atom in rule i is also in rule j."""
        inside = self.signatures.astype(np.int64)
        return (inside.T @ (1 - inside)) == 0

    def unionCounts(self, rules):
        if not len(rules):
            return self.elseCounts()
        touched = self.signatures[:, list(rules)].any(axis=1)
        return self.counts[touched].sum(axis=0)

    def elseCounts(self):
        return self.counts[~self.signatures.any(axis=1)].sum(axis=0)

    def totalCounts(self):
        return self.counts.sum(axis=0)

    def elseMask(self):
        empty = ~self.signatures.any(axis=1)
        return empty[self.inverse]


@implementer(IPredictionExplanation)
class PredictionExplanation(object):

    def __init__(self, case, contributing_rules, satisfied_rules, probability):
        self.case = case
        self.contributing_rules = tuple(contributing_rules)
        self.satisfied_rules = tuple(satisfied_rules)
        self.probability = probability

    def __str__(self):
        return '%s:%s' % (self.case,
                          ';'.join(str(i) for i in self.contributing_rules))

    def __repr__(self):
        return '<PredictionExplanation %s>' % self


class GroupStructure(object):
    """Groups, the group index of every training instance and group
    distributions, in the order of RuleSet.groups."""

    def __init__(self, groups, assignment, group_probs, group_counts):
        self.groups = groups
        self.assignment = assignment
        self.group_probs = group_probs
        self.group_counts = group_counts


@implementer(IRuleSet)
class RuleSet(object):
    """Immutable unordered rule set.

    Build it with fromRules or fromConditions on training data; Marshall
    rebuilds it from stored atoms.
    """

    def __init__(self, rules, features, class_labels, training, dataset=None):
        self.rules = tuple(rules)
        self.features = tuple(features)
        self.class_labels = tuple(class_labels)
        self.num_classes = len(self.class_labels)
        self.training = training
        self.dataset = dataset
        if training.signatures.shape[1] != len(self.rules):
            raise InvariantViolation('atoms describe %d rules, got %d'
                                     % (training.signatures.shape[1],
                                        len(self.rules)))
        self.nesting = training.nesting()
        self._buildGroups()

    @classmethod
    def fromRules(cls, rules, dataset):
        membership = np.zeros((len(rules), dataset.n), dtype=bool)
        for i, rule in enumerate(rules):
            if rule.cover is not None and len(rule.cover) == dataset.n:
                membership[i] = rule.cover
            else:
                membership[i] = rule.matches(dataset)
        training = CoverStatistics.fromMembership(
            membership, dataset.target, dataset.num_classes)
        return cls(rules, dataset.features, dataset.class_labels, training,
                   dataset)

    @classmethod
    def fromConditions(cls, conditions, dataset):
        return cls.fromRules([Rule.fromCondition(c, dataset)
                              for c in conditions], dataset)

    @classmethod
    def empty(cls, dataset):
        return cls.fromRules((), dataset)

    def _buildGroups(self):
        training = self.training
        self._atom_keys = [self.groupKey(np.flatnonzero(row))
                           for row in training.signatures]
        unions = sorted(set(key for key in self._atom_keys if len(key) > 1))
        self.groups = tuple([(i,) for i in range(len(self.rules))]
                            + unions + [ELSE_KEY])
        self.group_counts = {}
        for i, rule in enumerate(self.rules):
            self.group_counts[(i,)] = np.asarray(rule.counts, dtype=np.int64)
        for key in unions:
            self.group_counts[key] = training.unionCounts(key)
        self.group_counts[ELSE_KEY] = training.elseCounts()
        self.assigned_counts = {}
        for key, counts in zip(self._atom_keys, training.counts):
            if key in self.assigned_counts:
                self.assigned_counts[key] = self.assigned_counts[key] + counts
            else:
                self.assigned_counts[key] = counts.copy()
        assigned = sum(int(c.sum()) for c in self.assigned_counts.values())
        if assigned != int(training.counts.sum()):
            raise InvariantViolation('groups assign %d of %d instances'
                                     % (assigned, training.counts.sum()))

    # structure

    @property
    def num_instances(self):
        return int(self.training.counts.sum())

    def groupKey(self, satisfied):
        if not len(satisfied):
            return ELSE_KEY
        return reduce_covering_rules(satisfied, self.nesting)

    def groupCounts(self, key):
        counts = self.group_counts.get(key)
        if counts is None:
            counts = self.training.unionCounts(key)
        return counts

    def referenceCounts(self, key):
        """Counts a group's distribution is estimated from. Empty groups
        fall back to the training marginal, or uniform without data."""
        counts = self.groupCounts(key)
        if counts.sum() == 0:
            counts = self.training.totalCounts()
        if counts.sum() == 0:
            counts = np.ones(self.num_classes, dtype=np.int64)
        return counts

    def groupProb(self, key):
        return _distribution(self.referenceCounts(key))

    @property
    def group_probs(self):
        return dict((key, self.groupProb(key)) for key in self.groups)

    @property
    def else_counts(self):
        return self.group_counts[ELSE_KEY]

    @property
    def else_prob(self):
        return self.groupProb(ELSE_KEY)

    def elseMask(self):
        return self.training.elseMask()

    def groupStructure(self):
        index = dict((key, i) for i, key in enumerate(self.groups))
        atom_groups = np.array([index[key] for key in self._atom_keys],
                               dtype=np.int64)
        if self.training.inverse is None:
            assignment = None
        else:
            assignment = atom_groups[self.training.inverse] \
                if len(atom_groups) else np.zeros(0, dtype=np.int64)
        return GroupStructure(self.groups, assignment,
                              [self.groupProb(key) for key in self.groups],
                              [self.group_counts[key] for key in self.groups])

    def nestingPairs(self):
        pairs = np.argwhere(self.nesting)
        return [(int(i), int(j)) for i, j in pairs if i != j]

    def totalLiterals(self):
        return sum(rule.literalCount() for rule in self.rules)

    # derived rule sets

    def appendRule(self, rule):
        return RuleSet.fromRules(self.rules + (rule,), self._requireData())

    def withoutRule(self, index):
        rules = self.rules[:index] + self.rules[index + 1:]
        return RuleSet.fromRules(rules, self._requireData())

    def permuted(self, order):
        return RuleSet.fromRules([self.rules[i] for i in order],
                                 self._requireData())

    def _requireData(self):
        if self.dataset is None:
            raise InvariantViolation('rule set has no training data attached')
        return self.dataset

    # scores

    def likelihoodTerms(self, include_else=True):
        terms = []
        for key in self.groups:
            if key == ELSE_KEY and not include_else:
                continue
            counts = self.assigned_counts.get(key)
            if counts is None or not counts.any():
                continue
            terms.extend(log_likelihood_terms(counts,
                                              self.referenceCounts(key)))
        return terms

    def regretTerms(self, include_else=True):
        terms = [-log_regret(rule.coverage, self.num_classes)
                 for rule in self.rules]
        if include_else:
            terms.append(-log_regret(int(self.else_counts.sum()),
                                     self.num_classes))
        return terms

    def scoreTerms(self, include_else=True):
        return (self.likelihoodTerms(include_else) +
                self.regretTerms(include_else))

    # prediction

    def coveringMatrix(self, dataset):
        if not dataset.sameSchema(self.features):
            raise SchemaMismatchError('dataset columns %s do not match the '
                                      'model features %s'
                                      % (dataset.featureNames(),
                                         [f.name for f in self.features]))
        membership = np.zeros((len(self.rules), dataset.n), dtype=bool)
        for i, rule in enumerate(self.rules):
            membership[i] = rule.matches(dataset)
        return membership

    def explain(self, satisfied):
        satisfied = tuple(int(i) for i in satisfied)
        key = self.groupKey(satisfied)
        prob = self.groupProb(key)
        if key == ELSE_KEY:
            case = ELSE
        elif len(key) > 1:
            case = UNION
        elif len(satisfied) > 1:
            case = NESTED
        else:
            case = SINGLE
        return PredictionExplanation(case, key, satisfied, prob)

    def predict_dataset(self, dataset):
        membership = self.coveringMatrix(dataset)
        stats = CoverStatistics.fromMembership(membership, None,
                                               self.num_classes)
        explanations = [self.explain(np.flatnonzero(row))
                        for row in stats.signatures]
        atom_probs = np.array([e.probability for e in explanations],
                              dtype=float).reshape(-1, self.num_classes)
        return (atom_probs[stats.inverse],
                [explanations[atom] for atom in stats.inverse])

    def describe(self, show_else=True):
        lines = []
        for i, rule in enumerate(self.rules):
            lines.append('Rule %d: IF %s THEN %s (coverage %d)' % (
                i, rule.describe(self.features),
                self._formatProb(self.groupProb((i,))), rule.coverage))
        if show_else:
            lines.append('Else: %s (coverage %d)' % (
                self._formatProb(self.else_prob), int(self.else_counts.sum())))
        return lines

    def _formatProb(self, prob):
        return ', '.join('%s: %.3f' % (label, p)
                         for label, p in zip(self.class_labels, prob))

    def __len__(self):
        return len(self.rules)

    def __repr__(self):
        return '<RuleSet %d rules>' % len(self.rules)


def _training_ruleset(ruleset, dataset):
    if dataset is None or dataset is ruleset.dataset:
        return ruleset
    return RuleSet.fromConditions([rule.condition for rule in ruleset.rules],
                                  dataset)


def build_groups(rules, dataset):
    """Effective groups of rules estimated on dataset."""
    return RuleSet.fromRules(rules, dataset).groupStructure()


def log_likelihood(ruleset, dataset=None):
    """log2 probability of the labels of dataset, every instance counted
    once through its effective group. Distributions are the ones the rule
    set was estimated with, so held-out data may give -inf."""
    if dataset is None or dataset is ruleset.dataset:
        return math.fsum(ruleset.likelihoodTerms())
    if dataset.target is None:
        raise SchemaMismatchError('dataset has no target column')
    membership = ruleset.coveringMatrix(dataset)
    stats = CoverStatistics.fromMembership(membership, dataset.target,
                                           ruleset.num_classes)
    terms = []
    for row, counts in zip(stats.signatures, stats.counts):
        key = ruleset.groupKey(np.flatnonzero(row))
        terms.extend(log_likelihood_terms(counts,
                                          ruleset.referenceCounts(key)))
    return math.fsum(terms)


def appr_nml_log_score(ruleset, dataset=None):
    """Log-likelihood minus the regret of every rule and of the else rule.

    With another dataset than the training one, the rule conditions are
    re-estimated on it first.
    """
    return math.fsum(_training_ruleset(ruleset, dataset).scoreTerms())


def predict_proba(ruleset, instance):
    """(class distribution, PredictionExplanation) of one instance."""
    row = instance_dataset(instance, ruleset.features, ruleset.class_labels)
    satisfied = np.flatnonzero(ruleset.coveringMatrix(row)[:, 0])
    explanation = ruleset.explain(satisfied)
    return explanation.probability, explanation


def nml_log_score_bruteforce(ruleset, dataset=None, limit=BRUTEFORCE_LIMIT):
    """Exact NML log2 score of the rule set on its training data.

    The denominator sums the maximized likelihood over every label
    sequence; group memberships depend on the features only, and each
    group's distribution is re-estimated from the sequence on the union of
    its rules' covers.
    """
    ruleset = _training_ruleset(ruleset, dataset)
    training = ruleset.training
    n = ruleset.num_instances
    num_classes = ruleset.num_classes
    if num_classes ** n > limit:
        raise BruteForceLimitError('%d**%d sequences exceed the limit of %d'
                                   % (num_classes, n, limit))
    if n == 0:
        return 0.0
    if training.inverse is None:
        raise InvariantViolation('brute force needs per-instance atoms')

    groups = []
    for key in sorted(set(ruleset._atom_keys)):
        assigned_atoms = [a for a, k in enumerate(ruleset._atom_keys)
                          if k == key]
        assigned = np.isin(training.inverse, assigned_atoms)
        if key == ELSE_KEY:
            estimated = assigned
        else:
            touched = np.flatnonzero(training.signatures[:, list(key)]
                                     .any(axis=1))
            estimated = np.isin(training.inverse, touched)
        groups.append((np.flatnonzero(assigned), np.flatnonzero(estimated)))

    total = num_classes ** n
    powers = num_classes ** np.arange(n, dtype=np.int64)
    classes = np.arange(num_classes)
    parts = []
    chunk = 1 << 14
    for start in range(0, total, chunk):
        index = np.arange(start, min(start + chunk, total), dtype=np.int64)
        labels = (index[:, np.newaxis] // powers) % num_classes
        loglik = np.zeros(len(index))
        for assigned, estimated in groups:
            a = (labels[:, assigned, np.newaxis] == classes).sum(axis=1)
            e = (labels[:, estimated, np.newaxis] == classes).sum(axis=1)
            loglik += xlogy(a, e / float(len(estimated))).sum(axis=1)
        parts.extend(np.exp(loglik).tolist())
    return log_likelihood(ruleset) - math.log2(math.fsum(parts))
