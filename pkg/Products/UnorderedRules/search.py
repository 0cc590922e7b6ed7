"""Two-phase diverse beam search for rules and the rule set loop.

Phase one grows rules from the empty condition, steering by the NML gain
of their uncovered part and keeping beams diverse on uncovered instances.
The best entries seen, ranked by the surrogate score of the rule set plus
their uncovered part, seed phase two, which keeps growing them with gains
estimated on whole covers and ranks the results by the surrogate score of
the rule set plus the whole rule.
"""

import math

import numpy as np
from zope.event import notify
from zope.interface import implementer
from zope.schema import getValidationErrors

from Products.UnorderedRules import config
from Products.UnorderedRules.dataio import refinement_masks
from Products.UnorderedRules.event import RuleAddedEvent
from Products.UnorderedRules.event import RuleSetFittedEvent
from Products.UnorderedRules.exceptions import ConfigurationError
from Products.UnorderedRules.exceptions import InvariantViolation
from Products.UnorderedRules.interfaces import ISearchConfig
from Products.UnorderedRules.log import log, debug
from Products.UnorderedRules.model import Rule
from Products.UnorderedRules.model import RuleSet
from Products.UnorderedRules.model import appr_nml_log_score
from Products.UnorderedRules.regret import log_likelihood_terms
from Products.UnorderedRules.regret import log_regret
from Products.UnorderedRules.surrogate import getAggregation
from Products.UnorderedRules.surrogate import mask_digest
from Products.UnorderedRules.surrogate import surrogate_log_score
from Products.UnorderedRules.utils import condition_key
from Products.UnorderedRules.utils import jaccard


@implementer(ISearchConfig)
class SearchConfig(object):
    """Search hyperparameters.

    >>> cfg = SearchConfig(beam_width=3)
    >>> cfg.beam_width, cfg.num_candidates, cfg.alpha
    (3, 3, 0.05)
    >>> SearchConfig(beam_width=2, num_candidates=4)
    Traceback (most recent call last):
    ...
    Products.UnorderedRules.exceptions.ConfigurationError: num_candidates (4) must not exceed beam_width (2)
    """

    _properties = {
        'beam_width': config.BEAM_WIDTH,
        'alpha': config.ALPHA,
        'num_candidates': config.NUM_CANDIDATES,
        'min_leaf_sizes': config.MIN_LEAF_SIZES,
        'num_cut_points': config.NUM_CUT_POINTS,
        'max_rules': config.MAX_RULES,
        'surrogate_aggregation': config.SURROGATE_AGGREGATION,
        'use_surrogate': True,
        'two_phase': True,
        'stop_tolerance': config.STOP_TOLERANCE,
        'seed': config.DEFAULT_SEED,
        }

    def __init__(self, **kwargs):
        unknown = sorted(set(kwargs) - set(self._properties))
        if unknown:
            raise ConfigurationError('Unknown search options: %s'
                                     % ', '.join(unknown))
        self.__dict__.update(self._properties)
        self.__dict__.update(kwargs)
        if self.num_candidates is None:
            self.num_candidates = self.beam_width
        try:
            for name in ('beam_width', 'num_candidates', 'num_cut_points',
                         'max_rules', 'seed'):
                setattr(self, name, int(getattr(self, name)))
            for name in ('alpha', 'stop_tolerance'):
                setattr(self, name, float(getattr(self, name)))
            self.min_leaf_sizes = tuple(int(s) for s in self.min_leaf_sizes)
        except (TypeError, ValueError) as exc:
            raise ConfigurationError('Bad search option: %s' % exc)
        self.use_surrogate = bool(self.use_surrogate)
        self.two_phase = bool(self.two_phase)
        self.surrogate_aggregation = str(self.surrogate_aggregation)
        self.validate()

    def validate(self):
        errors = getValidationErrors(ISearchConfig, self)
        if errors:
            raise ConfigurationError('; '.join(
                '%s' % (error,) if name is None
                else '%s: %r' % (name, error) for name, error in errors))
        getAggregation(self.surrogate_aggregation)

    def asDict(self):
        result = dict((name, getattr(self, name)) for name in self._properties)
        result['min_leaf_sizes'] = list(self.min_leaf_sizes)
        return result

    def __repr__(self):
        return '<SearchConfig %s>' % ', '.join(
            '%s=%r' % item for item in sorted(self.asDict().items()))


class CandidateRule(object):
    """A rule being grown: its cover and its uncovered part S_unc (the cover
    minus everything the current rule set covers), as boolean masks."""

    def __init__(self, condition, cover, uncovered, counts, unc_counts):
        self.condition = tuple(condition)
        self.cover = cover
        self.uncovered = uncovered
        self.counts = counts
        self.unc_counts = unc_counts
        self.gain = None
        self.surrogate_score = None

    @property
    def coverage(self):
        return int(self.counts.sum())

    @property
    def unc_coverage(self):
        return int(self.unc_counts.sum())

    def literalCount(self):
        return len(self.condition)

    def conditionKey(self):
        return condition_key(self.condition)

    def sortKey(self):
        return (-self.gain, len(self.condition), self.conditionKey())

    def scoreKey(self):
        return (-self.surrogate_score, len(self.condition),
                self.conditionKey())

    def asRule(self, uncovered_only=False):
        if uncovered_only:
            return Rule(self.condition, self.unc_counts, self.uncovered)
        return Rule(self.condition, self.counts, self.cover)

    def __repr__(self):
        return '<CandidateRule %d literals, cover %d, uncovered %d>' % (
            len(self.condition), self.coverage, self.unc_coverage)


def _per_instance(counts, reference, num_classes):
    size = int(np.sum(counts))
    loglik = math.fsum(log_likelihood_terms(counts, reference))
    return (loglik - log_regret(size, num_classes)) / size


def gain_unc(candidate, parent, num_classes):
    """|S_unc| times the change in regret-penalized log2-likelihood per
    instance from Q_unc to S_unc, each estimated on itself."""
    size = candidate.unc_coverage
    if size == parent.unc_coverage:
        return 0.0
    return size * (
        _per_instance(candidate.unc_counts, None, num_classes) -
        _per_instance(parent.unc_counts, None, num_classes))


def gain_incl(candidate, parent, num_classes):
    """As gain_unc, but S_unc and Q_unc are scored with the distributions
    estimated on the whole covers of S and Q."""
    size = candidate.unc_coverage
    return size * (
        _per_instance(candidate.unc_counts, candidate.counts, num_classes) -
        _per_instance(parent.unc_counts, parent.counts, num_classes))


class Beam(object):

    def __init__(self, entries, width, alpha):
        self.entries = list(entries)
        self.width = width
        self.alpha = alpha

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, index):
        return self.entries[index]


def beam_select(candidates, width, alpha, phase):
    """Greedy pick by decreasing gain of at most width candidates with a
    positive gain whose pairwise Jaccard similarity is at most 1 - alpha.
    Phase one compares uncovered parts, phase two whole covers."""
    if phase not in (1, 2):
        raise ValueError('phase must be 1 or 2, got %r' % phase)
    limit = 1.0 - alpha
    admitted = []
    for candidate in sorted((c for c in candidates if c.gain > 0),
                            key=CandidateRule.sortKey):
        mask = candidate.uncovered if phase == 1 else candidate.cover
        if all(jaccard(mask, entry.uncovered if phase == 1 else entry.cover)
               <= limit for entry in admitted):
            admitted.append(candidate)
            if len(admitted) == width:
                break
    return Beam(admitted, width, alpha)


class RuleGrower(object):
    """Finds the next rule for rule sets over one training dataset."""

    def __init__(self, dataset, search_config=None, tree_cache=None):
        self.dataset = dataset
        self.config = search_config or SearchConfig()
        self.num_classes = dataset.num_classes
        self.tree_cache = {} if tree_cache is None else tree_cache
        self._onehot = np.eye(self.num_classes, dtype=np.int64)[dataset.target]
        self._scores = {}
        self.last_seeds = []

    def _counts(self, masks):
        return masks.astype(np.int64) @ self._onehot

    def root(self, ruleset):
        cover = np.ones(self.dataset.n, dtype=bool)
        uncovered = ruleset.elseMask()
        return CandidateRule((), cover, uncovered, self._counts(cover),
                             self._counts(uncovered))

    def refine(self, parent, uncovered, phase):
        """Children of parent with a nonempty uncovered part, with gains."""
        gain = gain_unc if phase == 1 else gain_incl
        literals, masks = refinement_masks(parent.condition, self.dataset,
                                           parent.cover)
        if not literals:
            return []
        unc_masks = masks & uncovered
        keep = np.flatnonzero(unc_masks.any(axis=1))
        if not keep.size:
            return []
        counts = self._counts(masks[keep])
        unc_counts = self._counts(unc_masks[keep])
        children = []
        for row, index in enumerate(keep):
            child = CandidateRule(parent.condition + (literals[index],),
                                  masks[index], unc_masks[index],
                                  counts[row], unc_counts[row])
            child.gain = gain(child, parent, self.num_classes)
            children.append(child)
        return children

    def beamSearch(self, start, uncovered, phase):
        """Every beam entry created while growing from start."""
        beam = [start]
        beam_list = []
        while beam:
            candidates = {}
            for parent in beam:
                for child in self.refine(parent, uncovered, phase):
                    key = child.conditionKey()
                    known = candidates.get(key)
                    if known is None or child.gain > known.gain:
                        candidates[key] = child
            beam = beam_select(candidates.values(), self.config.beam_width,
                               self.config.alpha, phase).entries
            beam_list.extend(beam)
        return beam_list

    def score(self, ruleset, candidate, uncovered_only):
        """Surrogate (or, without surrogate, final) score of the rule set
        plus the candidate's uncovered part or whole cover."""
        mask = candidate.uncovered if uncovered_only else candidate.cover
        key = (uncovered_only, mask_digest(mask))
        score = self._scores.get(key)
        if score is None:
            rule = candidate.asRule(uncovered_only)
            if self.config.use_surrogate:
                score = surrogate_log_score(
                    ruleset, rule, self.dataset,
                    self.config.min_leaf_sizes,
                    self.config.surrogate_aggregation, self.tree_cache)
            else:
                score = appr_nml_log_score(ruleset.appendRule(rule))
            self._scores[key] = score
        return score

    def findNextRule(self, ruleset):
        """(Rule, score) of the best rule to add, or None."""
        # trees and scores only repeat within one step
        self._scores = {}
        self.tree_cache.clear()
        self.last_seeds = []
        root = self.root(ruleset)
        if not root.uncovered.any():
            return None
        beam_list = self.beamSearch(root, root.uncovered, phase=1)
        if not beam_list:
            return None
        for candidate in beam_list:
            candidate.surrogate_score = self.score(ruleset, candidate, True)
        ranked = sorted(beam_list, key=CandidateRule.scoreKey)
        debug('%d phase one entries, best %r' % (len(ranked), ranked[0]))

        if self.config.two_phase:
            seeds = ranked[:self.config.num_candidates]
            finalists = []
            for seed in seeds:
                grown = [seed] + self.beamSearch(seed, root.uncovered, phase=2)
                finalists.extend(grown)
                self.last_seeds.append(seed)
        else:
            finalists = list(ranked)
        for candidate in finalists:
            candidate.surrogate_score = self.score(ruleset, candidate, False)
        best = min(finalists, key=CandidateRule.scoreKey)
        return best.asRule(), best.surrogate_score


def find_next_rule(ruleset, dataset, search_config=None):
    """The next rule to add to ruleset, or None."""
    found = RuleGrower(dataset, search_config).findNextRule(ruleset)
    if found is None:
        return None
    return found[0]


def fit_ruleset(dataset, search_config=None):
    """Grow rules until the surrogate score of the rule set equals its real
    score (or nothing is left to grow), then return the recorded prefix
    with the best approximate NML score."""
    search_config = search_config or SearchConfig()
    grower = RuleGrower(dataset, search_config)
    ruleset = RuleSet.empty(dataset)
    prefixes = [ruleset]
    scores = [appr_nml_log_score(ruleset)]
    reason = 'max_rules reached'
    while len(ruleset.rules) < search_config.max_rules:
        found = grower.findNextRule(ruleset)
        if found is None:
            reason = 'no rule found'
            break
        rule, surrogate = found
        ruleset = ruleset.appendRule(rule)
        score = appr_nml_log_score(ruleset)
        prefixes.append(ruleset)
        scores.append(score)
        log('%s, score %.6f, surrogate %.6f'
            % (rule.describe(dataset.features), score, surrogate),
            summary='Rule %d' % (len(ruleset.rules) - 1))
        notify(RuleAddedEvent(ruleset, rule, score, surrogate))
        if search_config.use_surrogate and \
           abs(surrogate - score) <= search_config.stop_tolerance:
            reason = 'surrogate score reached'
            break
    best = int(np.argmax(scores))
    result = prefixes[best]
    if math.fsum(result.scoreTerms()) != scores[best]:
        raise InvariantViolation('returned prefix does not reproduce its '
                                 'recorded score')
    log('%d of %d rules kept (%s)' % (best, len(scores) - 1, reason),
        summary='Search done')
    notify(RuleSetFittedEvent(result, scores, best))
    return result
