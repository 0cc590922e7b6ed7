"""JSON marshalling of fitted rule sets.

A stored model carries its feature schema, class labels, the rules with their
training counts and the membership atoms of the training data. The atoms are
enough to rebuild every union group, so a loaded model predicts exactly like
the one that was saved.
"""

import json
import os

import numpy as np
from zope.interface import implementer

from Products.UnorderedRules.config import MODEL_FORMAT_VERSION
from Products.UnorderedRules.dataio import FeatureSchema
from Products.UnorderedRules.dataio import Literal
from Products.UnorderedRules.dataio import validate_literal
from Products.UnorderedRules.exceptions import DatasetException
from Products.UnorderedRules.exceptions import InvariantViolation
from Products.UnorderedRules.exceptions import LoadError
from Products.UnorderedRules.exceptions import SchemaMismatchError
from Products.UnorderedRules.interfaces import IMarshall
from Products.UnorderedRules.log import log
from Products.UnorderedRules.model import ELSE_KEY
from Products.UnorderedRules.model import CoverStatistics
from Products.UnorderedRules.model import Rule
from Products.UnorderedRules.model import RuleSet

CONTENT_TYPE = 'application/json'


def _plain(value):
    """numpy scalars to their Python counterparts."""
    if isinstance(value, np.generic):
        return value.item()
    return value


def _literal_record(literal, features):
    feature = features[literal.feature_index]
    if literal.isNumeric():
        value = literal.value
    else:
        value = _plain(feature.levels[literal.value])
    return {'feature': feature.name, 'op': literal.op, 'value': value}


def _literal_from_record(record, features, names):
    try:
        index = names[record['feature']]
        op = record['op']
        feature = features[index]
        if feature.isNumeric():
            literal = Literal(index, op, record['value'])
        else:
            code = feature.levelIndex(record['value'])
            if code < 0:
                raise LoadError('Unknown level %r of feature %r'
                                % (record['value'], feature.name))
            literal = Literal(index, op, code)
    except KeyError as exc:
        raise LoadError('Bad literal %r: missing %s' % (record, exc))
    except (TypeError, ValueError) as exc:
        raise LoadError('Bad literal %r: %s' % (record, exc))
    try:
        validate_literal(literal, features)
    except SchemaMismatchError as exc:
        raise LoadError(str(exc))
    return literal


@implementer(IMarshall)
class RuleSetMarshaller(object):

    def __init__(self, indent=None):
        self.indent = indent

    def marshall(self, ruleset, **kwargs):
        document = self.asDict(ruleset)
        data = json.dumps(document, sort_keys=True, indent=self.indent)
        return CONTENT_TYPE, len(data), data

    def asDict(self, ruleset):
        features = ruleset.features
        training = ruleset.training
        rules = []
        for i, rule in enumerate(ruleset.rules):
            rules.append({
                'literals': [_literal_record(l, features)
                             for l in rule.condition],
                'counts': list(rule.counts),
                'prob': ruleset.groupProb((i,)).tolist(),
                'coverage': rule.coverage,
                })
        groups = [{'rules': list(key),
                   'counts': ruleset.group_counts[key].tolist(),
                   'prob': ruleset.groupProb(key).tolist()}
                  for key in ruleset.groups if len(key) > 1]
        atoms = [{'rules': np.flatnonzero(row).tolist(),
                  'counts': counts.tolist()}
                 for row, counts in zip(training.signatures, training.counts)]
        return {
            'format_version': MODEL_FORMAT_VERSION,
            'class_labels': [_plain(label) for label in ruleset.class_labels],
            'features': [{'name': f.name, 'kind': f.kind,
                          'levels': [_plain(level) for level in f.levels],
                          'cut_points': list(f.cut_points)}
                         for f in features],
            'rules': rules,
            'else': {'counts': ruleset.else_counts.tolist(),
                     'prob': ruleset.else_prob.tolist()},
            'nesting': [list(pair) for pair in ruleset.nestingPairs()],
            'groups': groups,
            'atoms': atoms,
            'num_instances': ruleset.num_instances,
            }

    def demarshall(self, data, **kwargs):
        try:
            document = json.loads(data)
        except ValueError as exc:
            raise LoadError('Model is not valid JSON: %s' % exc)
        if not isinstance(document, dict):
            raise LoadError('Model document must be a JSON object')
        version = document.get('format_version')
        if version != MODEL_FORMAT_VERSION:
            raise LoadError('Unsupported model format version %r' % version)
        try:
            return self._rebuild(document)
        except (KeyError, TypeError, ValueError) as exc:
            raise LoadError('Malformed model: %s' % exc)
        except (DatasetException, InvariantViolation) as exc:
            if isinstance(exc, LoadError):
                raise
            raise LoadError('Inconsistent model: %s' % exc)

    def _rebuild(self, document):
        class_labels = tuple(document['class_labels'])
        num_classes = len(class_labels)
        features = tuple(FeatureSchema(f['name'], f['kind'], f['levels'],
                                       f['cut_points'])
                         for f in document['features'])
        names = dict((f.name, i) for i, f in enumerate(features))
        rules = []
        for record in document['rules']:
            condition = tuple(_literal_from_record(l, features, names)
                              for l in record['literals'])
            rules.append(Rule(condition, record['counts']))

        atoms = document['atoms']
        signatures = np.zeros((len(atoms), len(rules)), dtype=bool)
        counts = np.zeros((len(atoms), num_classes), dtype=np.int64)
        for row, atom in enumerate(atoms):
            signatures[row, atom['rules']] = True
            counts[row] = atom['counts']
        training = CoverStatistics(signatures, counts)

        for i, rule in enumerate(rules):
            if len(rule.counts) != num_classes:
                raise LoadError('Rule %d has %d counts for %d classes'
                                % (i, len(rule.counts), num_classes))
            if tuple(training.unionCounts((i,)).tolist()) != rule.counts:
                raise LoadError('Counts of rule %d disagree with the atoms'
                                % i)
        if int(counts.sum()) != document['num_instances']:
            raise LoadError('Atoms hold %d instances, model claims %d'
                            % (counts.sum(), document['num_instances']))
        if training.elseCounts().tolist() != document['else']['counts']:
            raise LoadError('Else counts disagree with the atoms')

        ruleset = RuleSet(rules, features, class_labels, training)
        nesting = [list(pair) for pair in ruleset.nestingPairs()]
        if nesting != document['nesting']:
            raise LoadError('Nesting pairs disagree with the atoms')
        for group in document['groups']:
            key = tuple(group['rules'])
            if key == ELSE_KEY or key not in ruleset.group_counts or \
               ruleset.group_counts[key].tolist() != group['counts']:
                raise LoadError('Union group %r disagrees with the atoms'
                                % (key,))
        return ruleset


def save_model(ruleset, path):
    content_type, length, data = RuleSetMarshaller(indent=2).marshall(ruleset)
    with open(path, 'w', encoding='utf-8') as stream:
        stream.write(data)
        stream.write('\n')
    log('%d rules, %d bytes' % (len(ruleset.rules), length),
        summary='Saved %s' % path)


def load_model(path):
    if not os.path.exists(path):
        raise LoadError('No such file: %s' % path)
    with open(path, encoding='utf-8') as stream:
        data = stream.read()
    return RuleSetMarshaller().demarshall(data)
