import json
import os

import numpy as np

from Products.UnorderedRules.Marshall import CONTENT_TYPE
from Products.UnorderedRules.Marshall import RuleSetMarshaller
from Products.UnorderedRules.Marshall import load_model
from Products.UnorderedRules.Marshall import save_model
from Products.UnorderedRules.dataio import EQUALS
from Products.UnorderedRules.dataio import GREATER
from Products.UnorderedRules.dataio import LESS_EQ
from Products.UnorderedRules.dataio import Literal
from Products.UnorderedRules.exceptions import LoadError
from Products.UnorderedRules.interfaces import IMarshall
from Products.UnorderedRules.model import RuleSet
from Products.UnorderedRules.search import fit_ruleset
from Products.UnorderedRules.tests.rulestestcase import RulesTestCase
from Products.UnorderedRules.tests.rulestestcase import makeSuite
from Products.UnorderedRules.tests.utils import blockade_dataset
from Products.UnorderedRules.tests.utils import color_dataset
from Products.UnorderedRules.tests.utils import separable_dataset


class MarshallerTest(RulesTestCase):

    def setUp(self):
        self.marshaller = RuleSetMarshaller()
        self.ds = separable_dataset()
        # overlapping rules, so the model stores a union group
        self.ruleset = RuleSet.fromConditions(
            [(Literal(0, LESS_EQ, 60.5),), (Literal(0, GREATER, 40.5),)],
            self.ds)

    def document(self):
        return self.marshaller.asDict(self.ruleset)

    def demarshall(self, document):
        return self.marshaller.demarshall(json.dumps(document))

    def test_interface(self):
        self.assertTrue(IMarshall.providedBy(self.marshaller))
        content_type, length, data = self.marshaller.marshall(self.ruleset)
        self.assertEqual(content_type, CONTENT_TYPE)
        self.assertEqual(length, len(data))

    def test_document(self):
        document = self.document()
        self.assertEqual(document['format_version'], 1)
        self.assertEqual(document['class_labels'], ['a', 'b'])
        self.assertEqual(document['num_instances'], 100)
        self.assertEqual(document['rules'][0]['literals'],
                         [{'feature': 'x', 'op': '<=', 'value': 60.5}])
        self.assertEqual(document['rules'][0]['counts'], [50, 10])
        self.assertEqual(document['groups'][0]['rules'], [0, 1])
        self.assertEqual(document['groups'][0]['counts'], [50, 50])
        self.assertEqual(document['else']['counts'], [0, 0])
        self.assertEqual(document['nesting'], [])

    def test_round_trip(self):
        ds = blockade_dataset()
        ruleset = fit_ruleset(ds)
        content_type, length, data = self.marshaller.marshall(ruleset)
        loaded = self.marshaller.demarshall(data)
        self.assertEqual(loaded.describe(), ruleset.describe())
        test = blockade_dataset(offset=0.03)
        probs, explanations = ruleset.predict_dataset(test)
        loaded_probs, loaded_explanations = loaded.predict_dataset(test)
        self.assertTrue(np.array_equal(probs, loaded_probs))
        self.assertEqual([str(e) for e in explanations],
                         [str(e) for e in loaded_explanations])
        self.assertEqual(self.marshaller.marshall(loaded)[2], data)

    def test_categorical(self):
        ds = color_dataset()
        ruleset = RuleSet.fromConditions([(Literal(0, EQUALS, 0),)], ds)
        document = self.marshaller.asDict(ruleset)
        self.assertEqual(document['rules'][0]['literals'][0]['value'], 'red')
        loaded = self.marshaller.demarshall(json.dumps(document))
        self.assertEqual(loaded.rules[0].condition, ruleset.rules[0].condition)
        document['rules'][0]['literals'][0]['value'] = 'purple'
        self.assertRaises(LoadError, self.marshaller.demarshall,
                          json.dumps(document))

    def test_bad_documents(self):
        self.assertRaises(LoadError, self.marshaller.demarshall, '{not json')
        self.assertRaises(LoadError, self.marshaller.demarshall, '[]')
        document = self.document()
        document['format_version'] = 99
        self.assertRaises(LoadError, self.demarshall, document)
        document = self.document()
        del document['atoms']
        self.assertRaises(LoadError, self.demarshall, document)

    def test_inconsistent_documents(self):
        document = self.document()
        document['rules'][0]['counts'] = [49, 11]
        self.assertRaises(LoadError, self.demarshall, document)
        document = self.document()
        document['num_instances'] = 101
        self.assertRaises(LoadError, self.demarshall, document)
        document = self.document()
        document['groups'][0]['counts'] = [40, 60]
        self.assertRaises(LoadError, self.demarshall, document)
        document = self.document()
        document['rules'][1]['literals'][0]['value'] = 40.25
        self.assertRaises(LoadError, self.demarshall, document)
        document = self.document()
        document['rules'][1]['literals'][0]['feature'] = 'y'
        self.assertRaises(LoadError, self.demarshall, document)
        document = self.document()
        document['rules'][1]['literals'][0]['op'] = '<'
        self.assertRaises(LoadError, self.demarshall, document)


class ModelFileTest(RulesTestCase):

    def test_save_and_load(self):
        ds = separable_dataset()
        ruleset = fit_ruleset(ds)
        path = os.path.join(self.makeTempDir(), 'model.json')
        save_model(ruleset, path)
        loaded = load_model(path)
        self.assertEqual(loaded.describe(), ruleset.describe())
        with open(path, encoding='utf-8') as stream:
            self.assertTrue(stream.read().endswith('}\n'))

    def test_missing_file(self):
        path = os.path.join(self.makeTempDir(), 'absent.json')
        self.assertRaises(LoadError, load_model, path)


def test_suite():
    from unittest import TestSuite
    suite = TestSuite()
    suite.addTest(makeSuite(MarshallerTest))
    suite.addTest(makeSuite(ModelFileTest))
    return suite
