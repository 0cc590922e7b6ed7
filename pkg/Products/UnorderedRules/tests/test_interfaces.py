from zope.interface.verify import verifyClass
from zope.interface.verify import verifyObject

from Products.UnorderedRules.Marshall import RuleSetMarshaller
from Products.UnorderedRules.dataio import Dataset
from Products.UnorderedRules.dataio import FeatureSchema
from Products.UnorderedRules.dataio import LESS_EQ
from Products.UnorderedRules.dataio import Literal
from Products.UnorderedRules.event import FoldEvaluatedEvent
from Products.UnorderedRules.event import RuleAddedEvent
from Products.UnorderedRules.event import RuleSetFittedEvent
from Products.UnorderedRules.interfaces import IDataset
from Products.UnorderedRules.interfaces import IFeatureSchema
from Products.UnorderedRules.interfaces import IFoldEvaluatedEvent
from Products.UnorderedRules.interfaces import ILiteral
from Products.UnorderedRules.interfaces import IMarshall
from Products.UnorderedRules.interfaces import IPredictionExplanation
from Products.UnorderedRules.interfaces import IRule
from Products.UnorderedRules.interfaces import IRuleAddedEvent
from Products.UnorderedRules.interfaces import IRuleSet
from Products.UnorderedRules.interfaces import IRuleSetFittedEvent
from Products.UnorderedRules.interfaces import ISearchConfig
from Products.UnorderedRules.interfaces import ISurrogateAggregation
from Products.UnorderedRules.model import PredictionExplanation
from Products.UnorderedRules.model import Rule
from Products.UnorderedRules.model import RuleSet
from Products.UnorderedRules.search import SearchConfig
from Products.UnorderedRules.surrogate import getAggregation
from Products.UnorderedRules.surrogate import MaxAggregation
from Products.UnorderedRules.surrogate import MinAggregation
from Products.UnorderedRules.tests.rulestestcase import RulesTestCase
from Products.UnorderedRules.tests.rulestestcase import makeSuite
from Products.UnorderedRules.tests.utils import separable_dataset

CLASSES = (
    (IFeatureSchema, FeatureSchema),
    (ILiteral, Literal),
    (IDataset, Dataset),
    (IRule, Rule),
    (IRuleSet, RuleSet),
    (IPredictionExplanation, PredictionExplanation),
    (ISearchConfig, SearchConfig),
    (ISurrogateAggregation, MaxAggregation),
    (ISurrogateAggregation, MinAggregation),
    (IMarshall, RuleSetMarshaller),
    (IRuleAddedEvent, RuleAddedEvent),
    (IRuleSetFittedEvent, RuleSetFittedEvent),
    (IFoldEvaluatedEvent, FoldEvaluatedEvent),
    )


class InterfaceTest(RulesTestCase):

    def test_classes(self):
        for iface, klass in CLASSES:
            self.assertTrue(verifyClass(iface, klass),
                            '%s does not implement %s' % (klass, iface))

    def test_objects(self):
        ds = separable_dataset()
        ruleset = RuleSet.fromConditions([(Literal(0, LESS_EQ, 50.5),)], ds)
        objects = (
            (IFeatureSchema, ds.features[0]),
            (ILiteral, ruleset.rules[0].condition[0]),
            (IDataset, ds),
            (IRule, ruleset.rules[0]),
            (IRuleSet, ruleset),
            (IPredictionExplanation, ruleset.explain([0])),
            (ISearchConfig, SearchConfig()),
            (ISurrogateAggregation, getAggregation('max')),
            (IMarshall, RuleSetMarshaller()),
            )
        for iface, obj in objects:
            self.assertTrue(verifyObject(iface, obj),
                            '%r does not provide %s' % (obj, iface))


def test_suite():
    from unittest import TestSuite
    suite = TestSuite()
    suite.addTest(makeSuite(InterfaceTest))
    return suite
