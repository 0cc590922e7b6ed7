"""Component interfaces of UnorderedRules, grouped by module.
"""
from Products.UnorderedRules.interfaces.dataset import IFeatureSchema
from Products.UnorderedRules.interfaces.dataset import IDataset
from Products.UnorderedRules.interfaces.dataset import ILiteral
from Products.UnorderedRules.interfaces.model import IRule
from Products.UnorderedRules.interfaces.model import IRuleSet
from Products.UnorderedRules.interfaces.model import IPredictionExplanation
from Products.UnorderedRules.interfaces.search import ISearchConfig
from Products.UnorderedRules.interfaces.search import ISurrogateAggregation
from Products.UnorderedRules.interfaces.event import IRuleAddedEvent
from Products.UnorderedRules.interfaces.event import IRuleSetFittedEvent
from Products.UnorderedRules.interfaces.event import IFoldEvaluatedEvent
from Products.UnorderedRules.interfaces.marshall import IMarshall
