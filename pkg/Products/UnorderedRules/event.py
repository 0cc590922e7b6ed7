"""Event definitions
"""

from zope.interface import implementer
from zope.interface.interfaces import ObjectEvent

# hooks zope.component's handler dispatch into zope.event.notify
import zope.component.event

from Products.UnorderedRules.interfaces import IRuleAddedEvent
from Products.UnorderedRules.interfaces import IRuleSetFittedEvent
from Products.UnorderedRules.interfaces import IFoldEvaluatedEvent

# Search

@implementer(IRuleAddedEvent)
class RuleAddedEvent(ObjectEvent):
    """A rule was appended to the rule set under construction
    """

    def __init__(self, object, rule, score, surrogate_score):
        ObjectEvent.__init__(self, object)
        self.rule = rule
        self.score = score
        self.surrogate_score = surrogate_score

@implementer(IRuleSetFittedEvent)
class RuleSetFittedEvent(ObjectEvent):
    """The search returned a rule set
    """

    def __init__(self, object, scores, best_index):
        ObjectEvent.__init__(self, object)
        self.scores = tuple(scores)
        self.best_index = best_index

# Evaluation

@implementer(IFoldEvaluatedEvent)
class FoldEvaluatedEvent(ObjectEvent):
    """A cross-validation fold was evaluated
    """
