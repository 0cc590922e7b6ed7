"""Event-related interfaces
"""

from zope.interface import Attribute
from zope.interface.interfaces import IObjectEvent


class IRuleAddedEvent(IObjectEvent):
    """A rule was appended to the rule set under construction; the object is
    the new rule set
    """

    rule = Attribute("The appended rule")
    score = Attribute("Approximate NML log2 score of the new rule set")
    surrogate_score = Attribute("Surrogate score the rule was selected with")


class IRuleSetFittedEvent(IObjectEvent):
    """The search finished; the object is the returned rule set
    """

    scores = Attribute("Scores of every recorded prefix, empty set first")
    best_index = Attribute("Index of the returned prefix")


class IFoldEvaluatedEvent(IObjectEvent):
    """One cross-validation fold was evaluated; the object is the fold result
    """
