from zope.interface import Interface, Attribute


class IRule(Interface):
    """A self-standing probabilistic rule
    """

    condition = Attribute("Tuple of ILiteral, read as a conjunction")
    counts = Attribute("Per class counts over the rule's training cover")
    coverage = Attribute("Size of the training cover")
    cover = Attribute("Boolean training cover mask, None for loaded models")

    prob = Attribute("Maximum likelihood class distribution over the cover, "
                     "None for an empty cover")

    def matches(dataset):
        """Boolean mask of the dataset rows satisfying the condition"""


class IRuleSet(Interface):
    """An unordered rule set with its implicit else rule
    """

    rules = Attribute("Tuple of IRule")
    features = Attribute("Feature schema the conditions refer to")
    class_labels = Attribute("Class labels, index order")
    groups = Attribute("Effective groups: rule index tuples, () is the else "
                       "rule")
    nesting = Attribute("Matrix, nesting[i, j] is true when cover(i) is a "
                        "subset of cover(j)")

    def groupKey(satisfied):
        """Effective group of an instance satisfying the given rules"""

    def groupProb(key):
        """Class distribution of an effective group"""

    def predict_dataset(dataset):
        """(n x K probability matrix, list of IPredictionExplanation)"""

    def coveringMatrix(dataset):
        """rules x instances boolean satisfaction matrix"""

    def appendRule(rule):
        """A new rule set with rule added, estimated on the same data"""

    def withoutRule(index):
        """A new rule set without the rule at index"""


class IPredictionExplanation(Interface):
    """Why an instance got its class distribution
    """

    case = Attribute("'single', 'union', 'nested' or 'else'")
    contributing_rules = Attribute("Rules whose training covers were pooled")
    satisfied_rules = Attribute("All rules the instance satisfies")
    probability = Attribute("The predicted class distribution")
