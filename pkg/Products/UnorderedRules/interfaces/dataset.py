from zope.interface import Interface, Attribute


class IFeatureSchema(Interface):
    """Name, kind and literal universe of one input column
    """

    name = Attribute("Column name")
    kind = Attribute("Either 'numeric' or 'categorical'")
    levels = Attribute("Ordered distinct labels of a categorical feature")
    cut_points = Attribute("Ascending thresholds of a numeric feature")

    def isNumeric():
        """True for numeric features"""

    def levelIndex(label):
        """Code of a level label, -1 if the label is unknown"""


class IDataset(Interface):
    """A typed, immutable feature table plus a categorical target
    """

    features = Attribute("Sequence of IFeatureSchema")
    columns = Attribute("Per feature arrays; floats for numeric features, "
                        "level codes for categorical ones")
    target = Attribute("Class indices in [0, num_classes), or None when the "
                       "table was loaded for prediction only")
    class_labels = Attribute("Class labels, index order")
    n = Attribute("Number of instances")
    num_classes = Attribute("Number of classes")

    def classCounts(mask=None):
        """Per class counts over the instances selected by a boolean mask"""

    def subset(indices, num_cut_points=None):
        """Rows at indices; cut points are recomputed when num_cut_points
        is given"""


class ILiteral(Interface):
    """A single feature constraint
    """

    feature_index = Attribute("Index of the constrained feature")
    op = Attribute("One of '<=', '>', '==', '!='")
    value = Attribute("Threshold (numeric) or level code (categorical)")

    def evaluate(column):
        """Boolean mask of the values satisfying the literal"""

    def key():
        """Sort key, (feature_index, operator order, value)"""

    def describe(features):
        """Human readable form, e.g. 'petal_width <= 0.8'"""
