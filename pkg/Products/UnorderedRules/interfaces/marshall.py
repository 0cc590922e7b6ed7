from zope.interface import Interface


class IMarshall(Interface):
    """De/Marshall rule sets.
    """

    def demarshall(data, **kwargs):
        """Given the blob 'data' rebuild and return the rule set
        """

    def marshall(ruleset, **kwargs):
        """Returns a tuple of content-type, length, and data
        """
