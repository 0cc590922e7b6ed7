class RulesException(Exception):
    pass

class DatasetException(RulesException):
    pass

class LoadError(DatasetException):
    pass

class SchemaMismatchError(DatasetException):
    pass

class BruteForceLimitError(RulesException):
    pass

class ConfigurationError(RulesException):
    pass

class EvaluationError(RulesException):
    pass

class InvariantViolation(RulesException):
    """An internal consistency check failed; this is a bug, not bad input.
    """
