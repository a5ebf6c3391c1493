"""Exception hierarchy shared across the package."""


class AwLssvmError(Exception):
    """Base class for all library errors."""


class InputShapeError(AwLssvmError, ValueError):
    """Array shapes or lengths do not agree."""


class NumericInputError(AwLssvmError, ValueError):
    """Input contains NaN or infinite values."""


class DegenerateLabelsError(AwLssvmError, ValueError):
    """A binary subproblem lacks one of its two classes."""


class SolverError(AwLssvmError, ArithmeticError):
    """The dual linear system could not be solved."""


class ConfigError(AwLssvmError, ValueError):
    """A configuration value violates its constraints."""


class DatasetError(AwLssvmError, ValueError):
    """Base class for dataset validation failures."""


class MissingFileError(DatasetError):
    pass


class RowCountError(DatasetError):
    pass


class NonFiniteValueError(DatasetError):
    pass


class LabelRangeError(DatasetError):
    pass


class StratificationError(DatasetError):
    pass


class AllocationError(DatasetError):
    pass
