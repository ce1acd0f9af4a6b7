"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: data-format and validation problems
exit 3, configuration problems exit 4, training failures exit 5.
"""

from __future__ import annotations


class HeartmlError(Exception):
    """Base class for all toolkit errors."""


class DataFormatError(HeartmlError):
    """A file or stream could not be parsed into a valid Dataset."""


class MalformedHeaderError(DataFormatError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class UnknownCategoryError(DataFormatError):
    def __init__(self, row: int, attr: str, text: str):
        super().__init__(f"row {row}: value {text!r} is not a declared category of attribute {attr!r}")
        self.row = row
        self.attr = attr
        self.text = text


class ArityMismatchError(DataFormatError):
    def __init__(self, row: int, expected: int, got: int):
        super().__init__(f"row {row}: expected {expected} values, got {got}")
        self.row = row
        self.expected = expected
        self.got = got


class NonNumericCellError(DataFormatError):
    def __init__(self, row: int, attr: str, text: str):
        super().__init__(f"row {row}: cell {text!r} of numeric attribute {attr!r} is not a finite number")
        self.row = row
        self.attr = attr
        self.text = text


class MissingColumnError(DataFormatError):
    def __init__(self, name: str):
        super().__init__(f"input has no column named {name!r}")
        self.name = name


class InvalidSpecError(DataFormatError):
    """Synthetic-data generation spec is inconsistent (bad probabilities, negative stddev)."""


class ModelFormatError(DataFormatError):
    """A serialized model document is malformed or has an unsupported version."""


class MissingTargetError(DataFormatError):
    def __init__(self, row: int):
        super().__init__(f"row {row}: target value is missing")
        self.row = row


class SchemaMismatchError(HeartmlError):
    """A row or dataset does not conform to the schema a model was trained on."""


class ConfigError(HeartmlError):
    """Invalid configuration (bad flag combination, unknown attribute name, ...)."""


class TooFewInstancesError(ConfigError):
    def __init__(self, n: int, k: int):
        super().__init__(f"cannot split {n} instances into {k} folds")
        self.n = n
        self.k = k


class TrainingError(HeartmlError):
    """A classifier could not be trained on the given data."""


class NoInstancesError(TrainingError):
    def __init__(self):
        super().__init__("training data contains no instances")


class EmptyClassError(TrainingError):
    def __init__(self, label: str):
        super().__init__(f"target class {label!r} has no training instances")
        self.label = label


class EmptySubsetError(HeartmlError):
    """CFS merit is undefined for the empty feature subset."""


class EmptyMatrixError(HeartmlError):
    """Accuracy/misclassification are undefined for an all-zero confusion matrix."""


class NoPositivesError(HeartmlError):
    """Sensitivity is undefined when tp + fn = 0."""


class NoNegativesError(HeartmlError):
    """Specificity is undefined when tn + fp = 0."""


class InvalidCountError(HeartmlError):
    """Binomial interval arguments out of range (need 0 <= successes <= n, n > 0)."""


class NotNumericError(HeartmlError):
    def __init__(self, attr: str):
        super().__init__(f"attribute {attr!r} is not numeric")
        self.attr = attr


class CrossValidationError(TrainingError):
    """Training failed inside a cross-validation fold."""

    def __init__(self, fold: int, cause: Exception):
        super().__init__(f"fold {fold}: {cause}")
        self.fold = fold
        self.cause = cause
