"""Exception types shared across the package."""


class ParseError(ValueError):
    """A dataset file row could not be parsed.

    Carries the 1-based line number of the offending row.
    """

    def __init__(self, path, line_no, message):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


class ValidationError(ValueError):
    """Parsed content violates a dataset invariant."""


class DatasetSizeError(ValidationError):
    """Dataset too small for any meaningful split (N < 10)."""


class ConfigError(ValueError):
    """Experiment configuration is malformed or inconsistent."""


class TrainingError(RuntimeError):
    """Model training produced non-finite state."""


class HarnessError(RuntimeError):
    """A model fit or evaluation failed inside the experiment grid."""


class AggregationError(RuntimeError):
    """Result aggregation found missing or inconsistent cells."""
