"""Exception types shared across the pipeline."""


class StyleTreeError(Exception):
    """Base class for every error this package raises on purpose."""


class ImageFormatError(StyleTreeError):
    """Unsupported, corrupt, or truncated image file."""


class DatasetError(StyleTreeError):
    """Dataset directory does not have the category/images layout."""


class SamplingError(StyleTreeError):
    """Grid too small or too uniform to yield the required patches."""


class ConfigError(StyleTreeError):
    """Bad option value, unknown key, or store/config mismatch."""


class TrainingError(StyleTreeError):
    """Training input violates a precondition (category sizes, emptiness)."""


class ContractError(StyleTreeError):
    """Internal contract violated (shape, length, or symmetry mismatch)."""


class AggregationError(StyleTreeError):
    """Distance aggregation received an empty or inconsistent group."""


class NormalizationError(StyleTreeError):
    """Distance matrix cannot be normalized (zero self-distance)."""


class ExportError(StyleTreeError):
    """Serialization constraint violated (e.g. truncated-name collision)."""


class EvaluationError(StyleTreeError):
    """Split plan impossible for the dataset at hand."""
