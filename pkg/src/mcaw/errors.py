"""Exception hierarchy shared across the workbench."""


class McawError(Exception):
    """Base class for all workbench errors."""


class DictionaryError(McawError):
    """Malformed data dictionary (duplicate column, unknown kind, ...)."""


class ParseError(McawError):
    """CSV parsing failure; message carries line/column context."""


class SpecError(McawError):
    """Invalid synthetic-data specification."""


class DatasetError(McawError):
    """Dataset construction or filtering produced an unusable result."""


class EmptyDatasetError(DatasetError):
    """Filtering / missing-policy left no rows to analyze."""


class DegenerateError(McawError):
    """Analysis precondition violated (single-category variable, n < 2, ...)."""
