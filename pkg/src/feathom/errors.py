"""Exception hierarchy shared across the package.

Everything raised on purpose derives from FeathomError so callers (and the
CLI) can separate our diagnostics from genuine bugs.
"""


class FeathomError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(FeathomError):
    """Malformed input text: bad CSV shape, blank cells, duplicate timestamps."""


class SchemaError(FeathomError):
    """A feature name or config key is not part of the declared schema."""


class DomainError(FeathomError):
    """A numeric value lies outside its allowed domain."""


class InputError(FeathomError):
    """Arguments are structurally invalid for the requested operation."""


class BoundsError(InputError):
    """A requested window falls outside the series."""


class StructureError(FeathomError):
    """A graph or derived object violates a structural requirement."""


class ResourceError(FeathomError):
    """A configured resource cap would be exceeded."""
