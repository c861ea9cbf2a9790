"""Exception types shared across the package."""


class HolocodeError(Exception):
    """Base class for package errors."""


class GeometryError(HolocodeError, ValueError):
    """Invalid or non-hyperbolic tiling request."""


class ResourceLimitError(HolocodeError, RuntimeError):
    """A size guard refused the computation."""


class SearchLimitError(ResourceLimitError):
    """Exhaustive search refused because the instance is too large."""


class CodeSpaceError(HolocodeError, ValueError):
    """State lies outside the code space (behind the horizon)."""


class SchemaError(HolocodeError, ValueError):
    """Malformed input file."""
