"""Exception types shared across the package.

Plain ``ValueError`` is used for invalid arguments; the classes here cover
the cases the CLI maps to distinct exit codes or that callers may want to
catch separately.
"""


class ResourceLimitError(RuntimeError):
    """A computation would exceed a configured resource cap."""


class CapacityError(ValueError):
    """A construction exceeds the capacity of its target structure."""

    def __init__(self, message, max_supported=None):
        super().__init__(message)
        self.max_supported = max_supported


class DegenerateFitError(ValueError):
    """Input data admits no meaningful fit (e.g. zero slope in log space)."""
