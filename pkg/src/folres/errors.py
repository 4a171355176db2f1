class FolresError(Exception):
    """Base class for library errors."""


class UnsupportedInput(FolresError):
    """Input lies outside what the algorithms here can certify."""


class StructuralError(FolresError):
    """An internal invariant failed (e.g. a pullback is not polynomial)."""


class EquivarianceError(FolresError):
    """A derivation on a chart cover is not invariant under the chart's group."""


class ClassificationError(FolresError):
    """A point-local invariant was requested outside its domain."""
