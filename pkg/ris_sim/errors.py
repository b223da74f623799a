"""Exception hierarchy for the simulator.

Library code raises these; only the command-line layer turns them into exit codes.
"""
from typing import List, Optional


class RisSimError(Exception):
    """Base class for every error raised by ris_sim."""


class InvalidInputError(RisSimError, ValueError):
    """A numeric argument is non-finite, out of range or otherwise unusable."""


class DegenerateGeometryError(RisSimError):
    """Two points coincide, so no propagation direction exists."""


class DimensionMismatchError(RisSimError):
    """Matrix or array shapes do not chain together."""


class SearchSpaceTooLargeError(RisSimError):
    """Exhaustive phase search would exceed the enumeration cap."""


class EmptyHeatmapError(RisSimError):
    """An optimum was requested from a heatmap with no cells."""


class ConfigError(RisSimError):
    """A configuration file could not be read or does not match the schema."""

    def __init__(self, message: str, path: Optional[str] = None, location: Optional[str] = None):
        self.path = path
        self.location = location
        prefix = path or "<config>"
        if location:
            prefix = f"{prefix}:{location}"
        super().__init__(f"{prefix}: {message}")


class ScenarioValidationError(RisSimError):
    """The scenario breaks one or more deployment rules."""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        joined = "; ".join(self.violations)
        super().__init__(f"{len(self.violations)} scenario violation(s): {joined}")


class OutputError(RisSimError):
    """A result file could not be written or read back."""

    def __init__(self, message: str, path: Optional[str] = None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
