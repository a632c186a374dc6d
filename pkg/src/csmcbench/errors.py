"""Exception types shared across the workbench.

Every error raised on purpose derives from :class:`WorkbenchError`, so the CLI
can map it to exit status 1 and a JSON error record.
"""


class WorkbenchError(Exception):
    """Base class for all domain errors."""


class DomainError(WorkbenchError, ValueError):
    """Argument outside the domain of a formula (e.g. A <= 0)."""


class NoiseNotLipschitz(WorkbenchError, ValueError):
    pass


class PoleOnAxis(WorkbenchError, ZeroDivisionError):
    pass


class InsufficientData(WorkbenchError, ValueError):
    pass


class NonPositiveAutocorrelation(WorkbenchError, ValueError):
    pass


class FitDiverged(WorkbenchError, RuntimeError):
    pass


class NoConvergence(WorkbenchError, RuntimeError):
    pass


class NonPhysicalSolution(WorkbenchError, RuntimeError):
    pass


class NearLimitCycle(WorkbenchError, ZeroDivisionError):
    pass


class ConfigError(WorkbenchError, ValueError):
    pass


class NumericBlowup(WorkbenchError, FloatingPointError):
    pass


class WindowTooShort(WorkbenchError, ValueError):
    pass
