"""Exception hierarchy shared by every module of the package."""


class EulerRegError(Exception):
    """Base class for all package errors."""


class DomainError(EulerRegError, ValueError):
    """Raised when an argument lies outside the mathematical domain (rho <= 0, e <= 0)."""


class NonAdmissibleState(EulerRegError):
    """Raised when a state violates positivity of temperature or convexity of -s.

    ``where`` holds the offending flat index (or ``None`` for scalar input).
    """

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class EosConsistencyError(EulerRegError):
    """Two algebraically identical routes to a thermodynamic quantity disagree."""


class DegenerateCoefficient(EulerRegError):
    """Raised when d == 0 makes the lambda-shift of the M-matrix analysis undefined."""


class BadParams(EulerRegError, ValueError):
    """Incomplete or inconsistent parameters for an initial condition or construction."""


class StepFailure(EulerRegError):
    """Time integration could not continue.

    The partial trajectory (including the offending state when available) is
    attached as ``trajectory`` so diagnostics can still be run on it.
    """

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class FamilyNotGeneralized(EulerRegError):
    """The entropy family fails f' > 0 or f'/c_p - f'' > 0 on the visited states."""


class NoCounterexample(EulerRegError):
    """The S matrix has no positive eigenvalue, so no violating gradient pair exists."""


class BadEos(EulerRegError):
    """The equation of state cannot support the requested construction (e.g. p_e == 0)."""


class ConfigError(EulerRegError):
    """Scenario configuration failed to parse or validate."""
