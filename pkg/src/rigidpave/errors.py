"""Exception and warning hierarchy."""


class RigidPaveError(Exception):
    """Base class for all package errors."""


class ParameterError(RigidPaveError, ValueError):
    """A model parameter violates its documented bounds."""


class DomainError(RigidPaveError, ValueError):
    """A formula is evaluated outside its mathematical domain."""


class NoRootError(RigidPaveError, ValueError):
    pass


class DegenerateStateError(RigidPaveError, ValueError):
    pass


class GeometryError(RigidPaveError, ValueError):
    pass


class BasinError(RigidPaveError, ValueError):
    """Deflection basin unusable for backcalculation (layout, sign, singular area)."""


class SolverError(RigidPaveError, RuntimeError):
    """A numerical solver failed to converge.

    Attributes
    ----------
    residual : float or None
        Last convergence measure reached before giving up.
    """

    def __init__(self, message, residual=None):
        super().__init__(message if residual is None else f"{message} (residual={residual:.3e})")
        self.residual = residual


class TrainingError(RigidPaveError, RuntimeError):
    pass


class ModelFormatError(RigidPaveError, ValueError):
    pass


class FixtureError(RigidPaveError, ValueError):
    """Fixture file does not match its schema; message carries row/column."""


class ExtrapolationWarning(UserWarning):
    pass


class DataInconsistencyWarning(UserWarning):
    pass


class ClampWarning(UserWarning):
    pass
