"""Exception types shared across the package."""


class ConfigError(Exception):
    """Invalid run configuration (bad key, missing value, inconsistent setup)."""


class NumericalError(RuntimeError):
    """The solver produced an unusable state and cannot continue."""


class InadmissibleStateError(NumericalError):
    """A state with non-positive density or pressure was encountered.

    Carries the offending cell indices (if known) so failures can be
    located on the grid.
    """

    def __init__(self, message: str, cells=None):
        super().__init__(message)
        self.cells = cells
