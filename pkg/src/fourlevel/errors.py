"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid user-supplied configuration (bad flags, bad config file)."""


class SolverError(RuntimeError):
    """A linear solve or time integration failed or did not meet tolerance."""


class AnisotropyError(SolverError):
    """The susceptibility tensor acquired a cross-polarization component.

    The model predicts a diagonal tensor for the supported field geometries,
    so a non-negligible cross component means the inputs (or the solver
    output) violate that assumption.
    """


class NoTransparencyAngle(ValueError):
    """No polarization angle can cancel the resonant absorption.

    Raised when the required sin^2(psi) exceeds 1, i.e. the rf field is too
    weak relative to the coupling field. The offending right-hand side is
    kept in ``rhs``.
    """

    def __init__(self, message: str, rhs: float):
        super().__init__(message)
        self.rhs = rhs
