"""Exception types shared across the package."""


class NotHermitianError(ValueError):
    """A Hermitian-only routine received a matrix that is not Hermitian."""

    def __init__(self, asymmetry, tol):
        self.asymmetry = asymmetry
        super().__init__(
            f"matrix is not Hermitian: max|M - M^dag| = {asymmetry:.3e} exceeds {tol:.1e}"
        )


class DegenerateProjectionError(ArithmeticError):
    """Every candidate projection annihilated the state (vanishing trace)."""


class ConfigError(ValueError):
    """Invalid experiment or model configuration."""
