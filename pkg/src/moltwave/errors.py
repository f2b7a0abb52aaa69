"""Exception types raised by the solver."""


class MoltError(Exception):
    """Base class for all solver errors."""


class ConfigurationError(MoltError, ValueError):
    """Invalid parameters, presets or run configuration."""


class NumericalError(MoltError, ArithmeticError):
    """A numerical procedure failed (no bracket, ill-conditioned correction, ...)."""


class InstabilityError(NumericalError):
    """The solution grew past the blow-up sentinel."""

    def __init__(self, step, max_abs, reference):
        self.step = step
        self.max_abs = max_abs
        self.reference = reference
        super().__init__(
            f"solution blew up at step {step}: max|u| = {max_abs:.3e} "
            f"exceeds 1e6 x initial max ({reference:.3e})"
        )


class RefinementError(ConfigurationError):
    """The grid does not resolve the embedded geometry."""


class FixedPointError(NumericalError):
    """Fixed-point iteration for an implicit source did not converge."""

    def __init__(self, message, history):
        self.history = list(history)
        super().__init__(f"{message}; iterate differences: {self.history}")
