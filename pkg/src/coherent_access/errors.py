"""Exceptions raised by the library."""


class DomainError(ValueError):
    """An input lies outside the region where a formula is defined."""


class InfeasibleMomentsError(DomainError):
    """Target moments cannot be matched by any distribution on the grid."""

    def __init__(self, order, target, bound, message=None):
        self.order = order
        self.target = target
        self.bound = bound
        super().__init__(
            message
            or f"moment <E^{order}> = {target!r} violates grid bound {bound!r}"
        )


class ConvergenceError(ArithmeticError):
    """An iterative solve stopped before reaching its tolerance."""

    def __init__(self, message, residual, iterations):
        self.residual = residual
        self.iterations = iterations
        super().__init__(f"{message} (residual={residual:.3e}, iterations={iterations})")
