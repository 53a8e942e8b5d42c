"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Malformed numerical input (shape, symmetry or definiteness)."""


class GdofDomainError(ValueError):
    """A closed form was requested outside the parameter range it covers.

    ``assumption`` names the violated condition.
    """

    def __init__(self, assumption: str, detail: str = ""):
        self.assumption = assumption
        msg = f"requires {assumption}"
        if detail:
            msg = f"{msg} ({detail})"
        super().__init__(msg)


class SlopeEstimationError(ArithmeticError):
    """A finite-SNR evaluator returned a non-finite value."""
