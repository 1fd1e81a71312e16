"""Exception types shared across the package."""

__all__ = [
    "BudgetExceededError",
    "InfeasiblePrescriptionError",
    "FormatError",
]


class BudgetExceededError(RuntimeError):
    """An enumeration or search would exceed its configured resource budget."""


class InfeasiblePrescriptionError(ValueError):
    """The requested canonical configuration of subspaces cannot exist."""


class FormatError(ValueError):
    """Malformed input text (matrix file, type string, partition document)."""
