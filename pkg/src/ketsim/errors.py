"""Error types shared across the package."""


class ImpossibleOutcomeError(ValueError):
    """Raised when a projection or post-selection targets an outcome whose
    probability is below the 1e-12 floor. Never produces a silent NaN."""


class ParameterError(ValueError):
    """Raised for invalid scenario parameters or CLI parameter overrides."""
