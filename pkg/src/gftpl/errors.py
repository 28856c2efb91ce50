"""Exception types shared across the package."""


class GftplError(Exception):
    """Base class for all library errors."""


class ParameterError(GftplError):
    """A numeric or structural argument is outside its allowed range."""


class InvalidMatrixError(GftplError):
    """A translation-matrix row table is malformed."""


class NotASeparatorError(GftplError):
    """A probe set fails to distinguish two learner actions or policies."""

    def __init__(self, pair, message=None):
        self.pair = pair
        super().__init__(message or f"indistinguishable pair: {pair!r}")


class ConfigError(GftplError):
    """An experiment configuration is invalid; ``path`` locates the bad field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
