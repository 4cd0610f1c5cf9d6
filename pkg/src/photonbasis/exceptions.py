class DomainError(ValueError):
    """Argument outside the domain where a function is defined or trusted."""


class GridMismatchError(ValueError):
    """Spectral samples do not live on the quadrature rule they are used with."""


class ConfigError(ValueError):
    """Invalid command configuration. ``field`` names the offending option."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
