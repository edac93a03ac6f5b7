from __future__ import annotations


class DomainError(ValueError):
    """Model or option parameters outside the region where a formula holds."""


class NumericError(ArithmeticError):
    """A numerical routine failed to reach its accuracy target."""


class MoneynessError(DomainError):
    """Option is not in the moneyness class a pricer was asked for."""


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration; ``line`` points into the file when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)
