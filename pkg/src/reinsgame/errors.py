"""Exception types shared across the package."""


class GrammarError(ValueError):
    """Malformed family / distribution / indemnity specification text."""


class ScenarioError(ValueError):
    """Scenario file rejected; carries the offending key and line number."""

    def __init__(self, message: str, *, line: int | None = None, key: str | None = None):
        self.line = line
        self.key = key
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if key is not None:
            prefix += f"key '{key}': "
        super().__init__(prefix + message)


class IntegrationAccuracyError(ArithmeticError):
    """Quadrature did not reach the requested tolerance.

    ``achieved`` is the error bound the integrator reported.
    """

    def __init__(self, message: str, achieved: float):
        self.achieved = achieved
        super().__init__(f"{message} (achieved error bound {achieved:.3e})")


class OracleInapplicableError(ValueError):
    """A cross-check oracle was asked about a configuration it cannot judge."""
