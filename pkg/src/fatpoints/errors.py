"""Exception types shared across the package."""


class FatpointsError(Exception):
    """Base class for package-specific failures."""


class ParseError(FatpointsError):
    """Malformed system syntax."""


class BudgetError(FatpointsError):
    """A computation would exceed the configured size budget."""
