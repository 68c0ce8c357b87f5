"""Exception types shared across the package.

The CLI maps these onto exit codes, so constructors and parsers should
raise the most specific one that applies.
"""


class ParameterError(ValueError):
    """Arguments are structurally invalid (wrong domain, wrong parity, ...)."""


class FormatError(ValueError):
    """A file or text stream does not parse, or its header lies."""


class BudgetError(RuntimeError):
    """The request is well-formed but exceeds a desk-scale enumeration cap."""
