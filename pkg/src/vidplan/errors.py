"""Error types shared across the toolkit.

The CLI maps these onto its exit-code contract: parse/usage problems are
input errors (exit 1), data that parses but breaks a model invariant is an
invariant violation (exit 2).
"""


class ParseError(ValueError):
    """Input file is malformed (wrong field count, bad number, missing header)."""


class ValidationError(ValueError):
    """Input parsed fine but violates a data-model invariant."""
