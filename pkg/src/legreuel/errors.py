"""Exception hierarchy.

Every error carries a stable ``kind`` string that the CLI reports verbatim.
"""

from __future__ import annotations


class LeGreuelError(Exception):
    kind = "error"


class RingMismatch(LeGreuelError, ValueError):
    kind = "ring_mismatch"


class ParseError(LeGreuelError):
    kind = "parse_error"

    def __init__(self, message: str, span: tuple[int, int] | None = None):
        self.message = message
        self.span = span
        where = f" at line {span[0]}, column {span[1]}" if span else ""
        super().__init__(f"{message}{where}")


class HypothesisViolation(LeGreuelError):
    """A precondition of an invariant formula does not hold for the input."""

    kind = "hypothesis_violation"


class InfiniteDimension(HypothesisViolation):
    kind = "infinite_dimension"


class PolarDimensionTooHigh(HypothesisViolation):
    kind = "polar_dimension_too_high"


class DimensionMismatch(HypothesisViolation):
    kind = "dimension_mismatch"


class CodimMismatch(HypothesisViolation):
    kind = "codim_mismatch"


class ConsistencyViolation(HypothesisViolation):
    kind = "consistency_violation"


class RetriesExhausted(HypothesisViolation):
    kind = "retries_exhausted"

    def __init__(self, message: str, diagnostics: list[str]):
        self.diagnostics = list(diagnostics)
        super().__init__(message + "; " + " | ".join(self.diagnostics))
