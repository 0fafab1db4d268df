"""
Exception hierarchy for the L* toolkit.

Every error raised on bad user input derives from LStarError, which is a
ValueError so callers that only know about ValueError (as the CLI's outer
handler does) still catch it. Each class carries a stable ``code`` that is
copied into ErrorDetail for structured output.
"""

from typing import Any, Dict, Optional


class LStarError(ValueError):
    """Base class for all toolkit errors"""

    code = "LSTAR_ERROR"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ParseError(LStarError):
    """Syntax error at a known position"""

    code = "PARSE_ERROR"

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})",
                         {"line": line, "column": column})
        self.line = line
        self.column = column


class ArityError(LStarError):
    code = "ARITY_ERROR"


class UnknownSymbolError(LStarError):
    code = "UNKNOWN_SYMBOL"


class NotClosedError(LStarError):
    """A sentence was required but the formula has free variables"""

    code = "NOT_CLOSED"


class NotDelta0Error(LStarError):
    """An unbounded quantifier was found where only bounded ones are allowed"""

    code = "NOT_DELTA0"


class UnassignedVariableError(LStarError):
    code = "UNASSIGNED_VARIABLE"


class EnumerationCeilingExceeded(LStarError):
    """Bounded enumeration ran past the configured assignment ceiling"""

    code = "ENUMERATION_CEILING"


class NotPrenexError(LStarError):
    code = "NOT_PRENEX"


class InvalidGodelCode(LStarError):
    code = "INVALID_GODEL_CODE"


class ProofFormatError(LStarError):
    code = "PROOF_FORMAT_ERROR"


class CutShapeError(LStarError):
    """Inputs to cut_combine do not fit the construction"""

    code = "CUT_SHAPE_ERROR"


class SchemaGateError(LStarError):
    """A schema record was requested for a sentence or proof that fails its gate"""

    code = "SCHEMA_GATE_ERROR"
