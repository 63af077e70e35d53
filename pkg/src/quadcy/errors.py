"""Exception hierarchy.

``InputError`` subclasses mean the user's data is inconsistent (CLI exit
code 1); ``EngineError`` subclasses mean a computation could not certify a
result (exit code 2).
"""

from __future__ import annotations


class QuadcyError(Exception):
    kind = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def payload(self) -> dict:
        out = {"error": self.kind, "message": self.message}
        for k, v in self.details.items():
            out[k] = v if isinstance(v, (int, str, bool, type(None), list, dict)) else str(v)
        return out


class InputError(QuadcyError):
    kind = "InputError"


class EngineError(QuadcyError):
    kind = "EngineError"


class ParseError(InputError):
    kind = "ParseError"

    def __init__(self, message: str, line: int, col: int, expected: str = ""):
        super().__init__(f"{message} at line {line}, column {col}", line=line, col=col, expected=expected)
        self.line = line
        self.col = col
        self.expected = expected


class DocumentError(InputError):
    kind = "DocumentError"


class NotAutomorphism(InputError):
    kind = "NotAutomorphism"


class NotHomomorphism(InputError):
    kind = "NotHomomorphism"


class ZeroP(InputError):
    kind = "ZeroP"


class NotCommuting(InputError):
    kind = "NotCommuting"


class NotFrobenius(EngineError):
    kind = "NotFrobenius"


class NotKoszulRegular(EngineError):
    kind = "NotKoszulRegular"


class NotInvertible(EngineError):
    kind = "NotInvertible"


class InconsistentDual(EngineError):
    kind = "InconsistentDual"


class CrossCheckMismatch(EngineError):
    kind = "CrossCheckMismatch"
