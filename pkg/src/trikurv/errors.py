"""Exception types shared across the engine."""

from __future__ import annotations


class TrikurvError(Exception):
    pass


class ParseError(TrikurvError):
    """Malformed expression text.

    ``offset`` is a byte offset into the UTF-8 encoded input.
    """

    def __init__(self, offset: int, message: str, expected: str | None = None):
        self.offset = offset
        self.message = message
        self.expected = expected
        text = f"{message} at offset {offset}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)


class DomainError(TrikurvError):
    """An expression was evaluated outside its domain."""

    def __init__(self, node: str, value: float, reason: str):
        self.node = node
        self.value = value
        self.reason = reason
        super().__init__(f"{reason}: {node} at value {value!r}")


class NearPole(DomainError):
    pass


class UsableOrderExhausted(TrikurvError):
    pass


class RadicandNegative(TrikurvError):
    def __init__(self, radicand: float, message: str = "negative radicand"):
        self.radicand = radicand
        super().__init__(f"{message}: {radicand!r}")


class RadicandNonpositive(TrikurvError):
    def __init__(self, radicand: float):
        self.radicand = radicand
        super().__init__(
            f"radicand {radicand!r} <= 0: no proper triharmonic curve for these data")


class HypothesisViolation(TrikurvError):
    def __init__(self, case: str, predicate: str, detail: str = ""):
        self.case = case
        self.predicate = predicate
        msg = f"{case}: hypothesis '{predicate}' fails"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class NoConvergence(TrikurvError):
    def __init__(self, message: str, diagnostics: list[dict]):
        self.diagnostics = diagnostics
        super().__init__(message)
