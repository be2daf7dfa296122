"""Exception hierarchy shared by every stage of the toolchain."""

from __future__ import annotations

from typing import NamedTuple, Optional


class Span(NamedTuple):
    line: int
    column: int
    offset: int
    length: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class RbgError(Exception):
    """Base class; carries an optional source span."""

    def __init__(self, message: str, span: Optional[Span] = None):
        self.message = message
        self.span = span
        super().__init__(f"{message} ({span})" if span is not None else message)


# lexical
class LexError(RbgError):
    pass


class UnexpectedCharacter(LexError):
    pass


class UnterminatedComment(LexError):
    pass


# high-level front end
class MacroError(RbgError):
    pass


class InvalidPaste(MacroError):
    pass


class ArityMismatch(MacroError):
    pass


class DuplicateMacro(MacroError):
    pass


class RecursiveExpansionLimit(MacroError):
    pass


class BoardError(RbgError):
    pass


class RaggedRows(BoardError):
    pass


class RaggedLayers(BoardError):
    pass


class EmptyBoard(BoardError):
    pass


class InvalidHexShape(BoardError):
    pass


class SugarError(RbgError):
    pass


class ZeroPower(SugarError):
    pass


class MixedCommaList(SugarError):
    pass


# low-level parser
class ParseError(RbgError):
    pass


class RbgSyntaxError(ParseError):
    def __init__(self, message: str, span: Optional[Span] = None, expected=()):
        self.expected = tuple(expected)
        if self.expected:
            message = f"{message}; expected one of: {', '.join(self.expected)}"
        super().__init__(message, span)


class MissingSection(ParseError):
    pass


class DuplicateSection(ParseError):
    pass


class UndeclaredIdentifier(ParseError):
    pass


class DisjointnessViolation(ParseError):
    pass


class DuplicateEdgeLabel(ParseError):
    pass


# runtime
class ReasonerError(RbgError):
    pass


class StraightnessCapExceeded(ReasonerError):
    def __init__(self, cap: int, state=None):
        self.cap = cap
        self.state = state
        super().__init__(f"straightness cap {cap} exceeded: more than {cap} modifiers without a switch")


class KeeperNondeterminism(ReasonerError):
    def __init__(self, completions, state=None):
        self.completions = completions
        self.state = state
        super().__init__(f"keeper has {len(completions)} distinct completions")


class IllegalMove(ReasonerError):
    pass


class UnknownIndex(RbgError):
    pass


class BoundExceeded(RbgError):
    pass
