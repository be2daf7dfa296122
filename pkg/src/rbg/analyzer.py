"""Static checks: strong straightness and properness diagnostics.

Strong straightness bounds the number of modifiers between two switches using
only the rules text. It is computed bottom-up with four values per node: the
most modifiers in a switch-free suffix, prefix of the application language,
factor of the application language, and whole word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from .model import Action, Concat, Pattern, Star, Sum, Switch, is_modifier, iter_actions

_BOT, _FIN, _INF = 0, 1, 2


@dataclass(frozen=True, order=False)
class StraightValue:
    """An element of N ∪ {⊥, ∞} with ⊥ < n < ∞."""

    tag: int
    n: int = 0

    @classmethod
    def finite(cls, n: int) -> "StraightValue":
        return cls(_FIN, n)

    @property
    def is_finite(self) -> bool:
        return self.tag == _FIN

    @property
    def is_bottom(self) -> bool:
        return self.tag == _BOT

    @property
    def is_infinite(self) -> bool:
        return self.tag == _INF

    @property
    def value(self) -> int:
        if self.tag != _FIN:
            raise ValueError(f"{self} has no finite value")
        return self.n

    def _rank(self):
        return (self.tag, self.n if self.tag == _FIN else 0)

    def __lt__(self, other):
        return self._rank() < other._rank()

    def __le__(self, other):
        return self._rank() <= other._rank()

    def __gt__(self, other):
        return self._rank() > other._rank()

    def __ge__(self, other):
        return self._rank() >= other._rank()

    def __add__(self, other: "StraightValue") -> "StraightValue":
        if self.tag == _BOT or other.tag == _BOT:
            return BOTTOM
        if self.tag == _INF or other.tag == _INF:
            return INFINITE
        return StraightValue(_FIN, self.n + other.n)

    def __str__(self):
        return {_BOT: "⊥", _INF: "∞"}.get(self.tag, str(self.n))

    def __repr__(self):
        return f"StraightValue({self})"


BOTTOM = StraightValue(_BOT)
INFINITE = StraightValue(_INF)
ZERO = StraightValue.finite(0)
ONE = StraightValue.finite(1)


def vmax(*values: StraightValue) -> StraightValue:
    return max(values, key=StraightValue._rank)


@dataclass(frozen=True)
class StraightQuad:
    msuff: StraightValue
    mpref: StraightValue
    mfact: StraightValue
    mword: StraightValue

    def is_monotone(self) -> bool:
        return self.mword <= self.mpref <= self.mfact and self.mword <= self.msuff <= self.mfact


class _Counter:
    def __init__(self):
        self.visits = 0


def straight_quad(expr, counter: Optional[_Counter] = None) -> StraightQuad:
    """The four values for ``expr``; pattern bodies are included in the traversal."""
    if counter is not None:
        counter.visits += 1
    if isinstance(expr, Action):
        spec = expr.spec
        if isinstance(spec, Switch):
            return StraightQuad(ZERO, ZERO, ZERO, BOTTOM)
        if is_modifier(spec):
            return StraightQuad(ONE, ONE, ONE, ONE)
        if isinstance(spec, Pattern):
            inner = straight_quad(spec.body, counter)
            return StraightQuad(ZERO, inner.mpref, inner.mpref, ZERO)
        return StraightQuad(ZERO, ZERO, ZERO, ZERO)
    if isinstance(expr, Sum):
        quads = [straight_quad(c, counter) for c in expr.children]
        return StraightQuad(
            vmax(*(q.msuff for q in quads)), vmax(*(q.mpref for q in quads)),
            vmax(*(q.mfact for q in quads)), vmax(*(q.mword for q in quads)))
    if isinstance(expr, Concat):
        acc = straight_quad(expr.children[0], counter)
        for c in expr.children[1:]:
            acc = concat_quads(acc, straight_quad(c, counter))
        return acc
    if isinstance(expr, Star):
        return star_quad(straight_quad(expr.child, counter))
    raise TypeError(f"not a rules expression: {expr!r}")


def concat_quads(a: StraightQuad, b: StraightQuad) -> StraightQuad:
    return StraightQuad(
        vmax(a.msuff + b.mword, b.msuff),
        vmax(a.mpref, a.mword + b.mpref),
        vmax(a.mfact, a.msuff + b.mpref, b.mfact),
        a.mword + b.mword,
    )


def star_quad(q: StraightQuad) -> StraightQuad:
    if q.mword.is_infinite or (q.mword.is_finite and q.mword.n > 0):
        return StraightQuad(INFINITE, INFINITE, INFINITE, INFINITE)
    return StraightQuad(q.msuff, q.mpref, vmax(q.msuff + q.mpref, q.mfact), ZERO)


def strong_straightness(desc_or_expr) -> StraightValue:
    rules = getattr(desc_or_expr, "rules", desc_or_expr)
    return straight_quad(rules).mfact


# -------------------------------------------------------------- diagnostics

@dataclass(frozen=True)
class Diagnostic:
    level: str       # ERROR, WARNING or INFO
    code: str
    message: str
    span: Optional[object] = None

    def __str__(self):
        where = f" ({self.span.line}:{self.span.column})" if self.span is not None else ""
        return f"{self.level} {self.code}: {self.message}{where}"


def validate(desc, default_cap: int = 1024) -> List[Diagnostic]:
    out: List[Diagnostic] = []
    for a in iter_actions(desc.rules):
        if isinstance(a.spec, Pattern):
            for inner in iter_actions(a.spec.body):
                if isinstance(inner.spec, Switch):
                    out.append(Diagnostic("ERROR", "PatternContainsSwitch",
                                          f"switch {inner.spec} inside pattern {a.spec}",
                                          inner.span or a.span))
    if not any(isinstance(a.spec, Switch) for a in iter_actions(desc.rules, into_patterns=False)):
        out.append(Diagnostic("WARNING", "NoSwitchInRules", "the rules contain no switch; no move is possible"))
    strong = strong_straightness(desc)
    if strong.is_infinite:
        out.append(Diagnostic("WARNING", "InfiniteStrongStraightness",
                              "strong straightness is unbounded; the game may still be proper, "
                              f"set a runtime cap (default {default_cap})"))
        cap = default_cap
    elif strong.is_bottom:
        cap = 0
    else:
        cap = strong.value
    out.append(Diagnostic("INFO", "StrongStraightness", f"strong straightness {strong}"))
    out.append(Diagnostic("INFO", "RecommendedCap", f"recommended runtime cap {cap}"))
    return out


def has_errors(diags: List[Diagnostic]) -> bool:
    return any(d.level == "ERROR" for d in diags)
