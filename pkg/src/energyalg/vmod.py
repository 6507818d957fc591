"""Monotone boolean predicates on energies and the action of functions on them.

Every upward-closed predicate on the totally ordered energy domain is a
threshold, so a predicate is stored as ``(t, strict)``: true at ``x`` iff
``x > t`` (strict) or ``x >= t``, and always false at bottom.  The
never-true predicate is ``(INF, strict)``.  Ordering thresholds by the key
``(t, strict)`` makes disjunction a plain ``min``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .funcalg import (
    BOT,
    BOTTOM,
    INF,
    INFTY,
    EnergyFunction,
    ExtValue,
    as_ext,
    format_value,
    op_counts,
)


@dataclass(frozen=True, order=True)
class Threshold:
    t: ExtValue
    strict: bool = False

    def __post_init__(self):
        if self.t == BOT or (self.t != INF and self.t < 0):
            raise ValueError(f"bad threshold {self.t}")

    def __call__(self, x) -> bool:
        return eval_pred(self, x)

    def is_never(self) -> bool:
        return self.t == INF and self.strict

    def __or__(self, other: Threshold) -> Threshold:
        return join_pred(self, other)

    def __repr__(self):
        if self.is_never():
            return "NEVER"
        return f"FROM({format_value(self.t)}, {'>' if self.strict else '>='})"


NEVER = Threshold(INF, True)
ALWAYS = Threshold(Fraction(0), False)  # true for every x other than bottom


def from_threshold(t, strict: bool = False) -> Threshold:
    return Threshold(as_ext(t), strict)


def eval_pred(u: Threshold, x) -> bool:
    x = as_ext(x)
    if x == BOT:
        return False
    return x > u.t if u.strict else x >= u.t


def join_pred(u: Threshold, v: Threshold) -> Threshold:
    """Pointwise disjunction."""
    op_counts["join_pred"] += 1
    return u if u <= v else v


def omega(f: EnergyFunction) -> Threshold:
    """The predicate true exactly at the ``x != bot`` with ``f(x) >= x``.

    At infinity this holds for every function other than constant bottom,
    so the result is never :data:`NEVER` unless ``f`` is bottom.
    """
    op_counts["omega"] += 1
    n = len(f.xs)
    for i in range(n):
        x, v, body = f.xs[i], f.vs[i], f.bs[i]
        if v != BOT and v >= x:
            return Threshold(x, False)
        if body == BOTTOM:
            continue
        if body == INFTY:
            return Threshold(x, True)
        hi = f.xs[i + 1] if i + 1 < n else INF
        if body.a == 1:
            if body.b >= 0:
                return Threshold(x, True)
            continue
        c = body.b / (1 - body.a)  # f(c) == c; f - id increases through c
        if c <= x:
            return Threshold(x, True)
        if hi == INF or c < hi:
            return Threshold(c, False)
    return NEVER if f.is_bot() else Threshold(INF, False)


def act(u: Threshold, f: EnergyFunction) -> Threshold:
    """``u`` after ``f``: the predicate ``x -> u(f(x))``."""
    op_counts["act"] += 1
    if u.is_never() or f.is_bot():
        return NEVER
    t, strict = u.t, u.strict
    n = len(f.xs)
    for i in range(n):
        x, v, body = f.xs[i], f.vs[i], f.bs[i]
        if v != BOT and (v > t if strict else v >= t):
            return Threshold(x, False)
        if body == BOTTOM:
            continue
        if body == INFTY:
            return Threshold(x, True)
        if t == INF:
            continue
        hi = f.xs[i + 1] if i + 1 < n else INF
        c = (t - body.b) / body.a  # f(c) == t
        if c <= x:
            return Threshold(x, True)
        if hi == INF or c < hi:
            return Threshold(c, strict)
    return Threshold(INF, False)


def to_json(u: Threshold) -> dict:
    if u.is_never():
        return {"kind": "never"}
    return {"kind": "from", "t": format_value(u.t), "strict": u.strict}


def from_json(d: dict) -> Threshold:
    if d["kind"] == "never":
        return NEVER
    if d["kind"] != "from":
        raise ValueError(f"unknown predicate kind {d['kind']!r}")
    t = as_ext(d["t"])
    return NEVER if (t == INF and d.get("strict")) else Threshold(t, bool(d.get("strict", False)))
