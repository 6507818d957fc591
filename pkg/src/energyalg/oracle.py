"""Explicit value iteration over global states.

This module only evaluates transition labels on concrete energies; it never
uses join, composition or star.  Per state it keeps the largest energy seen
so far, which is enough because a higher energy can replay every move of a
lower one.  Each improvement records the run that produced it.  When such a
run visits the same state twice with strictly more energy the second time,
that loop can be repeated with a gain that never shrinks, so the supremum
there (and at the end of the run) is infinite and the value is promoted to
``INF``.  After ``n`` rounds every further improvement is of that kind, so the
iteration reaches a fixpoint within about ``2n + 1`` rounds; the round cap is
a safety net.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .automaton import EnergyAutomaton, _energy
from .funcalg import BOT, INF, ExtValue, format_value


class Verdict(enum.Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    INCONCLUSIVE = "INCONCLUSIVE"

    def __bool__(self):
        return self is Verdict.TRUE


@dataclass(frozen=True)
class Step:
    """One global state of a recorded run, linked to its predecessor."""

    state: int
    energy: ExtValue
    parent: "Step | None" = None
    pumped: tuple = ()  # states of the gaining loop that justified INF

    def chain(self) -> list["Step"]:
        out, s = [], self
        while s is not None:
            out.append(s)
            s = s.parent
        return out[::-1]


def default_cap(a: EnergyAutomaton) -> int:
    bps = sum(len(f.xs) for _, f, _ in a.transitions)
    return 16 * max(a.n, 1) * (bps + 1)


def _gaining_loop(step: Step):
    """States of a loop in ``step``'s run that ends with more energy than it
    started with, or None."""
    seen = {}
    chain = step.chain()
    for idx, s in enumerate(chain):
        for prev in seen.get(s.state, ()):
            if s.energy > chain[prev].energy:
                return tuple(c.state for c in chain[prev : idx + 1])
        seen.setdefault(s.state, []).append(idx)
    return None


def _iterate(a: EnergyAutomaton, seeds: dict, cap: int, stop=None):
    """Synchronous max-relaxation from ``seeds`` (state -> Step).

    Returns ``(best, verdict)`` where ``verdict`` is None at a fixpoint,
    ``TRUE`` if ``stop(best)`` fired, or ``INCONCLUSIVE`` when the cap hit.
    """
    best: dict[int, Step] = dict(seeds)
    if stop is not None and stop(best):
        return best, Verdict.TRUE
    changed = set(best)
    for _ in range(cap):
        proposals: dict[int, Step] = {}
        for s, f, t in a.transitions:
            if s not in changed:
                continue
            y = f(best[s].energy)
            if y == BOT:
                continue
            cur = proposals.get(t) or best.get(t)
            if cur is None or y > cur.energy:
                proposals[t] = Step(t, y, best[s])
        changed = set()
        for t, step in proposals.items():
            if t in best and step.energy <= best[t].energy:
                continue
            if step.energy != INF:
                loop = _gaining_loop(step)
                if loop is not None:
                    step = Step(t, INF, step.parent, loop)
            best[t] = step
            changed.add(t)
        if stop is not None and stop(best):
            return best, Verdict.TRUE
        if not changed:
            return best, None
    return best, Verdict.INCONCLUSIVE


def iterate_reach(a: EnergyAutomaton, s0, accepting, x0, cap: int | None = None):
    """Decide reachability of ``accepting`` from ``(s0, x0)``.

    Returns ``(verdict, witness)`` where ``witness`` is the recorded run
    (a list of :class:`Step`) on TRUE and None otherwise.
    """
    s0 = a.state(s0)
    acc = a.states(accepting)
    x0 = _energy(x0)
    cap = default_cap(a) if cap is None else cap
    if cap < 1:
        raise ValueError("cap must be at least 1")

    def hit(best):
        return any(j in best for j in acc)

    best, verdict = _iterate(a, {s0: Step(s0, x0)}, cap, hit)
    if verdict is Verdict.TRUE:
        j = min(j for j in acc if j in best)
        return Verdict.TRUE, best[j].chain()
    if verdict is Verdict.INCONCLUSIVE:
        return Verdict.INCONCLUSIVE, None
    return Verdict.FALSE, None


def reachable_values(a: EnergyAutomaton, s0, x0, cap: int | None = None) -> tuple[dict, bool]:
    """Supremum of reachable energies per state (absent = unreachable)."""
    s0 = a.state(s0)
    cap = default_cap(a) if cap is None else cap
    best, verdict = _iterate(a, {s0: Step(s0, _energy(x0))}, cap)
    return {s: st.energy for s, st in best.items()}, verdict is None


def iterate_buchi(a: EnergyAutomaton, s0, accepting, x0, cap: int | None = None):
    """Decide Büchi acceptance numerically.

    For each accepting ``j`` reached with best energy ``v``, explore runs of
    length >= 1 from ``(j, v)``; accept iff one returns to ``j`` with at
    least ``v``.  Returns ``(verdict, j)``.
    """
    s0 = a.state(s0)
    acc = a.states(accepting)
    x0 = _energy(x0)
    cap = default_cap(a) if cap is None else cap
    if cap < 1:
        raise ValueError("cap must be at least 1")
    if not acc:
        return Verdict.FALSE, None
    best, verdict = _iterate(a, {s0: Step(s0, x0)}, cap)
    if verdict is Verdict.INCONCLUSIVE:
        return Verdict.INCONCLUSIVE, None
    inconclusive = False
    for j in sorted(acc):
        if j not in best:
            continue
        v = best[j].energy
        start = Step(j, v)
        seeds = {}
        for s, f, t in a.transitions:
            if s != j:
                continue
            y = f(v)
            if y != BOT and (t not in seeds or y > seeds[t].energy):
                seeds[t] = Step(t, y, start)
        if not seeds:
            continue
        back, verdict = _iterate(a, seeds, cap, lambda b: j in b and b[j].energy >= v)
        if verdict is Verdict.TRUE:
            return Verdict.TRUE, j
        if verdict is Verdict.INCONCLUSIVE:
            inconclusive = True
    return (Verdict.INCONCLUSIVE if inconclusive else Verdict.FALSE), None


def witness_json(a: EnergyAutomaton, run) -> list:
    """``[{"state", "energy"[, "pumped"]}, ...]`` for a recorded run."""
    out = []
    for step in run:
        d = {"state": a.names[step.state], "energy": format_value(step.energy)}
        if step.pumped:
            d["pumped"] = [a.names[s] for s in step.pumped]
        out.append(d)
    return out


def iterate_function(f, x, limit: int = 10_000) -> list:
    """The orbit ``x, f(x), f(f(x)), ...`` until bottom, a repeat or ``limit``."""
    out = [x]
    for _ in range(limit):
        y = f(out[-1])
        out.append(y)
        if y == BOT or y == out[-2] or y == INF:
            break
    return out

