"""Multi-dimensional integer piecewise-affine energy automata.

Each transition carries one integer piecewise-affine function per
dimension and updates the energy vector componentwise.  Reachability of a
control state is decided by backward coverability: the set of global states
that can reach an accepting state is upward closed under the componentwise
order, and is represented by its finite set of minimal elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .automaton import AutomatonError, EnergyAutomaton
from .funcalg import BOT, INF, Affine, EnergyFunction
from .vmod import Threshold, act


def check_integral(f: EnergyFunction) -> None:
    """Raise unless ``f`` has integer breakpoints, coefficients and values."""
    for x, v, body in zip(f.xs, f.vs, f.bs):
        if x.denominator != 1:
            raise AutomatonError(f"non-integer breakpoint {x}")
        if v == INF or (v != BOT and v.denominator != 1):
            raise AutomatonError(f"non-integer value {v} at x={x}")
        if body == "inf":
            raise AutomatonError("infinite pieces are not integer functions")
        if isinstance(body, Affine) and (body.a.denominator != 1 or body.b.denominator != 1):
            raise AutomatonError(f"non-integer coefficients in {body.a}x+{body.b}")


@dataclass(frozen=True)
class MultiDimAutomaton:
    dim: int
    names: tuple
    transitions: tuple  # (source, tuple of EnergyFunction, target)
    initial: int = 0
    accepting: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(str(s) for s in self.names))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "transitions", tuple((s, tuple(fs), t) for s, fs, t in self.transitions))
        if self.dim < 1:
            raise AutomatonError("dimension must be at least 1")
        n = len(self.names)
        for s, fs, t in self.transitions:
            if not (0 <= s < n and 0 <= t < n):
                raise AutomatonError(f"transition {s} -> {t} refers to an unknown state")
            if len(fs) != self.dim:
                raise AutomatonError(f"transition {s} -> {t} has {len(fs)} components, expected {self.dim}")
            for f in fs:
                check_integral(f)

    @property
    def n(self) -> int:
        return len(self.names)

    state = EnergyAutomaton.state
    states = EnergyAutomaton.states

    @classmethod
    def from_1d(cls, a: EnergyAutomaton) -> "MultiDimAutomaton":
        return cls(1, a.names, tuple((s, (f,), t) for s, f, t in a.transitions), a.initial, a.accepting)


def least_natural(f: EnergyFunction, u: int) -> int | None:
    """Least natural ``x`` with ``f(x)`` defined and ``f(x) >= u``."""
    p = act(Threshold(Fraction(max(u, 0))), f)
    if p.t == INF:
        return None
    if p.strict:
        return math.floor(p.t) + 1
    return math.ceil(p.t)


def dominates(a: tuple, b: tuple) -> bool:
    """``a <= b`` componentwise."""
    return all(x <= y for x, y in zip(a, b))


def minimize(elems: Iterable[tuple]) -> frozenset:
    """Minimal elements of a set of ``(state, vector)`` pairs."""
    by_state: dict = {}
    for s, v in sorted(set(elems), key=lambda e: (e[0], sum(e[1]), e[1])):
        kept = by_state.setdefault(s, [])
        if not any(dominates(w, v) for w in kept):
            kept.append(v)
    return frozenset((s, v) for s, vs in by_state.items() for v in vs)


def pred_basis(basis: frozenset, a: MultiDimAutomaton) -> frozenset:
    """Minimal elements of ``basis`` together with its one-step predecessors."""
    new = set(basis)
    for t, u in basis:
        for s, fs, t2 in a.transitions:
            if t2 != t:
                continue
            m = []
            for f, ui in zip(fs, u):
                x = least_natural(f, ui)
                if x is None:
                    break
                m.append(x)
            else:
                new.add((s, tuple(m)))
    return minimize(new)


@dataclass
class CoverResult:
    verdict: bool
    basis: frozenset
    iterations: int
    depth: int | None  # steps of the shortest witness found, on TRUE


def coverable(a: MultiDimAutomaton, s0=None, x0=None, accepting=None) -> CoverResult:
    """Can ``(s0, x0)`` reach an accepting control state?"""
    s0 = a.initial if s0 is None else a.state(s0)
    x0 = tuple(int(x) for x in (x0 if x0 is not None else (0,) * a.dim))
    if len(x0) != a.dim or any(x < 0 for x in x0):
        raise ValueError(f"initial energy must be {a.dim} naturals")
    acc = a.accepting if accepting is None else a.states(accepting)
    zero = (0,) * a.dim
    basis = minimize((f, zero) for f in acc)
    depth = None
    it = 0
    while True:
        if depth is None and any(s == s0 and dominates(v, x0) for s, v in basis):
            depth = it
        nxt = pred_basis(basis, a)
        if nxt == basis:
            break
        basis = nxt
        it += 1
    return CoverResult(depth is not None, basis, it, depth)


def forward_search(a: MultiDimAutomaton, s0, x0, depth: int, accepting=None) -> bool:
    """Bounded explicit search; keeps only maximal energy vectors per state."""
    s0 = a.state(s0)
    acc = a.accepting if accepting is None else a.states(accepting)
    frontier = {s0: [tuple(x0)]}
    for _ in range(depth):
        if any(s in acc for s in frontier):
            return True
        nxt: dict = {}
        for s, vecs in frontier.items():
            for src, fs, t in a.transitions:
                if src != s:
                    continue
                for v in vecs:
                    w = tuple(f(Fraction(x)) for f, x in zip(fs, v))
                    if any(y == BOT for y in w):
                        continue
                    nxt.setdefault(t, []).append(tuple(int(y) for y in w))
        frontier = {}
        for t, vecs in nxt.items():
            kept = []
            for v in sorted(set(vecs), key=lambda v: -sum(v)):
                if not any(dominates(v, w) for w in kept):
                    kept.append(v)
            frontier[t] = kept
        if not frontier:
            return False
    return any(s in acc for s in frontier)
