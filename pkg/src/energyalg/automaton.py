"""Energy automata and the symbolic reachability / Büchi procedures."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .funcalg import BOT, EnergyFunction, ExtValue, as_ext, bbot, identity, join
from .matrixalg import Matrix, omega_k_matrix, permute, plus_fw
from .vmod import NEVER, Threshold, eval_pred


class AutomatonError(ValueError):
    pass


@dataclass(frozen=True)
class EnergyAutomaton:
    """States are indices ``0..n-1``; ``names`` gives their labels."""

    names: tuple
    transitions: tuple  # (source, EnergyFunction, target)
    initial: int = 0
    accepting: frozenset = frozenset()

    def __post_init__(self):
        n = len(self.names)
        object.__setattr__(self, "names", tuple(str(s) for s in self.names))
        object.__setattr__(self, "transitions", tuple((int(s), f, int(t)) for s, f, t in self.transitions))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        if len(set(self.names)) != n:
            raise AutomatonError("duplicate state names")
        for s, f, t in self.transitions:
            if not (0 <= s < n and 0 <= t < n):
                raise AutomatonError(f"transition {s} -> {t} refers to an unknown state")
            if not isinstance(f, EnergyFunction):
                raise AutomatonError(f"transition {s} -> {t} is not labelled by an EnergyFunction")
        if n and not 0 <= self.initial < n:
            raise AutomatonError(f"unknown initial state {self.initial}")
        if any(not 0 <= s < n for s in self.accepting):
            raise AutomatonError("unknown accepting state")

    @property
    def n(self) -> int:
        return len(self.names)

    def state(self, s) -> int:
        """Resolve a state given by name or index."""
        if isinstance(s, str):
            if s in self.names:
                return self.names.index(s)
            raise AutomatonError(f"unknown state {s!r}")
        if isinstance(s, int) and 0 <= s < self.n:
            return s
        raise AutomatonError(f"unknown state {s!r}")

    def states(self, ss: Iterable) -> frozenset:
        return frozenset(self.state(s) for s in ss)


def normalize(a: EnergyAutomaton, accepting: Iterable | None = None) -> tuple[Matrix, list[int]]:
    """Merge parallel transitions by join and fill gaps with bottom.

    Returns the transition matrix (entry ``[i][j]`` labels ``j -> i``, in the
    automaton's own state order) and an ordering of the states that puts the
    accepting ones first; ``permute(T, order)`` gives the reordered matrix.
    """
    n = a.n
    rows = [[None] * n for _ in range(n)]
    for s, f, t in a.transitions:
        rows[t][s] = f if rows[t][s] is None else join(rows[t][s], f)
    b = bbot()
    m = tuple(tuple(b if x is None else x for x in r) for r in rows)
    acc = a.accepting if accepting is None else a.states(accepting)
    order = sorted(acc) + [i for i in range(n) if i not in acc]
    return m, order


@dataclass
class Analysis:
    """Matrices of one automaton, computed once and reused across queries."""

    automaton: EnergyAutomaton
    _matrix: Matrix | None = field(default=None, repr=False)
    _plus: Matrix | None = field(default=None, repr=False)
    _star: Matrix | None = field(default=None, repr=False)
    _omega: dict = field(default_factory=dict, repr=False)
    _reach: dict = field(default_factory=dict, repr=False)

    @property
    def matrix(self) -> Matrix:
        if self._matrix is None:
            self._matrix, _ = normalize(self.automaton)
        return self._matrix

    @property
    def plus(self) -> Matrix:
        """``T T*``."""
        if self._plus is None:
            self._plus = plus_fw(self.matrix)
        return self._plus

    @property
    def star(self) -> Matrix:
        """``T* = Id | T T*``."""
        if self._star is None:
            e = identity()
            self._star = tuple(
                tuple(join(e, x) if i == j else x for j, x in enumerate(r)) for i, r in enumerate(self.plus)
            )
        return self._star

    def omega_k(self, accepting: frozenset) -> tuple[tuple, list[int]]:
        """``T^{omega_k}`` for the accepting set, with the state order used."""
        key = frozenset(accepting)
        if key not in self._omega:
            order = sorted(key) + [i for i in range(self.automaton.n) if i not in key]
            self._omega[key] = (omega_k_matrix(permute(self.matrix, order), len(key)), order)
        return self._omega[key]

    # -- queries ------------------------------------------------------------

    def _resolve(self, s0, accepting) -> tuple[int, frozenset]:
        a = self.automaton
        s0 = a.initial if s0 is None else a.state(s0)
        acc = a.accepting if accepting is None else a.states(accepting)
        return s0, acc

    def reach_value(self, s0=None, accepting=None) -> EnergyFunction:
        """``F^T T* I^{s0}``: best energy on arrival in an accepting state."""
        key = self._resolve(s0, accepting)
        if key not in self._reach:
            s0, acc = key
            acc_fn = bbot()
            for i in sorted(acc):
                acc_fn = join(acc_fn, self.star[i][s0])
            self._reach[key] = acc_fn
        return self._reach[key]

    def reach(self, x0, s0=None, accepting=None) -> bool:
        x0 = _energy(x0)
        return self.reach_value(s0, accepting)(x0) != BOT

    def buchi_cycle(self, x0, s0=None, accepting=None) -> tuple[bool, int | None]:
        """Accepting ``j`` reachable with energy ``x`` whose best non-empty
        cycle returns at least ``x``.  Returns ``(verdict, j)``."""
        x0 = _energy(x0)
        s0, acc = self._resolve(s0, accepting)
        for j in sorted(acc):
            x = self.star[j][s0](x0)
            if x != BOT and self.plus[j][j](x) >= x:
                return True, j
        return False, None

    def buchi_omega(self, x0, s0=None, accepting=None) -> bool:
        x0 = _energy(x0)
        s0, acc = self._resolve(s0, accepting)
        if not acc:
            return False
        vec, order = self.omega_k(acc)
        return eval_pred(vec[order.index(s0)], x0)

    def buchi_predicate(self, s0=None, accepting=None) -> Threshold:
        s0, acc = self._resolve(s0, accepting)
        if not acc:
            return NEVER
        vec, order = self.omega_k(acc)
        return vec[order.index(s0)]


def _energy(x0) -> ExtValue:
    x0 = as_ext(x0)
    if not isinstance(x0, Fraction) or x0 < 0:
        raise ValueError(f"initial energy must be a non-negative rational, got {x0}")
    return x0


def reach(a: EnergyAutomaton, s0, accepting: Sequence, x0) -> bool:
    return Analysis(a).reach(x0, s0, accepting)


def buchi_via_cycle(a: EnergyAutomaton, s0, accepting: Sequence, x0) -> tuple[bool, int | None]:
    return Analysis(a).buchi_cycle(x0, s0, accepting)


def buchi_via_omega(a: EnergyAutomaton, s0, accepting: Sequence, x0) -> bool:
    return Analysis(a).buchi_omega(x0, s0, accepting)
