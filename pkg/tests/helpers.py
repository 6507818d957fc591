"""Random generators and brute-force oracles shared by the test modules."""

from __future__ import annotations

import pathlib
import random
from fractions import Fraction

from hypothesis import strategies as st

from energyalg.automaton import EnergyAutomaton
from energyalg.funcalg import BOT, BOTTOM, INF, INFTY, Affine, bbot, from_segments, integer_update
from energyalg.matrixalg import eye, mat_mul
from energyalg.multidim import MultiDimAutomaton

DATA = pathlib.Path(__file__).parent / "data"
ACCEPTANCE: dict[int, str] = {}  # criterion -> PASS/FAIL line

SLOPES = [Fraction(1)] * 4 + [Fraction(3, 2), Fraction(2), Fraction(3)]


def rat(rng: random.Random, lo, hi, den: int = 8) -> Fraction:
    q = rng.randint(1, den)
    return Fraction(rng.randint(int(lo * q), int(hi * q)), q)


def gen_function(rng: random.Random, max_pieces: int = 3, den: int = 8, span: int = 6, allow_inf: bool = True):
    """A random valid function with at most ``max_pieces`` open segments."""
    r = rng.random()
    if r < 0.04:
        return from_segments([0], [BOT], [BOTTOM])
    if r < 0.07 and allow_inf:
        return from_segments([0], [INF], [INFTY])
    k = rng.randint(1, max_pieces)
    cuts = sorted({rat(rng, 0, span, den) for _ in range(k - 1)} - {0})
    xs = [Fraction(0)] + cuts
    ends = xs[1:] + [None]
    vs, bs = [], []
    left = BOT  # left limit of f at the current breakpoint
    for x, nxt in zip(xs, ends):
        if left == INF:
            vs.append(INF)
            bs.append(INFTY)
            continue
        if left == BOT:
            p = rng.random()
            v = BOT if p < 0.5 else (INF if p < 0.55 and allow_inf else rat(rng, 0, 4, den))
        else:
            v = left if rng.random() < 0.6 else left + rat(rng, 0, 3, den)
            if allow_inf and rng.random() < 0.05:
                v = INF
        vs.append(v)
        if v == INF:
            bs.append(INFTY)
            left = INF
            continue
        if v == BOT and nxt is not None and rng.random() < 0.4:
            bs.append(BOTTOM)
            left = BOT
            continue
        if allow_inf and rng.random() < 0.1:
            bs.append(INFTY)
            left = INF
            continue
        base = Fraction(0) if v == BOT else v
        start = base if rng.random() < 0.6 else base + rat(rng, 0, 2, den)
        if v == BOT:
            start = rat(rng, 0, 4, den)
        a = rng.choice(SLOPES)
        body = Affine(a, start - a * x)
        bs.append(body)
        left = body.a * nxt + body.b if nxt is not None else None
    return from_segments(xs, vs, bs)


def gen_int_function(rng: random.Random, max_pieces: int = 2, span: int = 4):
    """Integer data, no infinite values: a valid multi-dimensional label."""
    k = rng.randint(1, max_pieces)
    xs = [Fraction(0)] + sorted({Fraction(rng.randint(1, span)) for _ in range(k - 1)})
    ends = xs[1:] + [None]
    vs, bs = [], []
    left = BOT
    for x, nxt in zip(xs, ends):
        if left == BOT:
            v = BOT if rng.random() < 0.5 else Fraction(rng.randint(0, 3))
        else:
            v = left + (0 if rng.random() < 0.7 else rng.randint(0, 2))
        vs.append(v)
        if v == BOT and nxt is not None and rng.random() < 0.4:
            bs.append(BOTTOM)
            continue
        base = Fraction(0) if v == BOT else v
        start = base + (0 if rng.random() < 0.7 else rng.randint(0, 2))
        if v == BOT:
            start = Fraction(rng.randint(0, 3))
        a = Fraction(rng.choice([1, 1, 1, 2]))
        body = Affine(a, start - a * x)
        bs.append(body)
        left = body.a * nxt + body.b if nxt is not None else None
    return from_segments(xs, vs, bs)


def gen_automaton(rng: random.Random, max_n: int = 5, max_pieces: int = 3, den: int = 8, edges=None):
    n = rng.randint(1, max_n)
    m = rng.randint(0, 2 * n) if edges is None else edges
    trans = tuple((rng.randrange(n), gen_function(rng, max_pieces, den), rng.randrange(n)) for _ in range(m))
    acc = frozenset(s for s in range(n) if rng.random() < 0.4)
    return EnergyAutomaton(tuple(str(i + 1) for i in range(n)), trans, rng.randrange(n), acc)


def gen_md_automaton(rng: random.Random, dim: int = 2, max_n: int = 3):
    n = rng.randint(1, max_n)
    m = rng.randint(1, 2 * n + 1)
    trans = []
    for _ in range(m):
        fs = []
        for _ in range(dim):
            if rng.random() < 0.6:
                fs.append(integer_update(rng.randint(-2, 2)))
            else:
                fs.append(gen_int_function(rng))
        trans.append((rng.randrange(n), tuple(fs), rng.randrange(n)))
    others = range(1, n) if n > 1 else range(n)
    acc = frozenset(s for s in others if rng.random() < 0.4) or frozenset({rng.choice(others)})
    return MultiDimAutomaton(dim, tuple(f"q{i}" for i in range(n)), tuple(trans), 0, acc)


seeds = st.integers(min_value=0, max_value=2**32 - 1)
functions = seeds.map(lambda s: gen_function(random.Random(s)))
finite_functions = seeds.map(lambda s: gen_function(random.Random(s), allow_inf=False))
energies = st.one_of(
    st.fractions(min_value=0, max_value=10, max_denominator=16),
    st.integers(0, 12).map(Fraction),
)


def grid(*fs, extra=()) -> list[Fraction]:
    """Breakpoints of all ``fs`` with neighbours and midpoints."""
    pts = {Fraction(0)}
    for f in fs:
        pts.update(f.xs)
    pts.update(Fraction(e) for e in extra)
    base = sorted(pts)
    out = set(base)
    for x in base:
        out.update({x + 1, x + Fraction(1, 97), x + Fraction(1, 3)})
        if x > 0:
            out.update({x - Fraction(1, 97), x - 1 if x >= 1 else x / 2})
    for a, b in zip(base, base[1:]):
        out.add((a + b) / 2)
    out.update({base[-1] + 10, base[-1] * 4 + 100, Fraction(10**6)})
    return sorted(x for x in out if x >= 0)


def random_matrix(rng, n, density=0.4, **kw):
    return tuple(
        tuple(gen_function(rng, **kw) if rng.random() < density else bbot() for _ in range(n)) for _ in range(n)
    )


def powers(m, k):
    n = len(m)
    out = [eye(n)]
    for _ in range(k):
        out.append(mat_mul(m, out[-1]))
    return out


def sup_paths(m, pw, i, j, x):
    """``sup_n M^n[i][j](x)``: simple paths give the finite candidates; a
    reachable gaining cycle whose exit reaches ``i`` makes it unbounded."""
    n = len(m)
    best = max(pw[k][i][j](x) for k in range(n))
    for p in range(n):
        exits = any(not pw[b][i][p].is_bot() for b in range(n))
        if not exits:
            continue
        for a in range(n):
            y = pw[a][p][j](x)
            if y == BOT:
                continue
            if y == INF or any(pw[c][p][p](y) > y for c in range(1, n + 1)):
                return INF
    return best


__all__ = [
    "ACCEPTANCE",
    "BOT",
    "DATA",
    "INF",
    "energies",
    "finite_functions",
    "functions",
    "gen_automaton",
    "gen_function",
    "gen_int_function",
    "gen_md_automaton",
    "grid",
    "powers",
    "random_matrix",
    "rat",
    "seeds",
    "sup_paths",
]
