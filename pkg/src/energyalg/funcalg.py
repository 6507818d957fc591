"""Exact piecewise-affine extended energy functions.

An extended energy function maps ``[0, inf]`` plus an extra bottom element
into the same set, sends bottom to bottom, infinity to infinity (unless it
is the constant-bottom function) and satisfies
``f(x2) >= f(x1) + x2 - x1`` whenever ``x1 <= x2``.

Values are exact: finite energies are :class:`fractions.Fraction`, bottom is
``-inf`` and infinity is ``+inf``.  Using the two float infinities as
sentinels keeps the total order ``BOT < q < INF`` native to Python
comparisons; they never take part in arithmetic with finite rationals
except through :func:`body_at`.

A function is stored as its *minimal segmentation*: breakpoints
``0 = x_0 < x_1 < ... < x_k``, the value at every breakpoint, and one body
(bottom, infinity or an affine map ``a*x + b`` with ``a >= 1``) for each open
interval ``(x_i, x_{i+1})`` (the last one is unbounded).  A breakpoint is
kept only if the function is not described by a single body around it, so
two functions are pointwise equal exactly when their segmentations are equal.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from collections import Counter
from fractions import Fraction
from typing import Iterable, NamedTuple, Union

BOT = -math.inf
INF = math.inf

ExtValue = Union[Fraction, float]

# number of algebra operations performed, keyed by operation name
op_counts: Counter = Counter()


def reset_op_counts() -> None:
    op_counts.clear()


class EnergyFunctionError(ValueError):
    """Raised for representations that are not valid energy functions."""

    def __init__(self, message: str, piece: int | None = None):
        super().__init__(message if piece is None else f"piece {piece}: {message}")
        self.piece = piece


def as_ext(x) -> ExtValue:
    """Coerce ``x`` to an extended value (Fraction, BOT or INF)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if x == INF or x == BOT:
            return x
        if math.isnan(x):
            raise ValueError("NaN is not an energy value")
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "∞"):
            return INF
        if s in ("bot", "⊥"):
            return BOT
    return Fraction(x)


def is_finite(x: ExtValue) -> bool:
    return x != INF and x != BOT


def format_value(x: ExtValue) -> str:
    if x == INF:
        return "inf"
    if x == BOT:
        return "bot"
    return str(x)


class Affine(NamedTuple):
    """The body ``x -> a*x + b``."""

    a: Fraction
    b: Fraction

    def __repr__(self):
        return f"Affine({self.a}, {self.b})"


BOTTOM = "bot"
INFTY = "inf"

Body = Union[Affine, str]

ID_BODY = Affine(Fraction(1), Fraction(0))


def body_at(body: Body, x: Fraction) -> ExtValue:
    """Value (or one-sided limit) of ``body`` at the finite point ``x``."""
    if body is BOTTOM or body == BOTTOM:
        return BOT
    if body is INFTY or body == INFTY:
        return INF
    return body.a * x + body.b


def _body_sort_key(body: Body) -> int:
    return 0 if body == BOTTOM else (2 if body == INFTY else 1)


class EnergyFunction:
    """Immutable canonical piecewise-affine extended energy function.

    Build instances with :func:`from_segments`, :func:`from_pieces` or the
    named constructors; the raw constructor trusts its arguments.
    """

    __slots__ = ("xs", "vs", "bs", "_hash")

    def __init__(self, xs: tuple, vs: tuple, bs: tuple):
        self.xs = xs
        self.vs = vs
        self.bs = bs
        self._hash = None

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x) -> ExtValue:
        if not isinstance(x, Fraction):
            x = as_ext(x)
        if x == BOT:
            return BOT
        if x == INF:
            return BOT if self.is_bot() else INF
        if x < 0:
            raise ValueError(f"negative energy {x}")
        i = bisect_right(self.xs, x) - 1
        if self.xs[i] == x:
            return self.vs[i]
        return body_at(self.bs[i], x)

    def is_bot(self) -> bool:
        return len(self.bs) == 1 and self.bs[0] == BOTTOM

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, EnergyFunction):
            return NotImplemented
        return self.xs == other.xs and self.vs == other.vs and self.bs == other.bs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.xs, self.vs, self.bs))
        return self._hash

    def __le__(self, other: EnergyFunction) -> bool:
        return leq(self, other)

    # -- operators ----------------------------------------------------------

    def __or__(self, other: EnergyFunction) -> EnergyFunction:
        return join(self, other)

    def __mul__(self, other: EnergyFunction) -> EnergyFunction:
        """``g * f`` is the composite ``x -> g(f(x))``."""
        return compose(self, other)

    def star(self) -> EnergyFunction:
        return star(self)

    # -- views --------------------------------------------------------------

    @property
    def breakpoints(self) -> tuple:
        return self.xs

    def pieces(self) -> list[tuple[Fraction, bool, Body]]:
        """Pieces ``(lower, lower_included, body)``; leading bottom omitted.

        A piece extends up to the next piece's lower bound, which it includes
        iff the next piece excludes it.  See :meth:`points` for the values at
        breakpoints that neither neighbouring piece describes.
        """
        out = []
        for i, body in enumerate(self.bs):
            if body == BOTTOM:
                continue
            x, v = self.xs[i], self.vs[i]
            out.append((x, v == body_at(body, x), body))
        return out

    def points(self) -> dict[Fraction, ExtValue]:
        """Breakpoint values that differ from both one-sided limits."""
        out = {}
        for i, body in enumerate(self.bs):
            x, v = self.xs[i], self.vs[i]
            left = body_at(self.bs[i - 1], x) if i else BOT
            if v != body_at(body, x) and v != left:
                out[x] = v
        return out

    def lower_bound(self) -> tuple[ExtValue, bool]:
        """``(l_f, included)``: where the function starts being defined."""
        for i, body in enumerate(self.bs):
            if self.vs[i] != BOT:
                return self.xs[i], True
            if body != BOTTOM:
                return self.xs[i], False
        return INF, False

    def __repr__(self):
        from .textio import format_function

        return f"EnergyFunction({format_function(self)!r})"

    def __str__(self):
        from .textio import format_function

        return format_function(self)


# ---------------------------------------------------------------------------
# canonicalisation and validation


def _validate(xs, vs, bs) -> None:
    """Check slopes, non-negativity and the energy inequality.

    ``f(x) - x`` must be non-decreasing over the region where ``f`` is
    defined, and that region must be a final segment of ``[0, inf)``.
    """
    prev_h = BOT  # f(x) - x seen so far (supremum)
    defined = False
    n = len(xs)
    for i in range(n):
        x, v, body = xs[i], vs[i], bs[i]
        if isinstance(body, Affine) and body.a < 1:
            raise EnergyFunctionError(f"slope {body.a} < 1", i)
        if v != BOT and v != INF and v < 0:
            raise EnergyFunctionError(f"negative value {v} at x={x}", i)
        # point x_i
        if v == BOT:
            if defined:
                raise EnergyFunctionError(f"undefined at x={x} after being defined", i)
        else:
            defined = True
            h = v - x if v != INF else INF
            if h < prev_h:
                raise EnergyFunctionError(f"energy inequality violated at x={x}", i)
            prev_h = h
        # open interval after x_i
        if body == BOTTOM:
            if defined:
                raise EnergyFunctionError(f"undefined after x={x} once defined", i)
            continue
        defined = True
        if body == INFTY:
            prev_h = INF
            continue
        lim = body.a * x + body.b
        if lim < 0:
            raise EnergyFunctionError(f"negative values just above x={x}", i)
        h = lim - x
        if h < prev_h:
            raise EnergyFunctionError(f"energy inequality violated just above x={x}", i)
        if i + 1 < n:
            prev_h = body.a * xs[i + 1] + body.b - xs[i + 1]
        else:
            prev_h = h


def _canonical(xs, vs, bs, check: bool = True) -> EnergyFunction:
    """Drop redundant breakpoints and (optionally) validate."""
    if check:
        _validate(xs, vs, bs)
    cx, cv, cb = [xs[0]], [vs[0]], [bs[0]]
    for i in range(1, len(xs)):
        x, v, body = xs[i], vs[i], bs[i]
        if body == cb[-1] and v == body_at(body, x):
            continue
        cx.append(x)
        cv.append(v)
        cb.append(body)
    return EnergyFunction(tuple(cx), tuple(cv), tuple(cb))


def from_segments(xs: Iterable, vs: Iterable, bs: Iterable) -> EnergyFunction:
    """Build a function from breakpoints, breakpoint values and bodies.

    ``xs`` must start at 0 and be strictly increasing; ``bs[i]`` describes the
    open interval between ``xs[i]`` and ``xs[i+1]``.
    """
    xs = tuple(Fraction(x) for x in xs)
    vs = tuple(as_ext(v) for v in vs)
    bs = tuple(_coerce_body(b) for b in bs)
    if not xs or xs[0] != 0:
        raise EnergyFunctionError("segmentation must start at 0")
    if len(vs) != len(xs) or len(bs) != len(xs):
        raise EnergyFunctionError("segment lists differ in length")
    if any(a >= b for a, b in zip(xs, xs[1:])):
        raise EnergyFunctionError("breakpoints must be strictly increasing")
    return _canonical(xs, vs, bs)


def _coerce_body(b) -> Body:
    if b == BOTTOM or b == INFTY:
        return BOTTOM if b == BOTTOM else INFTY
    a, c = b
    return Affine(Fraction(a), Fraction(c))


def from_pieces(pieces, points=None) -> EnergyFunction:
    """Build a function from ``(lower, lower_included, body)`` pieces.

    Pieces must have strictly increasing lower bounds; the function is bottom
    below the first piece.  ``points`` maps breakpoints to explicit values and
    overrides the pieces there.
    """
    pieces = [(Fraction(lo), bool(inc), _coerce_body(b)) for lo, inc, b in pieces]
    points = {Fraction(x): as_ext(v) for x, v in (points or {}).items()}
    for i, (lo, _, _) in enumerate(pieces):
        if lo < 0:
            raise EnergyFunctionError(f"negative lower bound {lo}", i)
        if i and lo <= pieces[i - 1][0]:
            raise EnergyFunctionError("piece lower bounds must strictly increase", i)
    for x in points:
        if x < 0:
            raise EnergyFunctionError(f"point value at negative x={x}")
    lowers = [lo for lo, _, _ in pieces]
    xs = sorted(set([Fraction(0)] + lowers + list(points)))
    vs, bs = [], []
    for x in xs:
        j = bisect_right(lowers, x) - 1
        # body on the open interval just right of x
        bs.append(pieces[j][2] if j >= 0 else BOTTOM)
        if x in points:
            vs.append(points[x])
            continue
        if j >= 0 and lowers[j] == x and not pieces[j][1]:
            # excluded lower bound: value belongs to the previous piece
            prev = pieces[j - 1][2] if j >= 1 else BOTTOM
            vs.append(body_at(prev, x))
        elif j >= 0:
            vs.append(body_at(pieces[j][2], x))
        else:
            vs.append(BOT)
    return _canonical(tuple(xs), tuple(vs), tuple(bs))


# ---------------------------------------------------------------------------
# constructors

_ZERO = Fraction(0)


def bbot() -> EnergyFunction:
    return EnergyFunction((_ZERO,), (BOT,), (BOTTOM,))


def identity() -> EnergyFunction:
    return EnergyFunction((_ZERO,), (_ZERO,), (ID_BODY,))


def ttop() -> EnergyFunction:
    return EnergyFunction((_ZERO,), (INF,), (INFTY,))


def affine(a, b, lower=0, included: bool = True) -> EnergyFunction:
    """``x -> a*x + b`` on ``x >= lower`` (or ``x > lower``), bottom below."""
    a, b = Fraction(a), Fraction(b)
    if a < 1:
        raise EnergyFunctionError(f"slope {a} < 1")
    return from_pieces([(lower, included, Affine(a, b))])


def integer_update(k: int) -> EnergyFunction:
    """``x -> x + k`` where ``x >= max(0, -k)``, bottom elsewhere."""
    if k != int(k):
        raise ValueError(f"integer update needs an integer, got {k}")
    k = int(k)
    return affine(1, k, max(0, -k), True)


def threshold_function(k: ExtValue, attained: bool) -> EnergyFunction:
    """Identity below ``k``, infinity above; ``k`` itself maps to ``k`` iff
    ``attained``, else to infinity.  These are exactly the stars."""
    k = as_ext(k)
    if k == BOT:
        raise ValueError("threshold must not be bottom")
    if k == INF:
        return identity()
    if k == 0:
        return EnergyFunction((_ZERO,), (_ZERO if attained else INF,), (INFTY,))
    return EnergyFunction((_ZERO, k), (_ZERO, k if attained else INF), (ID_BODY, INFTY))


def g_minus(k) -> EnergyFunction:
    """Identity for ``x < k``, infinity for ``x >= k``."""
    return threshold_function(k, False)


def g_plus(k) -> EnergyFunction:
    """Identity for ``x <= k``, infinity for ``x > k``."""
    return threshold_function(k, True)


# ---------------------------------------------------------------------------
# join


def _max_body(p: Body, q: Body, lo: Fraction, hi: ExtValue):
    """Pointwise maximum of two bodies on the open interval ``(lo, hi)``.

    Returns ``[(start, body)]``; a second entry appears when two affine
    bodies cross strictly inside the interval.
    """
    if p == q or q == BOTTOM or p == INFTY:
        return [(lo, p)]
    if p == BOTTOM or q == INFTY:
        return [(lo, q)]
    da, db = p.a - q.a, p.b - q.b
    if da == 0:
        return [(lo, p if db > 0 else q)]
    c = -db / da  # where p and q meet
    if c <= lo or (hi != INF and c >= hi):
        probe = lo + 1 if hi == INF else (lo + hi) / 2
        return [(lo, p if da * probe + db > 0 else q)]
    # below c the smaller slope wins
    low, high = (q, p) if da > 0 else (p, q)
    return [(lo, low), (c, high)]


def join(f: EnergyFunction, g: EnergyFunction) -> EnergyFunction:
    """Pointwise maximum."""
    op_counts["join"] += 1
    if f.is_bot() or f == g:
        return g
    if g.is_bot():
        return f
    xs = sorted(set(f.xs) | set(g.xs))
    nx, nv, nb = [], [], []
    fi = gi = 0
    for i, x in enumerate(xs):
        while fi + 1 < len(f.xs) and f.xs[fi + 1] <= x:
            fi += 1
        while gi + 1 < len(g.xs) and g.xs[gi + 1] <= x:
            gi += 1
        fx = f.vs[fi] if f.xs[fi] == x else body_at(f.bs[fi], x)
        gx = g.vs[gi] if g.xs[gi] == x else body_at(g.bs[gi], x)
        hi = xs[i + 1] if i + 1 < len(xs) else INF
        parts = _max_body(f.bs[fi], g.bs[gi], x, hi)
        nx.append(x)
        nv.append(fx if fx >= gx else gx)
        nb.append(parts[0][1])
        if len(parts) == 2:
            c, body = parts[1]
            nx.append(c)
            nv.append(body_at(body, c))
            nb.append(body)
    return _canonical(tuple(nx), tuple(nv), tuple(nb), check=False)


# ---------------------------------------------------------------------------
# composition


def _compose_body(outer: Body, inner: Affine) -> Body:
    if outer == BOTTOM or outer == INFTY:
        return outer
    return Affine(outer.a * inner.a, outer.a * inner.b + outer.b)


def _is_shift(f: EnergyFunction):
    """Recognise ``x -> x + k`` on ``[l, inf)``; returns ``(k, l)`` or None."""
    n = len(f.xs)
    body = f.bs[-1]
    if not isinstance(body, Affine) or body.a != 1:
        return None
    l = f.xs[-1]
    if f.vs[-1] != l + body.b:
        return None
    if n == 1 or (n == 2 and f.bs[0] == BOTTOM and f.vs[0] == BOT):
        return body.b, l
    return None


def compose(g: EnergyFunction, f: EnergyFunction) -> EnergyFunction:
    """The composite ``x -> g(f(x))`` (apply ``f`` first)."""
    op_counts["compose"] += 1
    if f.is_bot() or g.is_bot():
        return bbot()
    sf, sg = _is_shift(f), _is_shift(g)
    if sf is not None and sg is not None:
        (kf, lf), (kg, lg) = sf, sg
        lo = max(lf, lg - kf)
        k = kf + kg
        if lo == 0:
            return EnergyFunction((_ZERO,), (k,), (Affine(Fraction(1), k),))
        return EnergyFunction((_ZERO, lo), (BOT, lo + k), (BOTTOM, Affine(Fraction(1), k)))

    gxs = g.xs
    nx, nv, nb = [], [], []
    n = len(f.xs)
    for i in range(n):
        x, v, body = f.xs[i], f.vs[i], f.bs[i]
        nx.append(x)
        nv.append(g(v))
        if not isinstance(body, Affine):
            nb.append(BOTTOM if body == BOTTOM else INFTY)
            continue
        hi = f.xs[i + 1] if i + 1 < n else INF
        ylo = body.a * x + body.b
        yhi = body.a * hi + body.b if hi != INF else INF
        j = bisect_right(gxs, ylo) - 1
        nb.append(_compose_body(g.bs[j], body))
        # cut wherever the image crosses one of g's breakpoints
        j += 1
        while j < len(gxs) and gxs[j] < yhi:
            y = gxs[j]
            c = (y - body.b) / body.a
            nx.append(c)
            nv.append(g.vs[j])
            nb.append(_compose_body(g.bs[j], body))
            j += 1
    return _canonical(tuple(nx), tuple(nv), tuple(nb), check=False)


# ---------------------------------------------------------------------------
# star and the identity crossing


def identity_crossing(f: EnergyFunction) -> tuple[ExtValue, bool]:
    """``(k, attained)`` with ``k = sup{x finite : f(x) <= x}``.

    ``attained`` tells whether ``f(k) <= k``.  If ``f`` stays below the
    identity everywhere the result is ``(INF, True)``; if ``f(0) > 0`` the set
    is empty and ``(0, False)`` is returned, which describes the same star.
    """
    sup, attained = _ZERO, False
    n = len(f.xs)
    for i in range(n):
        x, v, body = f.xs[i], f.vs[i], f.bs[i]
        if v > x:
            return sup, attained
        sup, attained = x, True
        hi = f.xs[i + 1] if i + 1 < n else INF
        if body == INFTY:
            return sup, attained
        if body == BOTTOM or (body.a == 1 and body.b <= 0):
            if hi == INF:
                return INF, True
            sup, attained = hi, False
            continue
        if body.a == 1:  # b > 0: strictly above the identity
            return sup, attained
        c = body.b / (1 - body.a)  # f(c) == c
        if c <= x:
            return sup, attained
        if hi == INF or c < hi:
            return c, True
        sup, attained = hi, False
    return sup, attained


def star(f: EnergyFunction) -> EnergyFunction:
    """``f*(x) = x`` where ``f(x) <= x`` and infinity where ``f(x) > x``."""
    op_counts["star"] += 1
    k, attained = identity_crossing(f)
    return threshold_function(k, attained)


# ---------------------------------------------------------------------------
# order


def equals(f: EnergyFunction, g: EnergyFunction) -> bool:
    return f == g


def leq(f: EnergyFunction, g: EnergyFunction) -> bool:
    """Pointwise order; ``f <= g`` iff ``f | g == g``."""
    return join(f, g) == g


def validate(f: EnergyFunction) -> None:
    """Re-check the invariants of an already built function."""
    _validate(f.xs, f.vs, f.bs)
    if _canonical(f.xs, f.vs, f.bs, check=False) != f or f.xs[0] != 0:
        raise EnergyFunctionError("not in canonical form")


# ---------------------------------------------------------------------------
# JSON


def _rat(x: Fraction) -> str:
    return str(x)


def to_json(f: EnergyFunction) -> dict:
    pieces = []
    for lower, inc, body in f.pieces():
        d = {"lower": _rat(lower), "lowerIncluded": inc}
        if body == INFTY:
            d["kind"] = "inf"
        else:
            d.update(kind="affine", a=_rat(body.a), b=_rat(body.b))
        pieces.append(d)
    points = [{"x": _rat(x), "value": format_value(v)} for x, v in f.points().items()]
    return {"pieces": pieces, "points": points}


def from_json(d: dict) -> EnergyFunction:
    pieces = []
    for p in d.get("pieces", []):
        kind = p.get("kind", "affine")
        if kind == "inf":
            body = INFTY
        elif kind == "bot":
            body = BOTTOM
        elif kind == "affine":
            body = Affine(Fraction(p["a"]), Fraction(p["b"]))
        else:
            raise EnergyFunctionError(f"unknown piece kind {kind!r}")
        pieces.append((Fraction(p["lower"]), bool(p.get("lowerIncluded", True)), body))
    points = {Fraction(q["x"]): as_ext(q["value"]) for q in d.get("points", [])}
    return from_pieces(pieces, points)
