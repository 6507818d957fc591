"""Text format for energy functions and automata.

A function is a comma-separated list of clauses ``expr | guard``::

    expr  := [RAT] x [(+|-) RAT] | RAT | inf | bot
    guard := x==RAT | x>=RAT | x>RAT
    RAT   := [+|-] digits [/ digits]

A ``x>=c`` or ``x>c`` clause starts a piece that runs up to the next clause;
``x==c`` gives the value at ``c`` alone and must be followed by ``x>c``.  The
function is bottom below its first clause.

An automaton file has header lines ``states:``, ``initial:``, ``accepting:``
and optionally ``dim:``, then one ``edge SRC -> DST : func(;func)*`` line per
transition.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .automaton import AutomatonError, EnergyAutomaton
from .funcalg import (
    BOT,
    BOTTOM,
    INF,
    INFTY,
    Affine,
    EnergyFunction,
    EnergyFunctionError,
    format_value,
    from_pieces,
)
from .multidim import MultiDimAutomaton


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = "" if line is None else f"line {line}" + ("" if col is None else f", column {col}") + ": "
        super().__init__(where + message)
        self.line, self.col = line, col


_RAT = r"[+-]?\d+(?:/\d+)?"
_AFFINE = re.compile(r"^(?P<a>[+-]?(?:\d+(?:/\d+)?)?)x(?P<b>[+-]\d+(?:/\d+)?)?$")
_CONST = re.compile(rf"^{_RAT}$")
_GUARD = re.compile(rf"^x(?P<op>==|>=|>)(?P<c>{_RAT})$")
_ID = r"[A-Za-z0-9_.']+"


def _rat(s: str) -> Fraction:
    return Fraction(s)


def _expr(text: str):
    """Parse an expression into a body-like value: Affine, INFTY, BOTTOM or a
    constant Fraction."""
    s = re.sub(r"\s+", "", text)
    if "." in s:
        raise ParseError(f"decimal literal in {text.strip()!r}; write rationals as p/q")
    if s == "inf":
        return INFTY
    if s == "bot":
        return BOTTOM
    m = _AFFINE.match(s)
    if m:
        a = Fraction({"": 1, "+": 1, "-": -1}[m["a"]]) if m["a"] in ("", "+", "-") else _rat(m["a"])
        b = _rat(m["b"]) if m["b"] else Fraction(0)
        return Affine(a, b)
    if _CONST.match(s):
        return _rat(s)
    raise ParseError(f"cannot parse expression {text.strip()!r}")


def _guard(text: str) -> tuple[str, Fraction]:
    s = re.sub(r"\s+", "", text)
    if "." in s:
        raise ParseError(f"decimal literal in guard {text.strip()!r}")
    m = _GUARD.match(s)
    if not m:
        raise ParseError(f"cannot parse guard {text.strip()!r}")
    c = _rat(m["c"])
    if c < 0:
        raise ParseError(f"guard bound {c} is negative")
    return m["op"], c


def parse_function(text: str) -> EnergyFunction:
    """Parse one function; raises :class:`ParseError` naming the clause."""
    clauses = []
    for idx, raw in enumerate(text.split(",")):
        if "|" not in raw:
            raise ParseError(f"clause {idx + 1} {raw.strip()!r} has no guard")
        e, g = raw.split("|", 1)
        try:
            clauses.append((_guard(g), _expr(e), idx + 1, raw.strip()))
        except ParseError as err:
            raise ParseError(f"clause {idx + 1}: {err}") from None
    if not clauses:
        raise ParseError("empty function")
    clauses.sort(key=lambda c: (c[0][1], c[0][0] == ">"))
    pieces, points = [], {}
    for k, ((op, c), expr, idx, raw) in enumerate(clauses):
        nxt = clauses[k + 1] if k + 1 < len(clauses) else None
        if nxt and nxt[0][1] == c and (nxt[0][0] == ">") == (op == ">"):
            raise ParseError(f"clause {nxt[2]} {nxt[3]!r} overlaps clause {idx} {raw!r}")
        if op == "==":
            if nxt is None or nxt[0] != (">", c):
                raise ParseError(f"clause {idx} {raw!r}: a point clause must be followed by 'x>{c}'")
            if isinstance(expr, Affine):
                v = expr.a * c + expr.b
            elif expr == INFTY:
                v = INF
            elif expr == BOTTOM:
                v = BOT
            else:
                v = expr
            if v != INF and v != BOT and v < 0:
                raise ParseError(f"clause {idx} {raw!r}: negative value {v}")
            points[c] = v
            continue
        if op == ">=" and nxt is not None and nxt[0][1] == c:
            raise ParseError(f"clause {nxt[2]} {nxt[3]!r} overlaps clause {idx} {raw!r}")
        if isinstance(expr, Fraction):
            raise ParseError(f"clause {idx} {raw!r}: constant on a range has slope 0 < 1")
        if isinstance(expr, Affine) and expr.a < 1:
            raise ParseError(f"clause {idx} {raw!r}: slope {expr.a} < 1")
        pieces.append((c, op == ">=", expr))
    try:
        return from_pieces(pieces, points)
    except EnergyFunctionError as err:
        raise ParseError(f"invalid energy function: {err}") from None


def _format_expr(body) -> str:
    if body == INFTY:
        return "inf"
    if body == BOTTOM:
        return "bot"
    a, b = body
    s = "x" if a == 1 else f"{a}x"
    if b > 0:
        s += f"+{b}"
    elif b < 0:
        s += f"-{-b}"
    return s


def format_function(f: EnergyFunction) -> str:
    """Canonical text; ``parse_function(format_function(f)) == f``."""
    if f.is_bot():
        return "bot | x>=0"
    points = f.points()
    out = []
    for lower, inc, body in f.pieces():
        if lower in points:
            out.append(f"{format_value(points[lower])} | x=={lower}")
        out.append(f"{_format_expr(body)} | x{'>=' if inc else '>'}{lower}")
    return ", ".join(out)


# ---------------------------------------------------------------------------
# automaton files

_EDGE = re.compile(rf"^edge\s+(?P<src>{_ID})\s*->\s*(?P<dst>{_ID})\s*:(?P<body>.*)$")
_HEADER = re.compile(r"^(?P<key>states|initial|accepting|dim)\s*:(?P<val>.*)$")


def _ids(text: str, line: int, col: int) -> list[str]:
    items = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    for t in items:
        if not re.fullmatch(_ID, t):
            raise ParseError(f"bad state name {t!r}", line, col)
    return items


def parse_automaton(text: str):
    """Parse an automaton file into an EnergyAutomaton or MultiDimAutomaton."""
    header: dict = {}
    edges = []  # (src, dst, components, line, col)
    mentions = []  # state ids in order of appearance
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        col = len(line) - len(line.lstrip()) + 1
        m = _HEADER.match(stripped)
        if m:
            key, val = m["key"], m["val"]
            vcol = col + m.start("val")
            if key in header:
                raise ParseError(f"duplicate '{key}:' header", lineno, col)
            if key == "dim":
                if not val.strip().isdigit() or int(val) < 1:
                    raise ParseError("dim must be a positive integer", lineno, vcol)
                header[key] = int(val)
            elif key == "states":
                v = val.strip()
                header[key] = int(v) if v.isdigit() else _ids(v, lineno, vcol)
            elif key == "initial":
                ids = _ids(val, lineno, vcol)
                if len(ids) != 1:
                    raise ParseError("exactly one initial state expected", lineno, vcol)
                header[key] = (ids[0], lineno, vcol)
                mentions.append(ids[0])
            else:
                ids = _ids(val, lineno, vcol)
                header[key] = (ids, lineno, vcol)
                mentions.extend(ids)
            continue
        m = _EDGE.match(stripped)
        if m:
            comps = m["body"].split(";")
            edges.append((m["src"], m["dst"], comps, lineno, col + m.start("body")))
            mentions.extend([m["src"], m["dst"]])
            continue
        raise ParseError(f"unrecognised line {stripped!r}", lineno, col)

    if "states" not in header:
        raise ParseError("missing 'states:' header")
    if "initial" not in header:
        raise ParseError("missing 'initial:' header")
    names = _state_names(header["states"], mentions)
    index = {s: i for i, s in enumerate(names)}

    def resolve(s, line, col):
        if s not in index:
            raise ParseError(f"unknown state {s!r}", line, col)
        return index[s]

    initial = resolve(*header["initial"])
    acc_ids, aline, acol = header.get("accepting", ([], None, None))
    accepting = frozenset(resolve(s, aline, acol) for s in acc_ids)
    dim = header.get("dim")
    transitions = []
    for k, (src, dst, comps, line, col) in enumerate(edges, 1):
        s, t = resolve(src, line, col), resolve(dst, line, col)
        if dim is None and len(comps) != 1:
            raise ParseError(f"edge {k} ({src} -> {dst}): ';' needs a 'dim:' header", line, col)
        if dim is not None and len(comps) != dim:
            raise ParseError(f"edge {k} ({src} -> {dst}): {len(comps)} components, dim is {dim}", line, col)
        fs = []
        for c, comp in enumerate(comps, 1):
            try:
                fs.append(parse_function(comp))
            except ParseError as err:
                which = f", component {c}" if dim is not None else ""
                raise ParseError(f"edge {k} ({src} -> {dst}){which}: {err}", line, col) from None
        transitions.append((s, tuple(fs) if dim is not None else fs[0], t))
    try:
        if dim is None:
            return EnergyAutomaton(tuple(names), tuple(transitions), initial, accepting)
        return MultiDimAutomaton(dim, tuple(names), tuple(transitions), initial, accepting)
    except AutomatonError as err:
        raise ParseError(str(err)) from None


def _state_names(header, mentions: list[str]) -> list[str]:
    if isinstance(header, list):
        if len(set(header)) != len(header):
            raise ParseError("duplicate state names in 'states:'")
        return header
    n = header
    numerals = [str(i) for i in range(1, n + 1)]
    if all(m in numerals for m in mentions):
        return numerals
    if all(m.isdigit() for m in mentions):
        zero_based = [str(i) for i in range(n)]
        if all(m in zero_based for m in mentions):
            return zero_based
        bad = next(m for m in mentions if m not in numerals)
        raise ParseError(f"unknown state {bad!r} with 'states: {n}'")
    names = list(dict.fromkeys(mentions))
    if len(names) > n:
        raise ParseError(f"{len(names)} distinct states used but 'states: {n}'")
    fresh = (s for s in numerals if s not in names)
    return names + [next(fresh) for _ in range(n - len(names))]


def format_automaton(a) -> str:
    """Canonical file text; ``parse_automaton(format_automaton(a)) == a``."""
    names = a.names
    if list(names) == [str(i) for i in range(1, len(names) + 1)]:
        lines = [f"states: {len(names)}"]
    else:
        lines = [f"states: {', '.join(names)}"]
    lines.append(f"initial: {names[a.initial]}")
    lines.append(f"accepting: {', '.join(names[i] for i in sorted(a.accepting))}".rstrip())
    multi = isinstance(a, MultiDimAutomaton)
    if multi:
        lines.append(f"dim: {a.dim}")
    for s, f, t in a.transitions:
        body = "; ".join(format_function(g) for g in f) if multi else format_function(f)
        lines.append(f"edge {names[s]} -> {names[t]} : {body}")
    return "\n".join(lines) + "\n"


