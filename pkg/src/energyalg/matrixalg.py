"""Matrices of energy functions and vectors of threshold predicates.

Entry ``M[i][j]`` is the function on the move from state ``j`` to state
``i`` (composition reads right to left), so a column is "where you came
from".  Predicate vectors are row vectors acted on from the right:
``(v M)[j] = OR_i v[i] o M[i][j]``.
"""

from __future__ import annotations

from typing import Sequence

from .funcalg import EnergyFunction, bbot, compose, identity, join, star
from .vmod import NEVER, Threshold, act, join_pred, omega

Matrix = tuple  # tuple of row tuples of EnergyFunction
Vector = tuple  # tuple of Threshold


class DimensionError(ValueError):
    pass


def matrix(rows: Sequence[Sequence[EnergyFunction]]) -> Matrix:
    m = tuple(tuple(r) for r in rows)
    if any(len(r) != len(m) for r in m):
        raise DimensionError("matrix must be square")
    return m


def zeros(n: int, m: int | None = None) -> Matrix:
    b = bbot()
    return tuple(tuple(b for _ in range(n if m is None else m)) for _ in range(n))


def eye(n: int) -> Matrix:
    b, e = bbot(), identity()
    return tuple(tuple(e if i == j else b for j in range(n)) for i in range(n))


def _dims(a: Matrix) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def mat_join(a: Matrix, b: Matrix) -> Matrix:
    if _dims(a) != _dims(b):
        raise DimensionError(f"cannot join {_dims(a)} and {_dims(b)} matrices")
    return tuple(tuple(join(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    """``(AB)[i][j] = OR_k A[i][k] o B[k][j]`` (rectangular allowed)."""
    (n, k), (k2, m) = _dims(a), _dims(b)
    if k != k2:
        raise DimensionError(f"cannot multiply {n}x{k} by {k2}x{m}")
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = bbot()
            for t in range(k):
                x, y = a[i][t], b[t][j]
                if x.is_bot() or y.is_bot():
                    continue
                acc = join(acc, compose(x, y))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def plus_fw(m: Matrix) -> Matrix:
    """``M M*`` (paths of length >= 1) by Floyd-Warshall elimination.

    Pivot ``k`` routes every pair through ``k`` with the star of the
    current self-loop at ``k``; pivots are processed in order.
    """
    n = len(m)
    cur = [list(r) for r in m]
    for k in range(n):
        loop = star(cur[k][k])
        # left[i] = M[i][k] o loop*, computed once per pivot
        left = [None if cur[i][k].is_bot() else compose(cur[i][k], loop) for i in range(n)]
        row_k = cur[k]
        nxt = []
        for i in range(n):
            li = left[i]
            row = cur[i]
            if li is None:
                nxt.append(list(row))
                continue
            new = []
            for j in range(n):
                kj = row_k[j]
                if kj.is_bot():
                    new.append(row[j])
                else:
                    new.append(join(row[j], compose(li, kj)))
            nxt.append(new)
        cur = nxt
    return tuple(tuple(r) for r in cur)


def star_fw(m: Matrix) -> Matrix:
    """``M* = Id | M M*`` via :func:`plus_fw`."""
    p = plus_fw(m)
    e = identity()
    return tuple(tuple(join(e, x) if i == j else x for j, x in enumerate(r)) for i, r in enumerate(p))


star_matrix = star_fw


def _blocks(m: Matrix, k: int):
    a = tuple(r[:k] for r in m[:k])
    b = tuple(r[k:] for r in m[:k])
    c = tuple(r[:k] for r in m[k:])
    d = tuple(r[k:] for r in m[k:])
    return a, b, c, d


def _assemble(a, b, c, d) -> Matrix:
    return tuple(ra + rb for ra, rb in zip(a, b)) + tuple(rc + rd for rc, rd in zip(c, d))


def star_block(m: Matrix, split: int = 1) -> Matrix:
    """``M*`` by the 2x2 block recursion, leading block of size ``split``.

    The result is independent of ``split``; the recursion makes two calls of
    size ``n - split``, so this is exponential and meant for small matrices.
    """
    n = len(m)
    if n == 0:
        return ()
    if n == 1:
        return ((star(m[0][0]),),)
    k = min(max(split, 1), n - 1)
    a, b, c, d = _blocks(m, k)
    ds = star_block(d, split)
    as_ = star_block(a, split)
    top = star_block(mat_join(a, mat_mul(mat_mul(b, ds), c)), split)
    bot = star_block(mat_join(d, mat_mul(mat_mul(c, as_), b)), split)
    return _assemble(top, mat_mul(mat_mul(top, b), ds), mat_mul(mat_mul(bot, c), as_), bot)


# ---------------------------------------------------------------------------
# predicate vectors


def vec_act(v: Vector, m: Matrix) -> Vector:
    """Row vector times matrix: ``(vM)[j] = OR_i act(v[i], M[i][j])``."""
    rows, cols = _dims(m)
    if len(v) != rows:
        raise DimensionError(f"vector of length {len(v)} against {rows} rows")
    out = []
    for j in range(cols):
        acc = NEVER
        for i in range(rows):
            if v[i].is_never() or m[i][j].is_bot():
                continue
            acc = join_pred(acc, act(v[i], m[i][j]))
        out.append(acc)
    return tuple(out)


def vec_join(u: Vector, v: Vector) -> Vector:
    if len(u) != len(v):
        raise DimensionError("vector lengths differ")
    return tuple(join_pred(x, y) for x, y in zip(u, v))


def omega_matrix(m: Matrix, split: int = 1) -> Vector:
    """``M^omega`` by block recursion; entry ``i`` is true at ``x`` iff some
    infinite path from ``i`` can be run forever starting with energy ``x``."""
    n = len(m)
    if n == 0:
        return ()
    if n == 1:
        return (omega(m[0][0]),)
    k = min(max(split, 1), n - 1)
    a, b, c, d = _blocks(m, k)
    as_, ds = star_fw(a), star_fw(d)
    s1 = mat_join(a, mat_mul(mat_mul(b, ds), c))
    s2 = mat_join(d, mat_mul(mat_mul(c, as_), b))
    first = vec_join(omega_matrix(s1, split), vec_act(vec_act(omega_matrix(d, split), c), star_fw(s1)))
    second = vec_join(omega_matrix(s2, split), vec_act(vec_act(omega_matrix(a, split), b), star_fw(s2)))
    return first + second


def omega_k_matrix(m: Matrix, k: int) -> Vector:
    """``M^{omega_k}``: infinite paths visiting the leading ``k`` indices
    infinitely often.  ``k = 0`` gives the all-never vector."""
    n = len(m)
    if not 0 <= k <= n:
        raise DimensionError(f"k={k} outside 0..{n}")
    if k == 0:
        return tuple(NEVER for _ in range(n))
    if k == n:
        return omega_matrix(m)
    a, b, c, d = _blocks(m, k)
    s1 = mat_join(a, mat_mul(mat_mul(b, star_fw(d)), c))
    w = omega_matrix(s1)
    return w + vec_act(vec_act(w, b), star_fw(d))


# ---------------------------------------------------------------------------
# unit vectors


def unit_vector(n: int, s: int) -> tuple:
    """``I^s``: identity at ``s``, bottom elsewhere."""
    if not 0 <= s < n:
        raise DimensionError(f"state {s} outside 0..{n - 1}")
    b, e = bbot(), identity()
    return tuple(e if i == s else b for i in range(n))


def prefix_vector(n: int, k: int) -> tuple:
    """``F^{<=k}``: identity on the first ``k`` entries."""
    b, e = bbot(), identity()
    return tuple(e if i < k else b for i in range(n))


def apply_to_unit(m: Matrix, col: Sequence[EnergyFunction]) -> tuple:
    """Matrix times column vector of functions."""
    rows, cols = _dims(m)
    if len(col) != cols:
        raise DimensionError("column length mismatch")
    out = []
    for i in range(rows):
        acc = bbot()
        for j in range(cols):
            if m[i][j].is_bot() or col[j].is_bot():
                continue
            acc = join(acc, compose(m[i][j], col[j]))
        out.append(acc)
    return tuple(out)


def contract(row: Sequence[EnergyFunction], col: Sequence[EnergyFunction]) -> EnergyFunction:
    """Row vector times column vector: ``OR_i row[i] o col[i]``."""
    if len(row) != len(col):
        raise DimensionError("vector lengths differ")
    acc = bbot()
    for r, c in zip(row, col):
        if r.is_bot() or c.is_bot():
            continue
        acc = join(acc, compose(r, c))
    return acc


def dot_predicate(v: Vector, col: Sequence[EnergyFunction]) -> Threshold:
    """``v I``: the predicate obtained by running ``col`` then ``v``."""
    if len(v) != len(col):
        raise DimensionError("vector lengths differ")
    acc = NEVER
    for u, c in zip(v, col):
        if u.is_never() or c.is_bot():
            continue
        acc = join_pred(acc, act(u, c))
    return acc


def permute(m: Matrix, order: Sequence[int]) -> Matrix:
    """Reindex so that new index ``p`` is old index ``order[p]``."""
    return tuple(tuple(m[i][j] for j in order) for i in order)
