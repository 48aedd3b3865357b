"""Sparse exact Gaussian elimination over the field of rational functions in q.

Matrices are lists of sparse rows ``{column: QCoeff}``.  Column order is
given explicitly; pivots are chosen column by column in that order, and
among candidate rows one with a monomial entry (a unit of the Laurent ring)
is preferred, which keeps intermediate entries Laurent where possible.
"""

from .errors import SingularSystem
from .ring import ONE
from .tensor import add_term

__all__ = ["row_reduce", "rank", "nullspace", "solve"]


def row_reduce(rows, columns):
    """Reduced row echelon form.

    Returns ``(pivots, reduced)`` where ``pivots`` lists pivot columns and
    ``reduced[k]`` is the row whose pivot is ``pivots[k]`` (pivot entry 1).
    """
    pending = [dict(r) for r in rows if r]
    pivots, reduced = [], []
    for col in columns:
        candidates = [k for k, r in enumerate(pending) if col in r]
        if not candidates:
            continue
        best = min(candidates, key=lambda k: (not pending[k][col].is_monomial(), len(pending[k])))
        row = pending.pop(best)
        inv = ONE / row[col]
        row = {c: v * inv for c, v in row.items()}
        for k, other in enumerate(pending):
            f = other.get(col)
            if f is not None:
                for c, v in row.items():
                    add_term(other, c, -f * v)
        pending = [r for r in pending if r]
        for other in reduced:
            f = other.get(col)
            if f is not None:
                for c, v in row.items():
                    add_term(other, c, -f * v)
        pivots.append(col)
        reduced.append(row)
    return pivots, reduced


def rank(rows, columns):
    return len(row_reduce(rows, columns)[0])


def nullspace(rows, columns):
    """Basis of ``{x : row . x = 0 for every row}``, one vector per free column."""
    pivots, reduced = row_reduce(rows, columns)
    pivot_set = set(pivots)
    basis = []
    for free in columns:
        if free in pivot_set:
            continue
        vec = {free: ONE}
        for p, row in zip(pivots, reduced):
            v = row.get(free)
            if v is not None:
                vec[p] = -v
        basis.append(vec)
    return basis


def solve(rows, rhs, columns):
    """One solution ``x`` of ``row_k . x = rhs[k]`` (free variables set to zero)."""
    aug = object()
    augmented = []
    for r, b in zip(rows, rhs):
        row = dict(r)
        if b:
            row[aug] = b
        augmented.append(row)
    pivots, reduced = row_reduce(augmented, list(columns) + [aug])
    if aug in pivots:
        raise SingularSystem("inconsistent linear system")
    return {p: row[aug] for p, row in zip(pivots, reduced) if aug in row}
