"""Small dense linear algebra over Q(sqrt5).

Everything here works on plain nested lists of :class:`QuadRat`.  The
matrices in play are tiny (ambient dimension <= 8), so clarity beats
asymptotics: Gaussian elimination with the first nonzero pivot is exact in
a field and is all we need.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .quadrat import QuadRat

QVec = list[QuadRat]
QMat = list[list[QuadRat]]


def qmat(rows: Iterable[Iterable[QuadRat | int | Fraction]]) -> QMat:
    return [[QuadRat.from_value(x) for x in row] for row in rows]


def identity(n: int) -> QMat:
    return [[QuadRat(1 if i == j else 0) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> QMat:
    return [[QuadRat(0) for _ in range(cols)] for _ in range(rows)]


def transpose(a: QMat) -> QMat:
    return [list(col) for col in zip(*a)]


def add(a: QMat, b: QMat) -> QMat:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a: QMat, b: QMat) -> QMat:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(c: QuadRat | int | Fraction, a: QMat) -> QMat:
    c = QuadRat.from_value(c)
    return [[c * x for x in row] for row in a]


def matmul(a: QMat, b: QMat) -> QMat:
    bt = transpose(b)
    return [[_dot(row, col) for col in bt] for row in a]


def matvec(a: QMat, v: Sequence[QuadRat]) -> QVec:
    return [_dot(row, v) for row in a]


def _dot(u: Sequence[QuadRat], v: Sequence[QuadRat]) -> QuadRat:
    out = QuadRat(0)
    for x, y in zip(u, v):
        out = out + x * y
    return out


def max_abs(a: QMat) -> QuadRat:
    out = QuadRat(0)
    for row in a:
        for x in row:
            ax = abs(x)
            if ax > out:
                out = ax
    return out


def is_zero(a: QMat) -> bool:
    return all(not x for row in a for x in row)


def solve(a: QMat, b: QMat) -> QMat:
    """Exact solution of ``a @ x = b`` for square invertible ``a``."""
    n = len(a)
    aug = [list(ra) + list(rb) for ra, rb in zip(a, b)]
    cols = len(b[0])
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix in exact solve")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n : n + cols] for row in aug]


def det(a: QMat) -> QuadRat:
    n = len(a)
    m = [list(row) for row in a]
    out = QuadRat(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return QuadRat(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            out = -out
        out = out * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return out


def leading_minors_positive(a: QMat) -> bool:
    return all(det([row[: k + 1] for row in a[: k + 1]]).sign() > 0 for k in range(len(a)))


def kernel_basis(a: QMat) -> list[QVec]:
    """Basis of the right kernel ``{x : a @ x = 0}``."""
    if not a:
        return []
    rows, cols = len(a), len(a[0])
    m = [list(row) for row in a]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [QuadRat(0)] * cols
        v[fc] = QuadRat(1)
        for pr, pc in enumerate(pivots):
            v[pc] = -m[pr][fc]
        basis.append(v)
    return basis


def column_space_basis(a: QMat) -> list[QVec]:
    """Pivot columns of ``a`` (a basis of its column space)."""
    if not a:
        return []
    rows, cols = len(a), len(a[0])
    m = [list(row) for row in a]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return [[a[i][c] for i in range(rows)] for c in pivots]


def to_float(a: QMat) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in a], dtype=float)


def from_columns(cols: Sequence[Sequence[QuadRat]]) -> QMat:
    return [list(row) for row in zip(*cols)]
