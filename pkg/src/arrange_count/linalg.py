"""Small exact linear algebra over Fraction: row reduction, nullspaces, flats."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = tuple[Fraction, ...]


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row-echelon form with unit pivots; returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : rows . x = 0}."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


class AffineFlat:
    """Solution set of a x = b in K^d, stored as canonical reduced rows [a | b].

    The empty set is a flat too (``empty`` is True); it compares equal only to
    itself.
    """

    __slots__ = ("d", "rows", "pivots", "empty", "_key")

    def __init__(self, d: int, equations: Sequence[Sequence] = ()):
        self.d = d
        red, pivots = rref(equations, d + 1)
        self.empty = bool(pivots) and pivots[-1] == d
        if self.empty:
            red, pivots = [], []
        self.rows = [tuple(r) for r in red]
        self.pivots = pivots
        self._key = ("EMPTY",) if self.empty else tuple(self.rows)

    @property
    def codim(self) -> int:
        return self.d + 1 if self.empty else len(self.rows)

    @property
    def dim(self) -> int:
        return -1 if self.empty else self.d - len(self.rows)

    def key(self):
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, AffineFlat) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def intersect(self, other: "AffineFlat") -> "AffineFlat":
        if self.empty or other.empty:
            return AffineFlat(self.d, [[0] * self.d + [1]])
        return AffineFlat(self.d, self.rows + other.rows)

    def _reduces_to_zero(self, row: Sequence[Fraction]) -> bool:
        v = list(row)
        for r, p in zip(self.rows, self.pivots):
            if v[p] != 0:
                f = v[p]
                v = [a - f * b for a, b in zip(v, r)]
        return all(x == 0 for x in v)

    def contains(self, other: "AffineFlat") -> bool:
        """other ⊆ self."""
        if other.empty:
            return True
        if self.empty:
            return False
        return all(other._reduces_to_zero(r) for r in self.rows)

    def __repr__(self) -> str:
        if self.empty:
            return "AffineFlat(EMPTY)"
        return f"AffineFlat(d={self.d}, codim={self.codim})"


def affine_hull(points: Sequence[Sequence[int]], d: int) -> AffineFlat:
    """Smallest flat through the given points (empty set for no points)."""
    # equations (a, b) with a.p = b for every p: nullspace of rows [p, -1]
    eqs = nullspace([list(p) + [-1] for p in points], d + 1)
    return AffineFlat(d, eqs)
