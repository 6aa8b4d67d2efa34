"""Exact linear algebra over the rationals.

Vectors are sparse ``dict[int, int | Fraction]`` maps from column index to
a nonzero entry.  Elimination is fraction-free: rows are scaled to
primitive integer vectors, combined with integer cross-multiplication and
divided back down by their content, so no rational arithmetic happens in
the inner loop.  Fractions only appear when a reduced echelon form is
requested.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping

Vector = dict[int, Fraction]


class InconsistentSystem(ArithmeticError):
    """A vector does not lie in the span it was expressed against."""


def det_bareiss(matrix: list[list[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    m = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            lead = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - lead * row_k[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def _primitive(row: Mapping[int, int | Fraction]) -> dict[int, int]:
    """Scale a rational row to a primitive integer row with positive lead."""
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    out = {}
    g = 0
    for k, v in row.items():
        if v:
            iv = int(v * den)
            out[k] = iv
            g = gcd(g, iv)
    if not out:
        return out
    if out[min(out)] < 0:
        g = -g
    if g != 1:
        out = {k: v // g for k, v in out.items()}
    return out


def _combine(row: dict[int, int], pivot_row: dict[int, int], col: int) -> dict[int, int]:
    """Eliminate ``col`` from ``row`` using ``pivot_row`` (integer, content-reduced)."""
    a = pivot_row[col]
    b = row[col]
    g = gcd(a, b)
    a //= g
    b //= g
    out = {k: a * v for k, v in row.items()}
    for k, v in pivot_row.items():
        w = out.get(k, 0) - b * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    if not out:
        return out
    c = 0
    for v in out.values():
        c = gcd(c, v)
        if c == 1:
            return out
    return {k: v // c for k, v in out.items()}


class Echelon:
    """Incremental row-echelon form keyed by leading column.

    ``add`` reduces a row against the stored pivots and keeps it if it is
    independent, so ``rank`` is the number of rows kept.
    """

    def __init__(self) -> None:
        self.pivots: dict[int, dict[int, int]] = {}

    def reduce(self, row: Mapping[int, int | Fraction]) -> dict[int, int]:
        r = _primitive(row)
        pivots = self.pivots
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                return r
            r = _combine(r, p, c)
        return r

    def add(self, row: Mapping[int, int | Fraction]) -> bool:
        r = self.reduce(row)
        if not r:
            return False
        self.pivots[min(r)] = r
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduced_rows(self) -> list[tuple[int, Vector]]:
        """Fully reduced echelon rows ``(pivot, row)`` with unit pivots, by pivot."""
        cols = sorted(self.pivots)
        rows = {c: dict(self.pivots[c]) for c in cols}
        for c in reversed(cols):
            pr = rows[c]
            for c2 in cols:
                if c2 < c and c in rows[c2]:
                    rows[c2] = _combine(rows[c2], pr, c)
        out = []
        for c in cols:
            r = rows[c]
            lead = r[c]
            out.append((c, {k: Fraction(v, lead) for k, v in sorted(r.items())}))
        return out


def rank(rows: Iterable[Mapping[int, int | Fraction]]) -> int:
    # rows with late leading columns go first; keeps fill-in low on sparse inputs
    ech = Echelon()
    for row in sorted((r for r in rows if r), key=lambda r: -min(r)):
        ech.add(row)
    return ech.rank


def rref(rows: Iterable[Mapping[int, int | Fraction]]) -> list[tuple[int, Vector]]:
    ech = Echelon()
    for row in rows:
        ech.add(row)
    return ech.reduced_rows()


def kernel(rows: Iterable[Mapping[int, int | Fraction]], ncols: int) -> list[tuple[int, Vector]]:
    """Null space of the row system as a reduced echelon basis ``(pivot, vector)``."""
    reduced = rref(rows)
    pivot_cols = {c for c, _ in reduced}
    free = [f for f in range(ncols) if f not in pivot_cols]
    vecs = []
    for f in free:
        v: Vector = {f: Fraction(1)}
        for c, r in reduced:
            x = r.get(f)
            if x:
                v[c] = -x
        vecs.append(v)
    return rref(vecs)


def coordinates(basis: list[tuple[int, Vector]], v: Mapping[int, Fraction]) -> list[Fraction]:
    """Coordinates of ``v`` in a reduced echelon basis; raises if ``v`` is outside the span."""
    coeffs = [Fraction(v.get(c, 0)) for c, _ in basis]
    residual = {k: Fraction(x) for k, x in v.items() if x}
    for a, (_, b) in zip(coeffs, basis):
        if not a:
            continue
        for k, x in b.items():
            w = residual.get(k, 0) - a * x
            if w:
                residual[k] = w
            else:
                residual.pop(k, None)
    if residual:
        raise InconsistentSystem(f"nonzero residual on columns {sorted(residual)[:5]}")
    return coeffs


def matmul(a: list[list], b: list[list]) -> list[list]:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]
