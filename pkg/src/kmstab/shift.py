"""Signed cyclic shifts sigma_m in SU(m+1) and their block composition law."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .linalg import det_bareiss, identity, matmul


class SizeMismatch(ValueError):
    pass


class Position(Enum):
    LOW = "low"    # leading diagonal block
    HIGH = "high"  # trailing diagonal block


@dataclass(frozen=True)
class ShiftMatrix:
    m: int
    matrix: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return self.m + 1


def sigma(m: int) -> ShiftMatrix:
    """e_i -> e_(i-1) for i > 1 and e_1 -> (-1)^m e_(m+1); columns are images."""
    if m < 1:
        raise ValueError("m must be at least 1")
    n = m + 1
    a = [[0] * n for _ in range(n)]
    for i in range(1, n):
        a[i - 1][i] = 1
    a[n - 1][0] = -1 if m % 2 else 1
    s = ShiftMatrix(m, tuple(map(tuple, a)))
    assert det_bareiss([list(r) for r in s.matrix]) == 1
    return s


def block_embed(s: ShiftMatrix, total: int, position: Position = Position.LOW) -> list[list[int]]:
    if total < s.size:
        raise SizeMismatch(f"cannot place a {s.size}x{s.size} block in size {total}")
    out = identity(total)
    off = 0 if position is Position.LOW else total - s.size
    for r in range(s.size):
        for c in range(s.size):
            out[off + r][off + c] = s.matrix[r][c]
    return out


def composition(m1: int, m2: int, high_first: bool = False) -> list[list[int]]:
    """(1 x sigma_m2)(sigma_m1 x 1), or the reverse order when ``high_first``."""
    total = m1 + m2 + 1
    low = block_embed(sigma(m1), total, Position.LOW)
    high = block_embed(sigma(m2), total, Position.HIGH)
    return matmul(low, high) if high_first else matmul(high, low)


def verify_composition(m1: int, m2: int) -> bool:
    if m1 < 1 or m2 < 1:
        raise ValueError("m1 and m2 must be at least 1")
    return composition(m1, m2) == [list(r) for r in sigma(m1 + m2).matrix]


def is_signed_permutation(a: list[list[int]] | tuple[tuple[int, ...], ...]) -> bool:
    rows_ok = all(sum(1 for x in r if x) == 1 for r in a)
    cols_ok = all(sum(1 for r in a if r[c]) == 1 for c in range(len(a)))
    return rows_ok and cols_ok and all(x in (-1, 0, 1) for r in a for x in r)


def sigma_check(bound: int) -> list[tuple[int, int, bool, int]]:
    """(m1, m2, law holds, det of product) for all m1 + m2 <= bound."""
    out = []
    for m1 in range(1, bound):
        for m2 in range(1, bound - m1 + 1):
            prod = composition(m1, m2)
            out.append((m1, m2, verify_composition(m1, m2), det_bareiss(prod)))
    return out
