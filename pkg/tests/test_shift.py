from __future__ import annotations

import pytest

from kmstab.linalg import det_bareiss, identity, matmul
from kmstab.shift import (Position, SizeMismatch, block_embed, composition, is_signed_permutation, sigma,
                          sigma_check, verify_composition)


def image(m, i):
    """Image of e_i (1-based) as {index: coefficient}, columns being images."""
    return {r + 1: m[r][i - 1] for r in range(len(m)) if m[r][i - 1]}


def test_sigma1():
    s = sigma(1).matrix
    assert image(s, 1) == {2: -1}
    assert image(s, 2) == {1: 1}
    assert det_bareiss([list(r) for r in s]) == 1


def test_sigma2():
    s = sigma(2).matrix
    assert image(s, 1) == {3: 1}
    assert image(s, 2) == {1: 1}
    assert image(s, 3) == {2: 1}


def test_sigma1_squared_is_minus_identity():
    s = [list(r) for r in sigma(1).matrix]
    assert matmul(s, s) == [[-1, 0], [0, -1]]


@pytest.mark.parametrize("m", range(1, 9))
def test_power_m_plus_one(m):
    s = [list(r) for r in sigma(m).matrix]
    p = identity(m + 1)
    for _ in range(m + 1):
        p = matmul(s, p)
    sign = -1 if m % 2 else 1
    assert p == [[sign * x for x in r] for r in identity(m + 1)]


@pytest.mark.parametrize("m", range(1, 13))
def test_sigma_invariants(m):
    s = sigma(m)
    assert s.size == m + 1
    assert is_signed_permutation(s.matrix)
    assert det_bareiss([list(r) for r in s.matrix]) == 1
    for i in range(2, m + 2):
        assert image(s.matrix, i) == {i - 1: 1}
    assert image(s.matrix, 1) == {m + 1: (-1) ** m}


def test_sigma_rejects_zero():
    with pytest.raises(ValueError):
        sigma(0)


def test_block_embed_low():
    assert block_embed(sigma(1), 3, Position.LOW) == [[0, 1, 0], [-1, 0, 0], [0, 0, 1]]


def test_block_embed_high():
    assert block_embed(sigma(1), 3, Position.HIGH) == [[1, 0, 0], [0, 0, 1], [0, -1, 0]]


def test_block_embed_full_size():
    s = sigma(3)
    assert block_embed(s, 4) == [list(r) for r in s.matrix]
    with pytest.raises(SizeMismatch):
        block_embed(s, 3)


def test_composition_1_1():
    prod = composition(1, 1)
    assert prod == [list(r) for r in sigma(2).matrix]
    assert [image(prod, i) for i in (1, 2, 3)] == [{3: 1}, {1: 1}, {2: 1}]


def test_other_ordering_fails():
    # the high block applied first does not give sigma_2
    assert composition(1, 1, high_first=True) != [list(r) for r in sigma(2).matrix]


def test_exhaustive_composition_law():
    results = sigma_check(8)
    assert len(results) == sum(range(1, 8))
    assert all(ok and det == 1 for _, _, ok, det in results)
    assert verify_composition(3, 5)


def test_signed_permutation_detector():
    assert not is_signed_permutation([[1, 1], [0, 1]])
    assert not is_signed_permutation([[2, 0], [0, 1]])
