from __future__ import annotations

from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kmstab.linalg import InconsistentSystem, coordinates, det_bareiss, identity, kernel, matmul, rank, rref


def det_leibniz(m):
    n = len(m)
    total = 0
    for p in permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if p[a] > p[b])
        prod = 1
        for i in range(n):
            prod *= m[i][p[i]]
        total += -prod if inv % 2 else prod
    return total


square = st.integers(0, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n))


@given(square)
@settings(max_examples=200, deadline=None)
def test_det_matches_permutation_expansion(m):
    assert det_bareiss(m) == det_leibniz(m)


def test_det_small_cases():
    assert det_bareiss([]) == 1
    assert det_bareiss([[2, -1], [-1, 2]]) == 3
    assert det_bareiss([[0, 1, 0], [1, 0, 0], [0, 0, 1]]) == -1


def dense(rows, ncols):
    return [{c: Fraction(x) for c, x in enumerate(r) if x} for r in rows]


matrices = st.tuples(st.integers(1, 5), st.integers(1, 6)).flatmap(
    lambda s: st.tuples(st.just(s[1]), st.lists(st.lists(st.integers(-3, 3), min_size=s[1], max_size=s[1]),
                                                min_size=s[0], max_size=s[0])))


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_rank_nullity_and_kernel_annihilated(data):
    ncols, rows = data
    sparse = dense(rows, ncols)
    ker = kernel(sparse, ncols)
    assert rank(sparse) + len(ker) == ncols
    for _, v in ker:
        for r in rows:
            assert sum(r[c] * v.get(c, 0) for c in range(ncols)) == 0


@given(matrices)
@settings(max_examples=100, deadline=None)
def test_rank_is_order_independent(data):
    ncols, rows = data
    sparse = dense(rows, ncols)
    assert rank(sparse) == rank(list(reversed(sparse)))


def test_rref_is_reduced():
    red = rref([{0: 2, 1: 4, 2: 6}, {0: 1, 1: 3}])
    assert [c for c, _ in red] == [0, 1]
    for c, v in red:
        assert v[c] == 1
        for c2, w in red:
            if c2 != c:
                assert c not in w


def test_coordinates_and_residual():
    basis = rref([{0: 1, 1: 1}, {1: 1, 2: 1}])
    v = {0: Fraction(2), 1: Fraction(5), 2: Fraction(3)}
    coeffs = coordinates(basis, v)
    recon = {}
    for a, (_, b) in zip(coeffs, basis):
        for k, x in b.items():
            recon[k] = recon.get(k, 0) + a * x
    assert {k: x for k, x in recon.items() if x} == v
    with pytest.raises(InconsistentSystem):
        coordinates(basis, {0: Fraction(1)})


def test_matmul_identity():
    a = [[1, 2], [3, 4]]
    assert matmul(a, identity(2)) == a
    assert matmul(identity(2), a) == a
