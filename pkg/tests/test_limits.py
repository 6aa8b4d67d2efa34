from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings

from kmstab.family import FamilySpec, extend
from kmstab.finite_type import catalog_gcm
from kmstab.gcm import rank2
from kmstab.invariants import hilbert_series, invariant_model
from kmstab.limits import (ChainDepthExceeded, GuardrailExceeded, NotAComplex, ObservationFailed, PosetFunctor,
                           cech_applicable, cech_complex, cochain_complex, constant_functor, e2_page,
                           inverse_limit_dim, invariant_functor, lim_i, stability_scan, thresholds,
                           weyl_family_scan)
from kmstab.linalg import rank
from kmstab.spherical import SphericalPoset, all_subsets, enumerate_spherical, extended_subcategory, subset_key

from strategies import gcms


def two_map_oracle(g, d):
    """lim^0 and lim^1 over {empty, {x}, {y}} straight from the invariant subspaces of F(empty)."""
    x, y = g.nodes
    u = [v for _, v in invariant_model(g, [x]).basis(d)]
    w = [v for _, v in invariant_model(g, [y]).basis(d)]
    total = invariant_model(g, []).dim(d)
    span = rank(u + w)
    return len(u) + len(w) - span, total - span


def sphere_cohomology(n_vertices):
    """Cohomology of the boundary of a simplex from its simplicial cochain complex."""
    simplices = [list(combinations(range(n_vertices), k + 1)) for k in range(n_vertices - 1)]
    index = [{s: i for i, s in enumerate(level)} for level in simplices]
    ranks = []
    for k in range(len(simplices) - 1):
        rows = []
        for s in simplices[k + 1]:
            rows.append({index[k][s[:m] + s[m + 1:]]: (-1) ** m for m in range(len(s))})
        ranks.append(rank(rows))
    out = []
    for k, level in enumerate(simplices):
        out.append(len(level) - (ranks[k] if k < len(ranks) else 0) - (ranks[k - 1] if k else 0))
    return out


# --- cochain complex shapes -------------------------------------------------

def test_single_element_poset():
    g = catalog_gcm("A2")
    p = SphericalPoset(g, (frozenset(),))
    cx = cochain_complex(invariant_functor(p, 2), 2)
    assert cx.dims == [3, 0, 0]
    assert cx.cohomology(1) == [3, 0]


def test_two_element_chain_constant():
    g = catalog_gcm("A1")
    p = SphericalPoset(g, (frozenset(), frozenset({1})))
    cx = cochain_complex(constant_functor(p), 2)
    assert cx.dims == [2, 1, 0]
    assert cx.cohomology(1) == [1, 0]


def test_a33_degree_one_dims():
    f = invariant_functor(enumerate_spherical(rank2(3, 3)), 1)
    cx = cochain_complex(f, 1)
    assert cx.dims == [2 + 1 + 1, 2 + 2]
    cx.check_square_zero()


def test_non_functorial_maps_rejected():
    g = catalog_gcm("A2")
    p = SphericalPoset(g, (frozenset(), frozenset({1}), frozenset({1, 2})))
    maps = {(frozenset(), frozenset({1})): 1, (frozenset({1}), frozenset({1, 2})): 1, (frozenset(), frozenset({1, 2})): 2}
    f = PosetFunctor(p, lambda j: 1, lambda s, b: [[Fraction(maps[(s, b)])]])
    with pytest.raises(NotAComplex):
        cochain_complex(f, 2)


def test_guardrail():
    f = constant_functor(enumerate_spherical(catalog_gcm("A4")))
    with pytest.raises(GuardrailExceeded):
        cochain_complex(f, 3, guardrail=100)


def test_depth_exceeded():
    cx = cochain_complex(constant_functor(enumerate_spherical(rank2(3, 3))), 1)
    with pytest.raises(ChainDepthExceeded):
        cx.cohomology(2)


def test_unknown_method():
    with pytest.raises(ValueError):
        lim_i(constant_functor(enumerate_spherical(rank2(3, 3))), 1, method="spectral")


# --- oracles -------------------------------------------------------------------

@pytest.mark.parametrize("n", [3, 4, 5])
def test_nerve_of_proper_nonempty_subsets_is_a_sphere(n):
    parent = catalog_gcm(f"A{n}")
    elements = [j for j in all_subsets(parent.nodes) if 0 < len(j) < n]
    p = SphericalPoset(parent, tuple(sorted(elements, key=subset_key)))
    got = lim_i(constant_functor(p), n - 1, method="chains")
    # boundary of the (n-1)-simplex is a sphere of dimension n-2
    assert got == sphere_cohomology(n) + [0]
    assert got == [1] + [int(i == n - 2) for i in range(1, n)]


@pytest.mark.parametrize("a,b", [(1, 5), (2, 3), (3, 3), (2, 5), (2, 2), (1, 4)])
@pytest.mark.parametrize("d", range(5))
def test_rank2_two_map_oracle(a, b, d):
    g = rank2(a, b)
    f = invariant_functor(enumerate_spherical(g), d)
    expected = list(two_map_oracle(g, d))
    assert lim_i(f, 1, method="chains") == expected
    assert lim_i(f, 1, method="cech") == expected


@pytest.mark.parametrize("t", ["A2", "A3", "B3", "G2"])
def test_finite_type_terminal_object(t):
    g = catalog_gcm(t)
    p = enumerate_spherical(g)
    h = hilbert_series(g, g.nodes, cutoff=4)
    for d in range(5):
        assert lim_i(invariant_functor(p, d), 3, method="chains") == [h[d], 0, 0, 0]


def test_inverse_limit_matches_lim0():
    for g in (rank2(3, 3), rank2(2, 2), catalog_gcm("A3"), extend(FamilySpec(rank2(2, 2, (0, 1)), 0, 2))):
        p = enumerate_spherical(g)
        for d in range(4):
            f = invariant_functor(p, d)
            assert inverse_limit_dim(f) == lim_i(f, 0, method="chains")[0]


@pytest.mark.parametrize("n", [0, 1, 2])
def test_chains_and_cech_agree_on_family(affine_a1, n):
    g = extend(FamilySpec(affine_a1, 0, n))
    full = enumerate_spherical(g)
    for p in (full, extended_subcategory(full, affine_a1.nodes)):
        assert cech_applicable(p)
        for d in range(4):
            f = invariant_functor(p, d)
            assert lim_i(f, 2, method="chains") == lim_i(f, 2, method="cech")


@given(gcms(min_rank=2, max_rank=4, min_entry=-3))
@settings(max_examples=25, deadline=None)
def test_chains_and_cech_agree_random(g):
    p = enumerate_spherical(g)
    assert cech_applicable(p)
    for d in range(3):
        f = invariant_functor(p, d)
        assert lim_i(f, 2, method="chains") == lim_i(f, 2, method="cech")


@given(gcms(min_rank=1, max_rank=4))
@settings(max_examples=25, deadline=None)
def test_square_zero_random(g):
    p = enumerate_spherical(g)
    for d in range(3):
        f = invariant_functor(p, d)
        cochain_complex(f, 3).check_square_zero()
        cech_complex(f, 3).check_square_zero()


def test_constant_functor_with_minimum_is_contractible(e9):
    # the empty set is the least element, so the nerve is a cone
    assert lim_i(constant_functor(enumerate_spherical(e9)), 8, method="cech") == [1] + [0] * 8
    assert lim_i(constant_functor(enumerate_spherical(rank2(3, 3))), 1, method="chains") == [1, 0]


# --- E2 pages -----------------------------------------------------------------

def test_e2_finite_type_single_column():
    g = catalog_gcm("B3")
    page = e2_page(g, 8)
    h = hilbert_series(g, g.nodes, cutoff=4)
    for i, j, v in page.cells():
        assert v == (h[j // 2] if i == 0 and j % 2 == 0 else 0)
    assert page.column(0) == {j: (h[j // 2] if j % 2 == 0 else 0) for j in range(9)}


def test_e2_odd_rows_vanish_and_window_respected(affine_a1):
    page = e2_page(extend(FamilySpec(affine_a1, 0, 1)), 7)
    for i, j, v in page.cells():
        assert i + j <= 7
        if j % 2:
            assert v == 0


def test_e2_vanishes_beyond_longest_chain():
    g = rank2(2, 2)
    p = enumerate_spherical(g)
    page = e2_page(g, 8, method="chains")
    for i, j, v in page.cells():
        if i > p.longest_chain():
            assert v == 0


@pytest.mark.parametrize("a,b", [(2, 3), (1, 5), (3, 3)])
def test_e2_rank2_indefinite(a, b):
    g = rank2(a, b)
    page = e2_page(g, 8)
    for i, j, v in page.cells():
        if j % 2 == 0 and i <= 1:
            assert v == two_map_oracle(g, j // 2)[i]
    # indefinite rank two: F({1}) + F({2}) fills F(empty) in every degree, so lim^1 vanishes
    assert all(v == 0 for i, j, v in page.cells() if i >= 1)
    assert {j: v for j, v in page.column(0).items() if v} == {0: 1, 4: 1, 8: 1}


def test_e2_affine_rank2(affine_a1):
    page = e2_page(affine_a1, 8)
    nonzero = {(i, j): v for i, j, v in page.cells() if v}
    assert nonzero == {(0, 0): 1, (0, 2): 1, (0, 4): 1, (0, 6): 1, (0, 8): 1, (1, 2): 1, (1, 6): 1}
    for i, j, v in page.cells():
        if j % 2 == 0 and i <= 1:
            assert v == two_map_oracle(affine_a1, j // 2)[i]


def test_e2_window_zero(affine_a1):
    assert e2_page(affine_a1, 0).cells() == [(0, 0, 1)]


# --- scans --------------------------------------------------------------------

def test_thresholds():
    series = {0: {(0, 0): 1, (1, 2): 1}, 1: {(0, 0): 1, (1, 2): 0}, 2: {(0, 0): 1, (1, 2): 0}}
    assert thresholds(series) == {(0, 0): 0, (1, 2): 1}


def test_stability_scan_small(affine_a1):
    rep = stability_scan(affine_a1, 0, range(4), 6, cofinal=[1, 2])
    assert rep.n0 == 0
    assert rep.agreement == {1: True, 2: True}
    assert rep.stable
    for n in (1, 2, 3):
        assert {c: v for c, v in rep.pages[n].table.items() if v} == {(0, 0): 1, (0, 4): 1}


def test_stability_window_zero(affine_a1):
    rep = stability_scan(affine_a1, 0, range(3), 0)
    assert all(rep.pages[n].table == {(0, 0): 1} for n in range(3))


def test_stability_scan_needs_stable_family():
    with pytest.raises(ObservationFailed):
        stability_scan(catalog_gcm("A3"), 1, range(3), 2)


def test_weyl_scan_finite_member():
    rep = weyl_family_scan(catalog_gcm("A3"), 1, range(3), 3)
    assert all(v == [1, 0, 0, 0] for v in rep.limits.values())


def test_weyl_scan_affine_a1(affine_a1):
    rep = weyl_family_scan(affine_a1, 0, range(5), 4)
    assert all(v == [1, 0, 0, 0, 0] for v in rep.limits.values())
    assert all(t == 0 for t in rep.thresholds.values())
