"""Finite / affine / indefinite classification and Weyl group constants."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import NamedTuple

from .gcm import GCM, DynkinGraph, components, dynkin_graph, from_edges, graph_isomorphic, restrict
from .linalg import det_bareiss

FINITE, AFFINE, INDEFINITE = "Finite", "Affine", "Indefinite"


class CatalogMismatch(RuntimeError):
    """A component passed the minor test but matched no catalog diagram."""


class NonTerminating(RuntimeError):
    """Root closure exceeded its cap; the input is not of finite type."""


class CatalogType(NamedTuple):
    family: str
    rank: int

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


_TYPE_RE = re.compile(r"^\s*([A-Ga-g])\s*_?\s*(\d+)\s*$")
_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 4}
_EXCEPTIONAL = {("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)}


def parse_type(text: str | CatalogType) -> CatalogType:
    if isinstance(text, CatalogType):
        t = text
    else:
        m = _TYPE_RE.match(str(text))
        if not m:
            raise ValueError(f"not a catalog type: {text!r}")
        t = CatalogType(m.group(1).upper(), int(m.group(2)))
    if t.family in _MIN_RANK:
        if t.rank < _MIN_RANK[t.family]:
            raise ValueError(f"{t} is not in the catalog")
    elif (t.family, t.rank) not in _EXCEPTIONAL:
        raise ValueError(f"{t} is not in the catalog")
    return t


def catalog_gcm(t: CatalogType | str) -> GCM:
    """Cartan matrix of a catalog type on nodes 1..n (Kac's convention a_ij = <a_i^v, a_j>)."""
    fam, n = parse_type(t)
    nodes = list(range(1, n + 1))
    chain = [(i, i + 1) for i in range(1, n)]
    if fam == "A":
        return from_edges(nodes, chain)
    if fam == "B":
        return from_edges(nodes, chain[:-1] + [(n - 1, n, -1, -2)])
    if fam == "C":
        return from_edges(nodes, chain[:-1] + [(n - 1, n, -2, -1)])
    if fam == "D":
        return from_edges(nodes, [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)])
    if fam == "E":
        return from_edges(nodes, [(1, 3), (3, 4), (4, 5), (2, 4)] + [(i, i + 1) for i in range(5, n)])
    if fam == "F":
        return from_edges(nodes, [(1, 2), (2, 3, -2, -1), (3, 4)])
    return from_edges(nodes, [(1, 2, -1, -3)])


def catalog_types(max_rank: int) -> list[CatalogType]:
    out = []
    for n in range(1, max_rank + 1):
        for fam in "ABCD":
            if n >= _MIN_RANK[fam]:
                out.append(CatalogType(fam, n))
        out += [CatalogType(f, r) for f, r in sorted(_EXCEPTIONAL) if r == n]
    return out


@lru_cache(maxsize=None)
def _templates(rank: int) -> tuple[tuple[CatalogType, DynkinGraph], ...]:
    return tuple((t, dynkin_graph(catalog_gcm(t))) for t in catalog_types(rank) if t.rank == rank)


def match_catalog(g: GCM) -> tuple[CatalogType, dict[int, int]] | None:
    """Identify a connected GCM with a catalog diagram by graph isomorphism."""
    dg = dynkin_graph(g)
    # every catalog diagram is a tree with edge labels of product at most 3
    if len(dg.edges) != g.rank - 1 or any(a * b > 3 for a, b in dg.edges.values()):
        return None
    for t, tg in _templates(g.rank):
        ok, witness = graph_isomorphic(dg, tg)
        if ok:
            return t, witness
    return None


@dataclass(frozen=True)
class ComponentVerdict:
    nodes: tuple[int, ...]
    verdict: str
    catalog: CatalogType | None
    determinant: int


@dataclass(frozen=True)
class Classification:
    components: tuple[ComponentVerdict, ...]

    @property
    def is_finite(self) -> bool:
        return all(c.verdict == FINITE for c in self.components)

    def catalog_types(self) -> list[CatalogType]:
        return [c.catalog for c in self.components if c.catalog is not None]


def _principal_minor(rows: tuple[tuple[int, ...], ...], idx: list[int]) -> int:
    return det_bareiss([[rows[k][l] for l in idx] for k in idx])


def minor_verdict(g: GCM) -> tuple[str, int]:
    """Trichotomy of a connected GCM from its principal minors; also returns det."""
    n = g.rank
    rows = g.rows
    full = _principal_minor(rows, list(range(n)))
    # sizes 1 are all 2; check proper subsets by increasing size, stop at the first failure
    for mask in sorted(range(1, (1 << n) - 1), key=int.bit_count):
        idx = [k for k in range(n) if mask >> k & 1]
        if len(idx) == 1:
            continue
        if _principal_minor(rows, idx) <= 0:
            return INDEFINITE, full
    if full > 0:
        return FINITE, full
    if full == 0:
        return AFFINE, full
    return INDEFINITE, full


def classify(g: GCM) -> Classification:
    out = []
    for comp in components(g):
        sub = restrict(g, comp)
        verdict, det = minor_verdict(sub)
        cat = None
        if verdict == FINITE:
            found = match_catalog(sub)
            if found is None:
                raise CatalogMismatch(f"component {sorted(comp)} has positive minors but no catalog match")
            cat = found[0]
        out.append(ComponentVerdict(sub.nodes, verdict, cat, det))
    return Classification(tuple(out))


def is_finite_type(g: GCM) -> bool:
    """Minor criterion only, without catalog identification."""
    return all(minor_verdict(restrict(g, c))[0] == FINITE for c in components(g))


def positive_roots(g: GCM, cap: int = 10_000) -> set[tuple[int, ...]]:
    """Close the simple roots under s_i(v) = v - (sum_j a_ij v_j) e_i, keeping positive vectors."""
    n = g.rank
    rows = g.rows
    simple = [tuple(int(k == i) for k in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(n):
                c = sum(rows[i][j] * v[j] for j in range(n) if v[j])
                if c == 0 or v == simple[i]:
                    continue
                w = list(v)
                w[i] -= c
                if w[i] < 0:
                    continue
                w = tuple(w)
                if w not in roots:
                    roots.add(w)
                    nxt.append(w)
                    if len(roots) > cap:
                        raise NonTerminating(f"more than {cap} positive roots generated")
        frontier = nxt
    return roots


@dataclass(frozen=True)
class WeylData:
    catalog: CatalogType
    order: int
    degrees: tuple[int, ...]

    @property
    def positive_root_count(self) -> int:
        return sum(d - 1 for d in self.degrees)


_EXC_DEGREES = {
    ("E", 6): (2, 5, 6, 8, 9, 12),
    ("E", 7): (2, 6, 8, 10, 12, 14, 18),
    ("E", 8): (2, 8, 12, 14, 18, 20, 24, 30),
    ("F", 4): (2, 6, 8, 12),
    ("G", 2): (2, 6),
}


def weyl_data(t: CatalogType | str) -> WeylData:
    t = parse_type(t)
    fam, n = t
    if fam == "A":
        degs = tuple(range(2, n + 2))
    elif fam in "BC":
        degs = tuple(range(2, 2 * n + 1, 2))
    elif fam == "D":
        degs = tuple(sorted(list(range(2, 2 * n - 1, 2)) + [n]))
    else:
        degs = _EXC_DEGREES[(fam, n)]
    return WeylData(t, prod(degs), degs)


def degrees_of(g: GCM) -> list[int]:
    """Chevalley degrees of the Weyl group of a finite-type GCM (all components)."""
    cls = classify(g)
    if not cls.is_finite:
        raise ValueError("GCM is not of finite type")
    return sorted(d for t in cls.catalog_types() for d in weyl_data(t).degrees)
