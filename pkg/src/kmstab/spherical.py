"""Posets of spherical (finite-type) node subsets and their chains."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator

from .gcm import GCM
from .linalg import det_bareiss

Subset = frozenset


def subset_key(j: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    s = tuple(sorted(j))
    return (len(s), s)


@dataclass(frozen=True)
class SphericalPoset:
    """Inclusion-ordered family of node subsets of ``parent``.

    ``elements`` is sorted by (size, sorted labels).  Full posets from
    :func:`enumerate_spherical` are downward closed; subposets such as the
    extended subcategory need not be.
    """

    parent: GCM
    elements: tuple[frozenset[int], ...]
    _pos: dict[frozenset[int], int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_pos", {j: k for k, j in enumerate(self.elements)})

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, j: Iterable[int]) -> bool:
        return frozenset(j) in self._pos

    def __iter__(self) -> Iterator[frozenset[int]]:
        return iter(self.elements)

    def position(self, j: frozenset[int]) -> int:
        return self._pos[j]

    def maximal(self) -> list[frozenset[int]]:
        return [j for j in self.elements if not any(j < k for k in self.elements if len(k) > len(j))]

    def hasse_edges(self) -> list[tuple[frozenset[int], frozenset[int]]]:
        """Covering pairs (J, J') with nothing strictly between them."""
        out = []
        for a in self.elements:
            ups = [b for b in self.elements if a < b]
            for b in ups:
                if len(b) == len(a) + 1 or not any(a < c < b for c in ups):
                    out.append((a, b))
        return out

    def longest_chain(self) -> int:
        """Number of strict inclusions in a longest chain."""
        depth = {}
        for j in self.elements:
            depth[j] = max((depth[k] + 1 for k in depth if k < j), default=0)
        return max(depth.values(), default=0)


def _det(g: GCM, j: frozenset[int]) -> int:
    idx = [g.index(v) for v in sorted(j, key=g.index)]
    return det_bareiss([[g.rows[k][l] for l in idx] for k in idx])


def enumerate_spherical(g: GCM) -> SphericalPoset:
    """Grow spherical subsets one node at a time.

    A subset is spherical exactly when all its maximal proper subsets are
    spherical and its own determinant is positive, so each candidate
    costs one determinant.
    """
    level = {frozenset()}
    found = [frozenset()]
    while level:
        nxt = set()
        for j in level:
            for v in g.nodes:
                if v in j:
                    continue
                cand = j | {v}
                if cand in nxt:
                    continue
                if all(cand - {u} in level for u in cand) and _det(g, cand) > 0:
                    nxt.add(cand)
        found.extend(nxt)
        level = nxt
    return SphericalPoset(g, tuple(sorted(found, key=subset_key)))


def subposet(p: SphericalPoset, keep: Iterable[frozenset[int]]) -> SphericalPoset:
    keep = set(keep)
    return SphericalPoset(p.parent, tuple(j for j in p.elements if j in keep))


@dataclass
class ChainSet:
    """Strict chains J0 < J1 < ... < Jp with p <= p_max, produced lazily.

    Chains are tuples of element positions in the poset; within one length
    they come out in lexicographic order of those positions.
    """

    poset: SphericalPoset
    p_max: int

    def __post_init__(self) -> None:
        els = self.poset.elements
        self._up = [[b for b in range(len(els)) if els[a] < els[b]] for a in range(len(els))]

    def of_length(self, p: int) -> Iterator[tuple[int, ...]]:
        if p < 0 or p > self.p_max:
            return
        up = self._up

        def grow(chain: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
            if len(chain) == p + 1:
                yield chain
                return
            for b in up[chain[-1]]:
                yield from grow(chain + (b,))

        for a in range(len(up)):
            yield from grow((a,))

    def count(self, p: int) -> int:
        if p < 0 or p > self.p_max:
            return 0
        # number of chains of length p starting at each element, by dynamic programming
        n = len(self._up)
        ways = [1] * n
        for _ in range(p):
            ways = [sum(ways[b] for b in self._up[a]) for a in range(n)]
        return sum(ways)

    def counts(self) -> list[int]:
        return [self.count(p) for p in range(self.p_max + 1)]

    def as_labels(self, chain: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(self.poset.elements[k])) for k in chain)


def chains(p: SphericalPoset, p_max: int) -> ChainSet:
    if p_max < 0:
        raise ValueError("p_max must be nonnegative")
    return ChainSet(p, p_max)


def extended_subcategory(sn: SphericalPoset, i0: Iterable[int]) -> SphericalPoset:
    """Elements containing every node outside ``i0`` (the extension nodes)."""
    i0 = frozenset(i0)
    extra = frozenset(sn.parent.nodes) - i0
    return SphericalPoset(sn.parent, tuple(j for j in sn.elements if extra <= j))


def all_subsets(nodes: Iterable[int]) -> Iterator[frozenset[int]]:
    nodes = list(nodes)
    for k in range(len(nodes) + 1):
        for c in combinations(nodes, k):
            yield frozenset(c)


def verify_observation(base: GCM, extended: GCM, i0: Iterable[int] | None = None) -> tuple[bool, frozenset[int] | None]:
    """Check that J is spherical in ``extended`` iff J & I0 is spherical in ``base``.

    Runs over every subset of the extended node set; returns the first
    failing subset (by size, then labels) as witness.
    """
    i0 = frozenset(base.nodes if i0 is None else i0)
    s_ext = set(enumerate_spherical(extended).elements)
    s_base = set(enumerate_spherical(base).elements)
    for j in sorted(all_subsets(extended.nodes), key=subset_key):
        if (j in s_ext) != (j & i0 in s_base):
            return False, j
    return True, None


def is_cofinal(sub: SphericalPoset, full: SphericalPoset) -> tuple[bool, dict[frozenset[int], frozenset[int]] | frozenset[int]]:
    """Every element of ``full`` must have a least upper bound inside ``sub``.

    Returns ``(True, {J: minimum})`` or ``(False, J)`` for the first J
    whose up-set in ``sub`` is empty or has no minimum.
    """
    witnesses = {}
    for j in full.elements:
        ups = [k for k in sub.elements if j <= k]
        least = [k for k in ups if all(k <= other for other in ups)]
        if not least:
            return False, j
        witnesses[j] = least[0]
    return True, witnesses


def order_isomorphism(cofinal: SphericalPoset, base: SphericalPoset, i0: Iterable[int]) -> bool:
    """Is J -> J & I0 a bijection from ``cofinal`` onto ``base`` preserving and reflecting inclusion?"""
    i0 = frozenset(i0)
    image = {j: j & i0 for j in cofinal.elements}
    if sorted(image.values(), key=subset_key) != list(base.elements):
        return False
    els = cofinal.elements
    return all((a <= b) == (image[a] <= image[b]) for a in els for b in els)
