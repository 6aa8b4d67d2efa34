"""Generalized Cartan matrices, their Dynkin graphs and graph isomorphism."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence


class Violation(NamedTuple):
    kind: str  # DiagonalNotTwo | PositiveOffDiagonal | AsymmetricZero
    i: int
    j: int

    def __str__(self) -> str:
        return f"{self.kind} at ({self.i},{self.j})"


class InvalidGCM(ValueError):
    """Raised with every axiom violation found, not just the first."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


class UnknownLabel(KeyError):
    pass


class GCMFormatError(ValueError):
    pass


@dataclass(frozen=True)
class GCM:
    """A validated generalized Cartan matrix on integer node labels.

    ``rows[k][l]`` is the entry a(nodes[k], nodes[l]).  Construct through
    :func:`validate_gcm` or :meth:`from_entries`; the constructor itself
    trusts its input.
    """

    nodes: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]
    _index: dict[int, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {v: k for k, v in enumerate(self.nodes)})

    @property
    def rank(self) -> int:
        return len(self.nodes)

    def index(self, label: int) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(label) from None

    def __contains__(self, label: int) -> bool:
        return label in self._index

    def a(self, i: int, j: int) -> int:
        return self.rows[self.index(i)][self.index(j)]

    def neighbors(self, i: int) -> list[int]:
        k = self.index(i)
        return [self.nodes[l] for l, x in enumerate(self.rows[k]) if l != k and x]

    def transpose(self) -> GCM:
        return GCM(self.nodes, tuple(zip(*self.rows)))

    def matrix(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    # --- JSON text format -------------------------------------------------

    def entries(self) -> list[list[int]]:
        """Nonzero off-diagonal entries as ``[i, j, a_ij]`` in node order."""
        out = []
        for k, i in enumerate(self.nodes):
            for l, j in enumerate(self.nodes):
                if k != l and self.rows[k][l]:
                    out.append([i, j, self.rows[k][l]])
        return out

    def to_json(self) -> str:
        return json.dumps({"nodes": list(self.nodes), "entries": self.entries()})

    @classmethod
    def from_entries(cls, nodes: Sequence[int], entries: Iterable[Sequence[int]]) -> GCM:
        nodes = [int(x) for x in nodes]
        pos = {v: k for k, v in enumerate(nodes)}
        if len(pos) != len(nodes):
            raise GCMFormatError("node labels are not distinct")
        m = [[2 if k == l else 0 for l in range(len(nodes))] for k in range(len(nodes))]
        for triple in entries:
            if len(triple) != 3:
                raise GCMFormatError(f"entry {triple!r} is not an [i, j, a_ij] triple")
            i, j, x = (int(t) for t in triple)
            if i not in pos or j not in pos:
                raise GCMFormatError(f"entry {triple!r} names an unknown node")
            m[pos[i]][pos[j]] = x
        return validate_gcm(m, nodes)

    @classmethod
    def from_json(cls, text: str) -> GCM:
        try:
            doc = json.loads(text)
            nodes, entries = doc["nodes"], doc["entries"]
        except (ValueError, KeyError, TypeError) as exc:
            raise GCMFormatError(f"not a GCM document: {exc}") from exc
        return cls.from_entries(nodes, entries)


def validate_gcm(matrix: Sequence[Sequence[int]], labels: Sequence[int] | None = None) -> GCM:
    """Check the three Cartan axioms and return the GCM, or raise :class:`InvalidGCM`."""
    n = len(matrix)
    if any(len(r) != n for r in matrix):
        raise GCMFormatError("matrix is not square")
    labels = list(range(1, n + 1)) if labels is None else [int(x) for x in labels]
    if len(labels) != n:
        raise GCMFormatError("label count does not match matrix size")
    if len(set(labels)) != n:
        raise GCMFormatError("node labels are not distinct")
    bad = []
    for k in range(n):
        for l in range(n):
            x = matrix[k][l]
            if k == l:
                if x != 2:
                    bad.append(Violation("DiagonalNotTwo", labels[k], labels[l]))
            elif x > 0:
                bad.append(Violation("PositiveOffDiagonal", labels[k], labels[l]))
            elif x == 0 and matrix[l][k] != 0:
                bad.append(Violation("AsymmetricZero", labels[k], labels[l]))
    if bad:
        raise InvalidGCM(bad)
    return GCM(tuple(labels), tuple(tuple(int(x) for x in r) for r in matrix))


def restrict(g: GCM, subset: Iterable[int]) -> GCM:
    """The sub-GCM on ``subset``, keeping the parent's node order."""
    keep = set(subset)
    for x in keep:
        g.index(x)
    idx = [k for k, v in enumerate(g.nodes) if v in keep]
    return GCM(tuple(g.nodes[k] for k in idx), tuple(tuple(g.rows[k][l] for l in idx) for k in idx))


def components(g: GCM) -> list[frozenset[int]]:
    """Connected components of the Dynkin graph, ordered by first node."""
    seen: set[int] = set()
    out = []
    for start in g.nodes:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in g.neighbors(v):
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        out.append(frozenset(comp))
    return out


@dataclass(frozen=True)
class DynkinGraph:
    """Nodes plus edges ``{(i, j): (-a_ij, -a_ji)}`` stored once per pair, i before j."""

    nodes: tuple[int, ...]
    edges: dict[tuple[int, int], tuple[int, int]] = field(hash=False)

    def label(self, i: int, j: int) -> tuple[int, int] | None:
        if (i, j) in self.edges:
            return self.edges[(i, j)]
        lab = self.edges.get((j, i))
        return None if lab is None else (lab[1], lab[0])

    def adjacency(self) -> dict[int, dict[int, tuple[int, int]]]:
        adj: dict[int, dict[int, tuple[int, int]]] = {v: {} for v in self.nodes}
        for (i, j), (a, b) in self.edges.items():
            adj[i][j] = (a, b)
            adj[j][i] = (b, a)
        return adj

    def render(self) -> str:
        lines = [f"nodes: {' '.join(str(v) for v in self.nodes)}"]
        for (i, j), (a, b) in self.edges.items():
            lines.append(f"{i} --- {j}" if a * b == 1 else f"{i} -({a},{b})- {j}")
        return "\n".join(lines)


def dynkin_graph(g: GCM) -> DynkinGraph:
    edges = {}
    for k, i in enumerate(g.nodes):
        for l in range(k + 1, g.rank):
            if g.rows[k][l]:
                edges[(i, g.nodes[l])] = (-g.rows[k][l], -g.rows[l][k])
    return DynkinGraph(g.nodes, edges)


def _signature(adj: dict[int, dict[int, tuple[int, int]]], v: int) -> tuple:
    return (len(adj[v]), tuple(sorted(Counter(adj[v].values()).items())))


def graph_isomorphic(g1: DynkinGraph, g2: DynkinGraph) -> tuple[bool, dict[int, int] | None]:
    """Backtracking search for a label bijection preserving oriented edge labels.

    Returns ``(True, mapping g1 -> g2)`` or ``(False, None)``.
    """
    if len(g1.nodes) != len(g2.nodes) or len(g1.edges) != len(g2.edges):
        return False, None
    if Counter(map(_canon_label, g1.edges.values())) != Counter(map(_canon_label, g2.edges.values())):
        return False, None
    adj1, adj2 = g1.adjacency(), g2.adjacency()
    sig1 = {v: _signature(adj1, v) for v in g1.nodes}
    sig2 = {v: _signature(adj2, v) for v in g2.nodes}
    if Counter(sig1.values()) != Counter(sig2.values()):
        return False, None
    by_sig: dict[tuple, list[int]] = {}
    for v in g2.nodes:
        by_sig.setdefault(sig2[v], []).append(v)

    # visit g1 nodes so that each one after the first of its component has a mapped neighbor
    order: list[int] = []
    placed: set[int] = set()
    for start in sorted(g1.nodes, key=lambda v: -sig1[v][0]):
        if start in placed:
            continue
        queue = [start]
        placed.add(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in adj1[v]:
                if w not in placed:
                    placed.add(w)
                    queue.append(w)

    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(v: int, w: int) -> bool:
        for u, lab in adj1[v].items():
            if u in mapping:
                if adj2[w].get(mapping[u]) != lab:
                    return False
        mapped_nbrs = sum(1 for u in adj1[v] if u in mapping)
        return mapped_nbrs == sum(1 for x in adj2[w] if x in used)

    def search(k: int) -> bool:
        if k == len(order):
            return True
        v = order[k]
        for w in by_sig[sig1[v]]:
            if w in used or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if search(k + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if search(0):
        return True, dict(mapping)
    return False, None


def _canon_label(lab: tuple[int, int]) -> tuple[int, int]:
    return (lab[0], lab[1]) if lab[0] <= lab[1] else (lab[1], lab[0])


def rank2(a: int, b: int, labels: Sequence[int] = (1, 2)) -> GCM:
    """The rank-two matrix [[2, -a], [-b, 2]]."""
    return validate_gcm([[2, -a], [-b, 2]], labels)


def direct_sum(*gs: GCM) -> GCM:
    nodes = [v for g in gs for v in g.nodes]
    n = len(nodes)
    m = [[0] * n for _ in range(n)]
    off = 0
    for g in gs:
        for k in range(g.rank):
            for l in range(g.rank):
                m[off + k][off + l] = g.rows[k][l]
        off += g.rank
    return validate_gcm(m, nodes)


def from_edges(nodes: Sequence[int], edges: Iterable[tuple[int, int]] | Iterable[tuple[int, int, int, int]]) -> GCM:
    """Build a GCM from simple edges ``(i, j)`` or labeled edges ``(i, j, a_ij, a_ji)``."""
    pos = {v: k for k, v in enumerate(nodes)}
    m = [[2 if k == l else 0 for l in range(len(nodes))] for k in range(len(nodes))]
    for e in edges:
        i, j = e[0], e[1]
        aij, aji = (e[2], e[3]) if len(e) == 4 else (-1, -1)
        m[pos[i]][pos[j]] = aij
        m[pos[j]][pos[i]] = aji
    return validate_gcm(m, nodes)
