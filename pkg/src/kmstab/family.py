"""Node-extension families: attach a type-A chain with negative labels at a pivot."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .finite_type import classify
from .gcm import GCM, from_edges, restrict, validate_gcm
from .spherical import verify_observation


class PivotMissing(KeyError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    base: GCM
    pivot: int
    n: int = 0


def relabel_pivot(g: GCM, pivot: int) -> GCM:
    """Relabel so the pivot becomes 0 and the other nodes 1, 2, ... in their current order."""
    if pivot not in g:
        raise PivotMissing(pivot)
    labels = []
    nxt = 1
    for v in g.nodes:
        if v == pivot:
            labels.append(0)
        else:
            labels.append(nxt)
            nxt += 1
    return GCM(tuple(labels), g.rows)


def extend(spec: FamilySpec) -> GCM:
    """Append nodes -1, ..., -n as a simple chain hanging off the pivot."""
    base, pivot, n = spec.base, spec.pivot, spec.n
    if pivot not in base:
        raise PivotMissing(pivot)
    if any(v < 0 for v in base.nodes):
        raise ValueError("base labels must be nonnegative; negative labels are reserved for extension nodes")
    if n < 0:
        raise ValueError("extension length must be nonnegative")
    if n == 0:
        return base
    size = base.rank + n
    m = [[0] * size for _ in range(size)]
    for k in range(base.rank):
        m[k][: base.rank] = list(base.rows[k])
    for k in range(base.rank, size):
        m[k][k] = 2
    chain = [base.index(pivot)] + list(range(base.rank, size))
    for a, b in zip(chain, chain[1:]):
        m[a][b] = m[b][a] = -1
    return validate_gcm(m, list(base.nodes) + [-k for k in range(1, n + 1)])


def chain_gcm(n: int, start: int = 1) -> GCM:
    nodes = list(range(start, start + n))
    return from_edges(nodes, list(zip(nodes, nodes[1:])))


def e_diagram(m: int) -> GCM:
    """The E-series diagram with nodes labeled as in the E(9+n) picture.

    E9 is the chain 7-6-5-4-3-2-1-0 with node 8 attached to 5; E(9+n)
    extends node 0 by -1, ..., -n; E8, E7, E6 drop nodes 0, 1, 2 in turn.
    """
    if m < 6:
        raise ValueError("the E-series starts at E6")
    e9 = from_edges(list(range(9)), [(k, k + 1) for k in range(7)] + [(5, 8)])
    if m >= 9:
        return extend(FamilySpec(e9, 0, m - 9))
    return restrict(e9, range(9 - m, 9))


@dataclass
class StableBaseReport:
    verdict: str  # AlwaysFinite | Stable | NoStableBaseFound
    n_probe: int
    n0: int | None = None
    member: GCM | None = None
    trace: list[tuple[int, str]] = field(default_factory=list)


def describe(g: GCM) -> str:
    parts = []
    for c in classify(g).components:
        parts.append(f"{c.verdict} {c.catalog}" if c.catalog else c.verdict)
    return " + ".join(parts) if parts else "empty"


def find_stable_base(base: GCM, pivot: int, n_probe: int) -> StableBaseReport:
    """Scan members n = 0..n_probe for the first one from which the observation keeps holding.

    The verdict is only as strong as the probe bound: ``Stable`` means every
    extension of M_n0 by 1..(n_probe - n0) nodes passed the exhaustive check.
    """
    if n_probe < 1:
        raise ValueError("n_probe must be at least 1")

    @lru_cache(maxsize=None)
    def member(n: int) -> GCM:
        return extend(FamilySpec(base, pivot, n))

    trace = [(n, describe(member(n))) for n in range(n_probe + 1)]
    if all(classify(member(n)).is_finite for n in range(n_probe + 1)):
        return StableBaseReport("AlwaysFinite", n_probe, trace=trace)
    for n0 in range(n_probe):
        m0 = member(n0)
        if all(verify_observation(m0, member(n0 + k), m0.nodes)[0] for k in range(1, n_probe - n0 + 1)):
            return StableBaseReport("Stable", n_probe, n0, m0, trace)
    return StableBaseReport("NoStableBaseFound", n_probe, trace=trace)

