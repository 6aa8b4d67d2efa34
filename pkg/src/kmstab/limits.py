"""Higher inverse limits over spherical posets and E2 pages.

A functor here is contravariant in inclusion: for J contained in J' there
is a restriction map F(J') -> F(J).  Two cochain complexes compute
lim^i F:

* the chain complex, one summand F(J0) per strict chain J0 < ... < Jp;
* the Cech complex of the cover of the poset by its maximal elements,
  one summand F(M0 & ... & Mp) per set of maximal elements.  It needs the
  poset to contain every intersection of maximal elements, which holds for
  spherical posets and for their extended subcategories.

Both are exact over Q and are cross-checked against each other in tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable

from .family import FamilySpec, extend, find_stable_base
from .gcm import GCM
from .invariants import DEFAULT_CUTOFF, GradedInvariantModel, reflection_matrices, restriction_matrix
from .linalg import kernel, rank
from .spherical import SphericalPoset, chains, enumerate_spherical, extended_subcategory, order_isomorphism, verify_observation

DEFAULT_GUARDRAIL = 5_000_000


class ChainDepthExceeded(ValueError):
    pass


class GuardrailExceeded(RuntimeError):
    pass


class ObservationFailed(RuntimeError):
    pass


class NotAComplex(ArithmeticError):
    """delta o delta != 0; signals a sign or convention bug."""


Matrix = list[list[Fraction]]


class PosetFunctor:
    """Finite-dimensional values on poset elements with restriction maps.

    ``restriction(small, big)`` is a (dim small) x (dim big) matrix.
    Values and maps are computed on first use and cached.
    """

    def __init__(self, poset: SphericalPoset, dim: Callable[[frozenset], int],
                 restriction: Callable[[frozenset, frozenset], Matrix], degree: int | None = None):
        self.poset = poset
        self.degree = degree
        self._dim = dim
        self._res = restriction
        self._dims: dict[frozenset, int] = {}
        self._maps: dict[tuple[frozenset, frozenset], Matrix] = {}

    def dim(self, j: frozenset) -> int:
        if j not in self._dims:
            self._dims[j] = self._dim(j)
        return self._dims[j]

    def restriction(self, small: frozenset, big: frozenset) -> Matrix:
        key = (small, big)
        if key not in self._maps:
            self._maps[key] = self._res(small, big)
        return self._maps[key]


def constant_functor(poset: SphericalPoset, dim: int = 1) -> PosetFunctor:
    ident = [[Fraction(int(a == b)) for b in range(dim)] for a in range(dim)]
    return PosetFunctor(poset, lambda j: dim, lambda s, b: ident, degree=None)


def invariant_functor(poset: SphericalPoset, d: int, cutoff: int = DEFAULT_CUTOFF) -> PosetFunctor:
    """J -> degree-d invariants of W_J on the parent's full torus, restrictions by inclusion."""
    g = poset.parent
    models: dict[frozenset, GradedInvariantModel] = {}

    def model(j: frozenset) -> GradedInvariantModel:
        if j not in models:
            models[j] = GradedInvariantModel(reflection_matrices(g, j), cutoff)
        return models[j]

    return PosetFunctor(poset, lambda j: model(j).dim(d),
                        lambda s, b: restriction_matrix(model(s), model(b), d), degree=d)


# --- chain complex ---------------------------------------------------------


@dataclass
class CochainComplex:
    """Sparse coboundaries: ``deltas[p]`` has one row per coordinate of C^(p+1)."""

    dims: list[int]
    deltas: list[list[dict[int, Fraction]]]
    labels: list[list[tuple]] = field(default_factory=list, repr=False)

    def check_square_zero(self) -> None:
        for p in range(len(self.deltas) - 1):
            lower, upper = self.deltas[p], self.deltas[p + 1]
            for r, row in enumerate(upper):
                acc: dict[int, Fraction] = {}
                for c, x in row.items():
                    for k, y in lower[c].items():
                        acc[k] = acc.get(k, 0) + x * y
                if any(acc.values()):
                    raise NotAComplex(f"delta^{p + 1} o delta^{p} is nonzero in row {r}")

    def ranks(self) -> list[int]:
        return [rank(rows) for rows in self.deltas]

    def cohomology(self, i_max: int) -> list[int]:
        ranks = self.ranks()
        out = []
        for i in range(i_max + 1):
            if i >= len(ranks):
                raise ChainDepthExceeded(f"need coboundary out of degree {i}")
            out.append(self.dims[i] - ranks[i] - (ranks[i - 1] if i else 0))
        return out


def _guard(components: int, guardrail: int | None) -> None:
    if guardrail is not None and components > guardrail:
        raise GuardrailExceeded(f"{components} complex components exceed the guardrail of {guardrail}")


def cochain_complex(f: PosetFunctor, p_max: int, guardrail: int | None = DEFAULT_GUARDRAIL, check: bool = True) -> CochainComplex:
    """C^p = sum over strict chains J0 < ... < Jp of F(J0), for p <= p_max.

    (dc)(J0<...<J(p+1)) = rho_{J1->J0} c(J1<...) + sum_{k>=1} (-1)^k c(omit Jk).
    Coboundaries are built for p < p_max.
    """
    cs = chains(f.poset, p_max)
    _guard(sum(cs.counts()), guardrail)
    els = f.poset.elements
    offsets: list[dict[tuple[int, ...], int]] = []
    dims = []
    labels = []
    for p in range(p_max + 1):
        off = {}
        pos = 0
        for ch in cs.of_length(p):
            off[ch] = pos
            pos += f.dim(els[ch[0]])
        offsets.append(off)
        dims.append(pos)
        labels.append(list(off))
    deltas = []
    for p in range(p_max):
        rows: list[dict[int, Fraction]] = []
        src = offsets[p]
        for ch in offsets[p + 1]:
            j0, j1 = els[ch[0]], els[ch[1]]
            n0 = f.dim(j0)
            if not n0:
                continue
            rho = f.restriction(j0, j1)
            head = src[ch[1:]]
            faces = [(src[ch[:k] + ch[k + 1:]], -1 if k % 2 else 1) for k in range(1, p + 2)]
            for a in range(n0):
                row: dict[int, Fraction] = {}
                for b, x in enumerate(rho[a]):
                    if x:
                        row[head + b] = x
                for base, sign in faces:
                    c = base + a
                    w = row.get(c, 0) + sign
                    if w:
                        row[c] = w
                    else:
                        row.pop(c, None)
                rows.append(row)
        deltas.append(rows)
    cx = CochainComplex(dims, deltas, labels)
    if check:
        cx.check_square_zero()
    return cx


# --- Cech complex -----------------------------------------------------------


def cech_applicable(poset: SphericalPoset) -> bool:
    tops = poset.maximal()
    return all(frozenset.intersection(*t) in poset for k in range(2, len(tops) + 1) for t in combinations(tops, k))


def cech_complex(f: PosetFunctor, p_max: int, guardrail: int | None = DEFAULT_GUARDRAIL, check: bool = True) -> CochainComplex:
    """Alternating Cech complex of the cover by down-sets of maximal elements."""
    tops = f.poset.maximal()
    m = len(tops)
    count = sum(len(list(combinations(range(m), k + 1))) for k in range(min(p_max, m - 1) + 1))
    _guard(count, guardrail)
    inter = {}
    offsets: list[dict[tuple[int, ...], int]] = []
    dims = []
    for p in range(p_max + 1):
        off = {}
        pos = 0
        for t in combinations(range(m), p + 1):
            j = frozenset.intersection(*(tops[k] for k in t))
            if j not in f.poset:
                raise ValueError("poset is missing an intersection of maximal elements")
            inter[t] = j
            off[t] = pos
            pos += f.dim(j)
        offsets.append(off)
        dims.append(pos)
    deltas = []
    for p in range(p_max):
        rows: list[dict[int, Fraction]] = []
        src = offsets[p]
        for t in offsets[p + 1]:
            j = inter[t]
            n = f.dim(j)
            parts = []
            for k in range(p + 2):
                face = t[:k] + t[k + 1:]
                parts.append((src[face], -1 if k % 2 else 1, f.restriction(j, inter[face])))
            for a in range(n):
                row: dict[int, Fraction] = {}
                for base, sign, rho in parts:
                    for b, x in enumerate(rho[a]):
                        if x:
                            row[base + b] = row.get(base + b, 0) + sign * x
                rows.append({k: v for k, v in row.items() if v})
        deltas.append(rows)
    cx = CochainComplex(dims, deltas, [list(o) for o in offsets])
    if check:
        cx.check_square_zero()
    return cx


def lim_i(f: PosetFunctor, i_max: int, method: str = "auto", guardrail: int | None = DEFAULT_GUARDRAIL) -> list[int]:
    """Dimensions of lim^0 .. lim^i_max."""
    if method == "auto":
        method = "cech" if cech_applicable(f.poset) else "chains"
    if method == "cech":
        cx = cech_complex(f, i_max + 1, guardrail)
    elif method == "chains":
        cx = cochain_complex(f, i_max + 1, guardrail)
    else:
        raise ValueError(f"unknown method {method!r}")
    return cx.cohomology(i_max)


def inverse_limit_dim(f: PosetFunctor) -> int:
    """Dimension of the compatible families, solved directly over covering pairs."""
    els = f.poset.elements
    offset = {}
    pos = 0
    for j in els:
        offset[j] = pos
        pos += f.dim(j)
    rows = []
    for small, big in f.poset.hasse_edges():
        rho = f.restriction(small, big)
        for a in range(f.dim(small)):
            row = {offset[small] + a: Fraction(-1)}
            for b, x in enumerate(rho[a]):
                if x:
                    row[offset[big] + b] = x
            rows.append(row)
    return len(kernel(rows, pos))


# --- E2 pages and scans -------------------------------------------------------


@dataclass
class E2Page:
    """(i, j) -> dim lim^i H^j with j the cohomological degree (twice the polynomial degree)."""

    table: dict[tuple[int, int], int]
    window: int
    i_max: int
    metadata: dict = field(default_factory=dict)

    def cells(self) -> list[tuple[int, int, int]]:
        return [(i, j, self.table[(i, j)]) for i, j in sorted(self.table)]

    def column(self, i: int) -> dict[int, int]:
        return {j: v for (a, j), v in sorted(self.table.items()) if a == i}


def e2_page(g: GCM, window: int, i_max: int | None = None, poset: SphericalPoset | None = None,
            method: str = "auto", cutoff: int = DEFAULT_CUTOFF, guardrail: int | None = DEFAULT_GUARDRAIL) -> E2Page:
    """All cells with i + j <= window, i <= i_max; odd j are zero in this model."""
    if window < 0:
        raise ValueError("window must be nonnegative")
    i_max = window if i_max is None else min(i_max, window)
    poset = enumerate_spherical(g) if poset is None else poset
    table = {}
    for j in range(window + 1):
        top = min(i_max, window - j)
        if j % 2:
            for i in range(top + 1):
                table[(i, j)] = 0
            continue
        lims = lim_i(invariant_functor(poset, j // 2, cutoff), top, method, guardrail)
        for i, v in enumerate(lims):
            table[(i, j)] = v
    meta = {"poset_size": len(poset), "maximal_elements": len(poset.maximal()), "longest_chain": poset.longest_chain()}
    return E2Page(table, window, i_max, meta)


@dataclass
class StabilityReport:
    base: GCM
    pivot: int
    n0: int
    window: int
    i_max: int
    ns: list[int]
    pages: dict[int, E2Page]
    cofinal_pages: dict[int, E2Page]
    thresholds: dict[tuple[int, int], int]

    @property
    def agreement(self) -> dict[int, bool]:
        return {n: self.pages[n].table == self.cofinal_pages[n].table for n in self.cofinal_pages}

    @property
    def stable(self) -> bool:
        """Every cell repeats its final value at least once before the end of the range."""
        return len(self.ns) > 1 and all(t < self.ns[-1] for t in self.thresholds.values())


def thresholds(series: dict[int, dict[tuple[int, int], int]]) -> dict[tuple[int, int], int]:
    """Per cell, the first n after which the value never changes within the scanned range."""
    ns = sorted(series)
    cells = sorted(set().union(*(series[n].keys() for n in ns)))
    out = {}
    for cell in cells:
        last = series[ns[-1]].get(cell)
        t = ns[-1]
        for n in reversed(ns):
            if series[n].get(cell) != last:
                break
            t = n
        out[cell] = t
    return out


def stability_scan(base: GCM, pivot: int, ns: Iterable[int], window: int, i_max: int | None = None,
                   cofinal: Iterable[int] | None = None, method: str = "auto",
                   guardrail: int | None = DEFAULT_GUARDRAIL) -> StabilityReport:
    """E2 pages of M(n0 + n) over the full poset, and over the extended subcategory for ``cofinal`` n.

    n counts nodes added beyond the stable member M(n0) found by the family scan.
    """
    ns = sorted(set(ns))
    i_max = window if i_max is None else i_max
    found = find_stable_base(base, pivot, max(ns[-1], 1))
    if found.verdict != "Stable":
        raise ObservationFailed(f"family has no stable member within the probe ({found.verdict})")
    n0, m0 = found.n0, found.member
    s0 = enumerate_spherical(m0)
    cofinal = set(ns if cofinal is None else cofinal)
    pages, cof_pages = {}, {}
    for n in ns:
        member = extend(FamilySpec(base, pivot, n0 + n))
        ok, witness = verify_observation(m0, member, m0.nodes)
        if not ok:
            raise ObservationFailed(f"n={n}: subset {sorted(witness)} breaks the observation")
        full = enumerate_spherical(member)
        pages[n] = e2_page(member, window, i_max, full, method, guardrail=guardrail)
        if n in cofinal:
            sub = extended_subcategory(full, m0.nodes)
            if not order_isomorphism(sub, s0, m0.nodes):
                raise ObservationFailed(f"n={n}: extended subcategory is not isomorphic to the base poset")
            cof_pages[n] = e2_page(member, window, i_max, sub, method, guardrail=guardrail)
    th = thresholds({n: p.table for n, p in pages.items()})
    return StabilityReport(base, pivot, n0, window, i_max, ns, pages, cof_pages, th)


@dataclass
class WeylScanReport:
    ns: list[int]
    limits: dict[int, list[int]]
    thresholds: dict[int, int]


def weyl_family_scan(base: GCM, pivot: int, ns: Iterable[int], i_max: int, method: str = "auto",
                     guardrail: int | None = DEFAULT_GUARDRAIL) -> WeylScanReport:
    """lim^i of the constant functor Q over the full spherical poset of each member."""
    ns = sorted(set(ns))
    found = find_stable_base(base, pivot, max(ns[-1], 1))
    n0 = found.n0 or 0
    limits = {}
    for n in ns:
        member = extend(FamilySpec(base, pivot, n0 + n))
        poset = enumerate_spherical(member)
        limits[n] = lim_i(constant_functor(poset), i_max, method, guardrail)
    th = thresholds({n: {(i, 0): v for i, v in enumerate(limits[n])} for n in ns})
    return WeylScanReport(ns, limits, {i: t for (i, _), t in th.items()})
