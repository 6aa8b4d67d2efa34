"""Rational invariant theory of parabolic Weyl groups acting on the full torus.

For a spherical subset J of an ambient GCM on N nodes, the reflections
s_i (i in J) act on Q^N by s_i(e_k) = e_k - a_ik e_i.  The degree-d
invariants of the induced action on Sym^d(Q^N) model H^{2d}(BH_J; Q).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Iterable, Sequence

from .finite_type import classify, weyl_data
from .gcm import GCM, restrict
from .linalg import Vector, coordinates, identity, kernel

DEFAULT_CUTOFF = 6
DEFAULT_GROUP_BOUND = 1000


class CutoffExceeded(ValueError):
    pass


class NotSpherical(ValueError):
    pass


class GroupTooLarge(RuntimeError):
    pass


class InconsistentSubspace(ArithmeticError):
    """A larger group's invariants were not found inside a smaller group's."""


@dataclass(frozen=True)
class ReflectionAction:
    ambient: tuple[int, ...]
    subset: tuple[int, ...]
    # generator label -> N x N integer matrix; column k is the image of e_k
    generators: dict[int, tuple[tuple[int, ...], ...]] = field(hash=False)
    # generator label -> {k: c} with s_i(e_k) = e_k + c e_i, c != 0, k != i
    shifts: dict[int, dict[int, int]] = field(hash=False, repr=False)

    @property
    def rank(self) -> int:
        return len(self.ambient)


def reflection_matrices(g: GCM, subset: Iterable[int], transpose: bool = False) -> ReflectionAction:
    """Simple reflections of ``subset`` on the span of all nodes of ``g``.

    ``transpose`` swaps to s_i(e_k) = e_k - a_ki e_i, the dual representation.
    """
    subset = tuple(v for v in g.nodes if v in set(subset))
    for v in subset:
        g.index(v)
    n = g.rank
    gens, shifts = {}, {}
    for i in subset:
        ii = g.index(i)
        m = [list(r) for r in identity(n)]
        sh = {}
        for k in range(n):
            a = g.rows[k][ii] if transpose else g.rows[ii][k]
            m[ii][k] -= a
            if k != ii and a:
                sh[k] = -a
        gens[i] = tuple(tuple(r) for r in m)
        shifts[i] = sh
    return ReflectionAction(g.nodes, subset, gens, shifts)


def monomials(n: int, d: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree d in n variables, lexicographically descending."""
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for k in combo:
            e[k] += 1
        out.append(tuple(e))
    return out


def _reflect_monomial(expo: tuple[int, ...], i: int, shifts: dict[int, int]) -> dict[tuple[int, ...], int]:
    """Image of a monomial under s_i: e_i -> -e_i, e_k -> e_k + c_k e_i."""
    terms = {expo: -1 if expo[i] % 2 else 1}
    for k, c in shifts.items():
        a = expo[k]
        if not a:
            continue
        nxt: dict[tuple[int, ...], int] = {}
        for e, coef in terms.items():
            for t in range(a + 1):
                f = list(e)
                f[k] -= t
                f[i] += t
                f = tuple(f)
                nxt[f] = nxt.get(f, 0) + coef * comb(a, t) * c**t
        terms = nxt
    return terms


def symmetric_power(act: ReflectionAction, label: int, d: int) -> list[dict[int, int]]:
    """Columns of Sym^d of one generator on the monomial basis (column j = image of monomial j)."""
    basis = monomials(act.rank, d)
    pos = {e: k for k, e in enumerate(basis)}
    i = act.ambient.index(label)
    return [{pos[e]: c for e, c in _reflect_monomial(m, i, act.shifts[label]).items() if c} for m in basis]


def invariant_basis(act: ReflectionAction, d: int, cutoff: int = DEFAULT_CUTOFF) -> list[tuple[int, Vector]]:
    """Reduced echelon basis of the degree-d invariants, over the monomial basis."""
    if d > cutoff:
        raise CutoffExceeded(f"degree {d} exceeds cutoff {cutoff}")
    size = comb(act.rank + d - 1, d) if act.rank else int(d == 0)
    if not act.subset:
        return [(k, {k: Fraction(1)}) for k in range(size)]
    rows: list[dict[int, int]] = []
    for label in act.subset:
        cols = symmetric_power(act, label, d)
        eqs: dict[int, dict[int, int]] = {}
        for j, col in enumerate(cols):
            col = dict(col)
            col[j] = col.get(j, 0) - 1
            for r, c in col.items():
                if c:
                    eqs.setdefault(r, {})[j] = c
        rows.extend(eqs[r] for r in sorted(eqs))
    return kernel(rows, size)


@dataclass
class GradedInvariantModel:
    """Invariant bases for one subset, computed per degree on demand."""

    action: ReflectionAction
    cutoff: int = DEFAULT_CUTOFF
    _bases: dict[int, list[tuple[int, Vector]]] = field(default_factory=dict, repr=False)

    @property
    def subset(self) -> tuple[int, ...]:
        return self.action.subset

    def basis(self, d: int) -> list[tuple[int, Vector]]:
        if d not in self._bases:
            self._bases[d] = invariant_basis(self.action, d, self.cutoff)
        return self._bases[d]

    def dim(self, d: int) -> int:
        return len(self.basis(d))


def invariant_model(g: GCM, subset: Iterable[int], cutoff: int = DEFAULT_CUTOFF) -> GradedInvariantModel:
    return GradedInvariantModel(reflection_matrices(g, subset), cutoff)


def restriction_matrix(small: GradedInvariantModel, big: GradedInvariantModel, d: int) -> list[list[Fraction]]:
    """Coordinates of the big-group invariants in the small-group basis.

    Shape (dim small) x (dim big); column b expresses big basis vector b.
    """
    if not set(small.subset) <= set(big.subset):
        raise ValueError("restriction needs J contained in J'")
    if small.action.ambient != big.action.ambient:
        raise ValueError("models live on different ambient spaces")
    sb = small.basis(d)
    cols = []
    for _, v in big.basis(d):
        try:
            cols.append(coordinates(sb, v))
        except ArithmeticError as exc:
            raise InconsistentSubspace(str(exc)) from exc
    return [[cols[b][a] for b in range(len(cols))] for a in range(len(sb))]


def series_product(factors: Sequence[int], ones: int, cutoff: int) -> list[int]:
    """Coefficients of prod 1/(1 - t^f) * 1/(1 - t)^ones up to t^cutoff."""
    coeffs = [1] + [0] * cutoff
    for f in list(factors) + [1] * ones:
        for k in range(f, cutoff + 1):
            coeffs[k] += coeffs[k - f]
    return coeffs


def hilbert_series(g: GCM, subset: Iterable[int], ambient_rank: int | None = None, cutoff: int = DEFAULT_CUTOFF) -> list[int]:
    """Chevalley-degree formula for the invariant Hilbert series (polynomial grading)."""
    subset = frozenset(subset)
    n = g.rank if ambient_rank is None else ambient_rank
    if len(subset) > n:
        raise ValueError("subset larger than the ambient rank")
    cls = classify(restrict(g, subset))
    if not cls.is_finite:
        raise NotSpherical(sorted(subset))
    degrees = [d for t in cls.catalog_types() for d in weyl_data(t).degrees]
    return series_product(degrees, n - len(subset), cutoff)


def _matmul_int(a: tuple[tuple[int, ...], ...], b: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def group_closure(gens: Iterable[tuple[tuple[int, ...], ...]], n: int, bound: int = DEFAULT_GROUP_BOUND) -> list[tuple[tuple[int, ...], ...]]:
    ident = tuple(tuple(r) for r in identity(n))
    gens = list(gens)
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                x = _matmul_int(w, s)
                if x not in elems:
                    elems.add(x)
                    nxt.append(x)
                    if len(elems) > bound:
                        raise GroupTooLarge(f"group has more than {bound} elements")
        frontier = nxt
    return sorted(elems)


def _det_one_minus_tw(w: tuple[tuple[int, ...], ...]) -> list[int]:
    """Coefficients of det(I - t w) by Faddeev-LeVerrier on w."""
    n = len(w)
    coeffs = [1]
    m = [[0] * n for _ in range(n)]
    c_prev = 1
    for k in range(1, n + 1):
        # M_k = w M_{k-1} + c_{k-1} I
        wm = [[sum(w[i][l] * m[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        m = [[wm[i][j] + (c_prev if i == j else 0) for j in range(n)] for i in range(n)]
        tr = sum(sum(w[i][l] * m[l][i] for l in range(n)) for i in range(n))
        c_prev = -tr // k
        coeffs.append(c_prev)
    return coeffs


def _invert_series(p: list[int], cutoff: int) -> list[int]:
    out = [0] * (cutoff + 1)
    out[0] = 1
    for k in range(1, cutoff + 1):
        out[k] = -sum(p[j] * out[k - j] for j in range(1, min(k, len(p) - 1) + 1))
    return out


def molien_oracle(act: ReflectionAction, cutoff: int, bound: int = DEFAULT_GROUP_BOUND) -> list[int]:
    """Average of 1/det(I - t w) over the generated group, expanded to t^cutoff."""
    n = act.rank
    group = group_closure(act.generators.values(), n, bound)
    by_poly: dict[tuple[int, ...], int] = {}
    for w in group:
        p = tuple(_det_one_minus_tw(w))
        by_poly[p] = by_poly.get(p, 0) + 1
    total = [Fraction(0)] * (cutoff + 1)
    for p, mult in by_poly.items():
        for k, c in enumerate(_invert_series(list(p), cutoff)):
            total[k] += mult * c
    out = []
    for c in total:
        v = c / len(group)
        if v.denominator != 1:
            raise ArithmeticError("Molien average is not integral")
        out.append(int(v))
    return out
