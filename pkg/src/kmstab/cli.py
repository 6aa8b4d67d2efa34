"""Command-line front end: ``kmstab <command> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable

from . import finite_type as ft
from . import invariants as inv
from .family import FamilySpec, PivotMissing, e_diagram, extend, find_stable_base
from .gcm import GCM, GCMFormatError, InvalidGCM, UnknownLabel, dynkin_graph, graph_isomorphic, restrict
from .limits import (ChainDepthExceeded, GuardrailExceeded, NotAComplex, ObservationFailed, e2_page,
                     stability_scan, weyl_family_scan)
from .report import CacheCorrupt, ResultCache, RunConfig, canonical_hash, default_cache_dir, fmt_number, render_table
from .shift import sigma_check
from .spherical import chains, enumerate_spherical, extended_subcategory, is_cofinal, verify_observation

COMMANDS = ("validate", "classify", "roots", "poset", "cofinal-check", "extend", "stable-base", "weyl",
            "hilbert", "invariants", "e2", "stability", "weyl-scan", "sigma-check")


class BadInput(ValueError):
    pass


def read_gcm(path: str) -> GCM:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise BadInput(str(exc)) from exc
    return GCM.from_json(text)


def parse_subset(text: str) -> frozenset[int]:
    text = text.strip()
    if not text:
        return frozenset()
    try:
        return frozenset(int(x) for x in text.split(","))
    except ValueError as exc:
        raise BadInput(f"bad subset {text!r}") from exc


def parse_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return sorted({int(x) for x in text.split(",")})
    except ValueError as exc:
        raise BadInput(f"bad range {text!r}") from exc


def _named_diagram(g: GCM) -> str:
    """Name the E-series diagram the graph matches, if any."""
    if g.rank >= 6:
        ok, _ = graph_isomorphic(dynkin_graph(g), dynkin_graph(e_diagram(g.rank)))
        if ok:
            return f"graph-isomorphic to E{g.rank}"
    return ""


# --- commands ----------------------------------------------------------------


def cmd_validate(a, cfg: RunConfig) -> str:
    g = read_gcm(a.gcm)
    return f"valid GCM of rank {g.rank}\nnodes: {' '.join(map(str, g.nodes))}\n"


def cmd_classify(a, cfg: RunConfig) -> str:
    g = read_gcm(a.gcm)
    cls = ft.classify(g)
    rows = []
    for k, c in enumerate(cls.components, 1):
        rows.append([f"component {k}", " ".join(map(str, c.nodes)), c.verdict, str(c.catalog or ""),
                     c.determinant, _named_diagram(restrict(g, c.nodes))])
    out = render_table(["component", "nodes", "verdict", "catalog", "determinant", "note"], rows, cfg.fmt)
    if cfg.fmt == "markdown":
        out += f"\nfinite type: {'yes' if cls.is_finite else 'no'}\n"
    return out


def cmd_roots(a, cfg: RunConfig) -> str:
    g = read_gcm(a.gcm)
    roots = sorted(ft.positive_roots(g, a.cap), key=lambda v: (sum(v), v))
    rows = [[sum(v), " ".join(map(str, v))] for v in roots]
    out = render_table(["height", "coefficients (" + " ".join(map(str, g.nodes)) + ")"], rows, cfg.fmt)
    if cfg.fmt == "markdown":
        out += f"\npositive roots: {len(roots)}\n"
    return out


def cmd_poset(a, cfg: RunConfig) -> str:
    g = read_gcm(a.gcm)
    p = enumerate_spherical(g)
    counts = chains(p, cfg.depth).counts()
    out = render_table(["elements", "hasse_edges", "maximal", "longest_chain", f"chains_by_length_0..{cfg.depth}"],
                       [[len(p), len(p.hasse_edges()), len(p.maximal()), p.longest_chain(), " ".join(map(str, counts))]],
                       cfg.fmt)
    if a.list:
        out += "\n" + render_table(["size", "subset"], [[len(j), " ".join(map(str, sorted(j)))] for j in p], "csv")
    return out


def cmd_cofinal_check(a, cfg: RunConfig) -> str:
    base, ext = read_gcm(a.base), read_gcm(a.extended)
    ok, witness = verify_observation(base, ext, base.nodes)
    lines = [f"observation: {'holds' if ok else 'fails'}"]
    if not ok:
        lines.append(f"witness: {{{' '.join(map(str, sorted(witness)))}}}")
    full = enumerate_spherical(ext)
    sub = extended_subcategory(full, base.nodes)
    cof, info = is_cofinal(sub, full)
    lines.append(f"cofinal: {'yes' if cof else 'no'} ({len(sub)} of {len(full)} elements)")
    if cof and a.witnesses:
        for j in full:
            lines.append(f"  {{{' '.join(map(str, sorted(j)))}}} -> {{{' '.join(map(str, sorted(info[j])))}}}")
    elif not cof:
        lines.append(f"no least upper bound for {{{' '.join(map(str, sorted(info)))}}}")
    return "\n".join(lines) + "\n"


def cmd_extend(a, cfg: RunConfig) -> str:
    g = read_gcm(a.gcm)
    return extend(FamilySpec(g, a.pivot, a.n)).to_json() + "\n"


def cmd_stable_base(a, cfg: RunConfig) -> str:
    g = read_gcm(a.gcm)
    rep = find_stable_base(g, a.pivot, a.probe)
    rows = [[n, desc, "stable base" if rep.n0 == n else ""] for n, desc in rep.trace]
    out = render_table(["n", "member", "mark"], rows, cfg.fmt)
    summary = f"verdict: {rep.verdict} (up to n_probe = {rep.n_probe})"
    if rep.n0 is not None:
        note = _named_diagram(rep.member)
        summary += f"; n0 = {rep.n0}" + (f", {note}" if note else "")
    return out + ("\n" + summary + "\n" if cfg.fmt == "markdown" else "")


def cmd_weyl(a, cfg: RunConfig) -> str:
    w = ft.weyl_data(a.type)
    return render_table(["type", "order", "degrees", "positive_roots"],
                        [[str(w.catalog), w.order, " ".join(map(str, w.degrees)), w.positive_root_count]], cfg.fmt)


def cmd_hilbert(a, cfg: RunConfig) -> str:
    g = read_gcm(a.gcm)
    j = parse_subset(a.subset)
    n = a.ambient or g.rank
    if n != g.rank:
        raise BadInput("the kernel and Molien routes need the ambient rank to equal the GCM rank")
    formula = inv.hilbert_series(g, j, n, cfg.cutoff)
    act = inv.reflection_matrices(g, j)
    kernel_dims = [len(inv.invariant_basis(act, d, cfg.cutoff)) for d in range(cfg.cutoff + 1)]
    molien = inv.molien_oracle(act, cfg.cutoff, cfg.group_bound)
    rows = [[d, 2 * d, formula[d], formula[d] == kernel_dims[d], formula[d] == molien[d]] for d in range(cfg.cutoff + 1)]
    return render_table(["poly_degree", "cohom_degree", "dimension", "kernel_agrees", "molien_agrees"], rows, cfg.fmt)


def _poly(vec: dict, monos: list[tuple[int, ...]], nodes: tuple[int, ...]) -> str:
    terms = []
    for k, c in sorted(vec.items()):
        mono = "*".join(f"x{nodes[v]}" + (f"^{e}" if e > 1 else "") for v, e in enumerate(monos[k]) if e) or "1"
        terms.append(f"{fmt_number(c)}*{mono}")
    return " + ".join(terms)


def cmd_invariants(a, cfg: RunConfig) -> str:
    g = read_gcm(a.gcm)
    j = parse_subset(a.subset)
    act = inv.reflection_matrices(g, j)
    basis = inv.invariant_basis(act, a.degree, cfg.cutoff)
    monos = inv.monomials(g.rank, a.degree)
    rows = [[k, _poly(v, monos, g.nodes)] for k, (_, v) in enumerate(basis)]
    return render_table(["index", "polynomial"], rows, cfg.fmt)


def _e2_grid(page, fmt: str) -> str:
    if fmt == "csv":
        return render_table(["i", "j", "dim"], page.cells(), "csv")
    cols = range(page.i_max + 1)
    rows = []
    for j in range(page.window + 1):
        rows.append([f"j={j}"] + [page.table.get((i, j), "") for i in cols])
    return render_table(["E2"] + [f"i={i}" for i in cols], rows, "markdown")


def cmd_e2(a, cfg: RunConfig) -> str:
    g = read_gcm(a.gcm)
    i_max = min(cfg.i_max if a.imax is None else a.imax, a.window)
    page = e2_page(g, a.window, i_max, method=a.method, cutoff=cfg.cutoff, guardrail=cfg.guardrail)
    out = _e2_grid(page, cfg.fmt)
    if cfg.fmt == "markdown":
        meta = ", ".join(f"{k}={v}" for k, v in sorted(page.metadata.items()))
        out += f"\n{meta}\n"
    return out


def cmd_stability(a, cfg: RunConfig) -> str:
    g = read_gcm(a.gcm)
    ns = parse_range(a.n_range)
    cofinal = parse_range(a.cofinal) if a.cofinal else []
    rep = stability_scan(g, a.pivot, ns, a.window, a.imax, cofinal, a.method, cfg.guardrail)
    parts = [f"stable base n0 = {rep.n0}; n counts nodes beyond it\n"]
    for n in rep.ns:
        parts.append(f"## n = {n}\n")
        parts.append(_e2_grid(rep.pages[n], cfg.fmt))
        if n in rep.cofinal_pages:
            parts.append(f"cofinal agreement: {'yes' if rep.agreement[n] else 'NO'}\n")
    parts.append("## thresholds\n")
    rows = [[i, j, t, rep.pages[rep.ns[-1]].table[(i, j)]] for (i, j), t in sorted(rep.thresholds.items())]
    parts.append(render_table(["i", "j", "threshold_n", "stable_value"], rows, cfg.fmt))
    parts.append(f"verdict: {'stable' if rep.stable else 'undetermined'} within n <= {rep.ns[-1]}\n")
    return "\n".join(parts)


def cmd_weyl_scan(a, cfg: RunConfig) -> str:
    g = read_gcm(a.gcm)
    ns = parse_range(a.n_range)
    i_max = cfg.i_max if a.imax is None else a.imax
    rep = weyl_family_scan(g, a.pivot, ns, i_max, a.method, cfg.guardrail)
    rows = [[n] + rep.limits[n] for n in rep.ns]
    out = render_table(["n"] + [f"lim{i}" for i in range(i_max + 1)], rows, cfg.fmt)
    out += "\n" + render_table(["i", "threshold_n"], sorted(rep.thresholds.items()), cfg.fmt)
    return out


def cmd_sigma_check(a, cfg: RunConfig) -> str:
    rows = [[m1, m2, ok, det] for m1, m2, ok, det in sigma_check(a.bound)]
    out = render_table(["m1", "m2", "law_holds", "det"], rows, cfg.fmt)
    if cfg.fmt == "markdown":
        out += f"\nall hold: {all(r[2] and r[3] == 1 for r in rows)}\n"
    return out


HANDLERS: dict[str, Callable] = {
    "validate": cmd_validate, "classify": cmd_classify, "roots": cmd_roots, "poset": cmd_poset,
    "cofinal-check": cmd_cofinal_check, "extend": cmd_extend, "stable-base": cmd_stable_base,
    "weyl": cmd_weyl, "hilbert": cmd_hilbert, "invariants": cmd_invariants, "e2": cmd_e2,
    "stability": cmd_stability, "weyl-scan": cmd_weyl_scan, "sigma-check": cmd_sigma_check,
}

# commands whose reports are worth caching, with the arguments that name GCM files
CACHED = {"poset": ("gcm",), "hilbert": ("gcm",), "e2": ("gcm",), "stability": ("gcm",),
          "weyl-scan": ("gcm",), "cofinal-check": ("base", "extended")}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kmstab", description="Spherical posets, invariant theory and E2 pages for Kac-Moody families.")
    p.add_argument("--format", dest="fmt", choices=["markdown", "csv"], default="markdown")
    p.add_argument("--cutoff", type=int, default=6, help="largest polynomial degree")
    p.add_argument("--depth", type=int, default=4, help="chain depth p_max")
    p.add_argument("--imax", dest="global_imax", type=int, default=8)
    p.add_argument("--group-bound", type=int, default=1000)
    p.add_argument("--guardrail", type=int, default=5_000_000)
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("-o", "--output", default=None, help="write the report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    def gcm_cmd(name, **kw):
        sp = sub.add_parser(name, **kw)
        sp.add_argument("gcm", nargs="?", default="-", help="GCM JSON file, or - for stdin")
        return sp

    gcm_cmd("validate")
    gcm_cmd("classify")
    sp = gcm_cmd("roots")
    sp.add_argument("--cap", type=int, default=10_000)
    sp = gcm_cmd("poset")
    sp.add_argument("--list", action="store_true")
    sp = sub.add_parser("cofinal-check")
    sp.add_argument("base")
    sp.add_argument("extended")
    sp.add_argument("--witnesses", action="store_true")
    sp = gcm_cmd("extend")
    sp.add_argument("--pivot", type=int, required=True)
    sp.add_argument("-n", type=int, required=True)
    sp = gcm_cmd("stable-base")
    sp.add_argument("--pivot", type=int, required=True)
    sp.add_argument("--probe", type=int, default=8)
    sp = sub.add_parser("weyl")
    sp.add_argument("type")
    sp = gcm_cmd("hilbert")
    sp.add_argument("--subset", default="")
    sp.add_argument("--ambient", type=int, default=None)
    sp = gcm_cmd("invariants")
    sp.add_argument("--subset", default="")
    sp.add_argument("--degree", type=int, required=True)
    sp = gcm_cmd("e2")
    sp.add_argument("--window", type=int, required=True)
    sp.add_argument("--imax", type=int, default=None)
    sp.add_argument("--method", choices=["auto", "chains", "cech"], default="auto")
    sp = gcm_cmd("stability")
    sp.add_argument("--pivot", type=int, required=True)
    sp.add_argument("--n-range", default="0..5")
    sp.add_argument("--cofinal", default="")
    sp.add_argument("--window", type=int, required=True)
    sp.add_argument("--imax", type=int, default=None)
    sp.add_argument("--method", choices=["auto", "chains", "cech"], default="auto")
    sp = gcm_cmd("weyl-scan")
    sp.add_argument("--pivot", type=int, required=True)
    sp.add_argument("--n-range", default="0..5")
    sp.add_argument("--imax", type=int, default=None)
    sp.add_argument("--method", choices=["auto", "chains", "cech"], default="auto")
    sp = sub.add_parser("sigma-check")
    sp.add_argument("--bound", type=int, default=8)
    return p


MODULE_ERRORS = (ft.CatalogMismatch, ft.NonTerminating, inv.CutoffExceeded, inv.NotSpherical, inv.GroupTooLarge,
                 inv.InconsistentSubspace, ChainDepthExceeded, GuardrailExceeded, ObservationFailed,
                 NotAComplex, CacheCorrupt, PivotMissing, UnknownLabel)
INPUT_ERRORS = (BadInput, GCMFormatError, InvalidGCM)


def _cache_key(a, cfg: RunConfig) -> str | None:
    names = CACHED.get(a.command)
    if names is None or any(getattr(a, n) == "-" for n in names):
        return None
    hashes = [canonical_hash(read_gcm(getattr(a, n))) for n in names]
    args = {k: v for k, v in sorted(vars(a).items()) if k not in names and k not in {"output", "no_cache", "cache_dir"}}
    return ResultCache.key(hashes, a.command, args, cfg)


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        cfg = RunConfig(a.cutoff, a.depth, a.global_imax, a.group_bound, a.guardrail, a.cache_dir, a.fmt)
        cache = None if a.no_cache else ResultCache(Path(a.cache_dir) if a.cache_dir else default_cache_dir())
        key = _cache_key(a, cfg) if cache else None
        report = cache.get(key) if key else None
        if report is None:
            report = HANDLERS[a.command](a, cfg)
            if key:
                cache.put(key, report)
    except INPUT_ERRORS as exc:
        print(f"error: BadInput: {exc}", file=sys.stderr)
        return 2
    except MODULE_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if a.output:
        Path(a.output).write_text(report, encoding="utf-8")
    else:
        stdout.write(report)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
