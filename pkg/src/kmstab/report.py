"""Table rendering, canonical hashing and the on-disk result cache."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .gcm import GCM

# bump whenever a sign, basis or grading convention changes
CONVENTION_VERSION = "reflect-row/v1"


class CacheCorrupt(RuntimeError):
    pass


def fmt_number(x: int | Fraction) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def render_table(headers: Sequence[str], rows: Sequence[Sequence[object]], fmt: str = "markdown") -> str:
    cells = [[fmt_number(c) if isinstance(c, (int, Fraction)) and not isinstance(c, bool) else str(c) for c in r] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(headers)
        w.writerows(cells)
        return buf.getvalue()
    if fmt != "markdown":
        raise ValueError(f"unknown format {fmt!r}")
    lines = ["| " + " | ".join(headers) + " |", "|" + "|".join("---" for _ in headers) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in cells]
    return "\n".join(lines) + "\n"


def canonical_form(g: GCM) -> str:
    """Serialization independent of node-list order."""
    order = sorted(g.nodes)
    entries = sorted(tuple(e) for e in g.entries())
    return json.dumps({"nodes": order, "entries": [list(e) for e in entries]}, separators=(",", ":"))


def canonical_hash(g: GCM) -> str:
    return hashlib.sha256(canonical_form(g).encode()).hexdigest()


@dataclass(frozen=True)
class RunConfig:
    cutoff: int = 6
    depth: int = 4
    i_max: int = 8
    group_bound: int = 1000
    guardrail: int = 5_000_000
    cache_dir: str | None = None
    fmt: str = "markdown"

    def __post_init__(self) -> None:
        for name in ("cutoff", "depth", "i_max", "group_bound", "guardrail"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    def key_fields(self) -> dict:
        d = asdict(self)
        d.pop("cache_dir")
        return d


def default_cache_dir() -> Path:
    env = os.environ.get("KMSTAB_CACHE_DIR")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "kmstab"


class ResultCache:
    """Report text keyed by input hash, command, arguments, config and convention version."""

    def __init__(self, root: Path):
        self.root = Path(root)

    @staticmethod
    def key(gcm_hashes: Sequence[str], command: str, args: dict, config: RunConfig) -> str:
        payload = json.dumps(
            {"inputs": list(gcm_hashes), "command": command, "args": args,
             "config": config.key_fields(), "convention": CONVENTION_VERSION},
            sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, key: str) -> str | None:
        path = self._path(key)
        if not path.exists():
            return None
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise CacheCorrupt(f"{path}: {exc}") from exc
        if not isinstance(doc, dict) or doc.get("key") != key or not isinstance(doc.get("report"), str):
            raise CacheCorrupt(f"{path}: entry does not match its key")
        return doc["report"]

    def put(self, key: str, report: str) -> None:
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump({"key": key, "report": report}, fh)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
