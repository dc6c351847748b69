"""Line-oriented catalog of verification entries.

One entry per line::

    <mode> <name> [key=value ...]

``mode`` is one of ``formal``, ``pair``, ``strange`` or ``quantum``.  Values
are integers, identifiers, ``true``/``false``, comma lists (``1,3,5``) or
inclusive ranges (``0..k-1``) whose bounds may refer to parameters given
earlier on the same line.  Lists and ranges expand into the cartesian
product.  The reserved keys ``order`` (formal and pair), ``n_max`` (pair),
``t_order`` (strange) and ``root`` (strange, quantum) set run options.
``#`` starts a comment.  See ``docs/catalog.md`` for the full grammar.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

MODES = ("formal", "pair", "strange", "quantum")
OPTION_KEYS = ("order", "n_max", "t_order", "root")

Value = Union[int, str, bool]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_INT = re.compile(r"-?\d+$")
_BOUND = re.compile(r"(?:(-?\d+)|([A-Za-z_][A-Za-z0-9_]*)\s*(?:([+-])\s*(\d+))?)$")


class CatalogParseError(ValueError):
    def __init__(self, msg: str, line: int, column: int, source: str = "<catalog>"):
        super().__init__(f"{source}:{line}:{column}: {msg}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Entry:
    mode: str
    name: str
    params: Tuple[Tuple[str, Value], ...]
    options: Tuple[Tuple[str, int], ...]
    line: int

    @property
    def param_dict(self) -> Dict[str, Value]:
        return dict(self.params)

    def option(self, key: str, default: Optional[int] = None) -> Optional[int]:
        return dict(self.options).get(key, default)

    def with_options(self, **overrides: Optional[int]) -> "Entry":
        opts = dict(self.options)
        opts.update({k: v for k, v in overrides.items() if v is not None})
        return Entry(self.mode, self.name, self.params, tuple(sorted(opts.items())), self.line)

    def label(self) -> str:
        ps = " ".join(f"{k}={_fmt(v)}" for k, v in self.params)
        return f"{self.name} {ps}".strip()

    def digest(self) -> str:
        return hashlib.sha256(repr((self.mode, self.name, self.params, self.options)).encode()).hexdigest()[:16]


def _fmt(v: Value) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


@dataclass(frozen=True)
class Catalog:
    entries: Tuple[Entry, ...]
    digest: str
    source: str


def _atom(tok: str) -> Value:
    if _INT.match(tok):
        return int(tok)
    if tok in ("true", "false"):
        return tok == "true"
    if _IDENT.match(tok):
        return tok
    raise ValueError(f"bad value {tok!r}")


def _bound(tok: str, known: Tuple[str, ...]) -> Tuple[Optional[int], Optional[str], int]:
    m = _BOUND.match(tok.strip())
    if not m:
        raise ValueError(f"bad range bound {tok!r}")
    if m.group(1) is not None:
        return int(m.group(1)), None, 0
    ref = m.group(2)
    if ref not in known:
        raise ValueError(f"range bound refers to {ref!r}, which is not set earlier on the line")
    off = int(m.group(4) or 0) * (-1 if m.group(3) == "-" else 1)
    return None, ref, off


def _parse_value(raw: str, known: Tuple[str, ...]):
    """Return ``fixed -> list of values``."""
    if ".." in raw:
        lo_s, hi_s = raw.split("..", 1)
        lo, hi = _bound(lo_s, known), _bound(hi_s, known)

        def resolve(b, fixed):
            const, ref, off = b
            if ref is None:
                return const
            base = fixed[ref]
            if not isinstance(base, int) or isinstance(base, bool):
                raise ValueError(f"range bound {ref!r} is not an integer")
            return base + off

        return lambda fixed: list(range(resolve(lo, fixed), resolve(hi, fixed) + 1))
    vals = [_atom(t) for t in raw.split(",")]
    return lambda fixed: vals


def _expand(specs: List[Tuple[str, object]]) -> Iterator[Dict[str, Value]]:
    def rec(i: int, fixed: Dict[str, Value]):
        if i == len(specs):
            yield dict(fixed)
            return
        key, fn = specs[i]
        for v in fn(fixed):
            fixed[key] = v
            yield from rec(i + 1, fixed)
        fixed.pop(key, None)

    yield from rec(0, {})


def parse_catalog(text: str, source: str = "<catalog>") -> Catalog:
    entries: List[Entry] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        toks = [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line)]
        mode, col = toks[0]
        if mode not in MODES:
            raise CatalogParseError(f"unknown mode {mode!r} (expected one of {', '.join(MODES)})", lineno, col, source)
        if len(toks) < 2:
            raise CatalogParseError("missing entry name", lineno, len(line.rstrip()) + 1, source)
        name, col = toks[1]
        if not _IDENT.match(name):
            raise CatalogParseError(f"bad entry name {name!r}", lineno, col, source)
        specs: List[Tuple[str, object]] = []
        seen: List[str] = []
        for tok, col in toks[2:]:
            if "=" not in tok:
                raise CatalogParseError(f"expected key=value, got {tok!r}", lineno, col, source)
            key, val = tok.split("=", 1)
            if not _IDENT.match(key):
                raise CatalogParseError(f"bad key {key!r}", lineno, col, source)
            if key in seen:
                raise CatalogParseError(f"duplicate key {key!r}", lineno, col, source)
            try:
                specs.append((key, _parse_value(val, tuple(seen))))
            except ValueError as e:
                raise CatalogParseError(str(e), lineno, col + len(key) + 1, source) from None
            seen.append(key)
        try:
            combos = list(_expand(specs))
        except ValueError as e:
            raise CatalogParseError(str(e), lineno, 1, source) from None
        for combo in combos:
            opts = {}
            for k in OPTION_KEYS:
                if k in combo:
                    v = combo.pop(k)
                    if not isinstance(v, int) or isinstance(v, bool):
                        raise CatalogParseError(f"option {k} must be an integer", lineno, 1, source)
                    opts[k] = v
            entries.append(Entry(mode, name, tuple(combo.items()), tuple(sorted(opts.items())), lineno))
    digest = hashlib.sha256(text.encode()).hexdigest()[:16]
    return Catalog(tuple(entries), digest, source)


def default_catalog_path() -> Path:
    return Path(__file__).with_name("default.catalog")


def load_catalog(path: Optional[Union[str, Path]] = None) -> Catalog:
    p = Path(path) if path is not None else default_catalog_path()
    return parse_catalog(p.read_text(encoding="utf-8"), str(p))


def matches(entry: Entry, pattern: Optional[str]) -> bool:
    """Glob over ``name``, ``mode:name`` and ``name key=value ...``; a family value also counts as a name.

    Hyphens in the pattern match underscores, so ``andrews-gordon*`` works.
    """
    if not pattern:
        return True
    from fnmatch import fnmatchcase

    pattern = pattern.replace("-", "_")
    names = [entry.name, f"{entry.mode}:{entry.name}", entry.label()]
    fam = entry.param_dict.get("family")
    if isinstance(fam, str):
        names.append(fam)
    return any(fnmatchcase(n, pattern) for n in names)

