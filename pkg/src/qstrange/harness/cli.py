"""Command-line interface: ``qstrange <command> ...``.

Exit codes: 0 when every selected check passes (root rejections included),
1 on a verification failure or engine error, 2 on usage or catalog errors.
"""

from __future__ import annotations

import argparse
import sys
from fnmatch import fnmatchcase
from pathlib import Path
from typing import List, Optional, Sequence

from ..families import FAMILIES, strange_validity
from ..identities import CATALOG
from ..strange import QUANTUM_IDS, STRANGE_NAMES
from .catalog import CatalogParseError, Entry, load_catalog
from .report import emit_report
from .runner import ResultCache, exit_code, run_entries, run_suite

USAGE_ERROR = 2


def _entry(mode: str, name: str, params: dict, **options: Optional[int]) -> Entry:
    opts = tuple(sorted((k, v) for k, v in options.items() if v is not None))
    return Entry(mode, name, tuple((k, v) for k, v in params.items() if v is not None), opts, 0)


def _emit(reports, fmt: str) -> int:
    sys.stdout.buffer.write(emit_report(reports, fmt))
    sys.stdout.flush()
    return exit_code(reports)


def _usage(msg: str) -> int:
    print(f"qstrange: error: {msg}", file=sys.stderr)
    return USAGE_ERROR


def cmd_verify(args) -> int:
    names = [n for n, s in CATALOG.items() if s.validity == "formal" and fnmatchcase(n, args.name.replace("-", "_"))]
    if not names:
        return _usage(f"no formal identity matches {args.name!r}")
    given = {"k": args.k, "a": args.a, "i": args.i, "family": args.family, "shifted": bool(args.shifted)}
    entries = []
    for n in names:
        params = {p: given[p] for p in CATALOG[n].params if given.get(p) is not None}
        entries.append(_entry("formal", n, params, order=args.order))
    return _emit(run_entries(entries), args.format)


def cmd_pair(args) -> int:
    if args.base:
        e = _entry("pair", "base", {"family": args.family}, order=args.order, n_max=args.n_max)
    else:
        e = _entry("pair", "family", {"family": args.family, "k": args.k, "a": args.a}, order=args.order, n_max=args.n_max)
    return _emit(run_entries([e]), args.format)


def cmd_strange(args) -> int:
    names = [n for n in STRANGE_NAMES if fnmatchcase(n, args.name)]
    if not names:
        return _usage(f"no strange identity matches {args.name!r}")
    entries = [
        _entry("strange", n, {"k": args.k, "a": args.a}, root=args.root, t_order=args.t_order) for n in names
    ]
    return _emit(run_entries(entries), args.format)


def cmd_quantum(args) -> int:
    if args.id not in QUANTUM_IDS:
        return _usage(f"unknown quantum identity {args.id!r} (choose from {', '.join(QUANTUM_IDS)})")
    e = _entry("quantum", args.id, {"k": args.k, "a": args.a}, root=args.root)
    return _emit(run_entries([e]), args.format)


def cmd_suite(args) -> int:
    try:
        catalog = load_catalog(args.catalog)
    except CatalogParseError as e:
        return _usage(str(e))
    except OSError as e:
        return _usage(f"cannot read catalog: {e}")
    cache = None if args.no_cache else ResultCache(Path(args.cache_dir))
    reports = run_suite(catalog, args.filter, args.order, args.t_order, args.jobs, cache)
    return _emit(reports, args.format)


def _listing() -> List[tuple]:
    rows = []
    for name, spec in CATALOG.items():
        rows.append((name, ",".join(spec.params), spec.validity, spec.doc))
    for name in STRANGE_NAMES:
        fam = "hikami" if name == "zagier" else name
        tags = sorted({strange_validity(fam, k) for k in (1, 2)})
        for tag in tags:
            ks = [k for k in (1, 2) if strange_validity(fam, k) == tag]
            note = "" if len(tags) == 1 else (" (k=1)" if ks == [1] else " (k>=2)")
            rows.append((f"strange:{name}", "k,a", tag, "strange identity at roots of unity" + note))
    for name in QUANTUM_IDS:
        rows.append((f"quantum:{name}", "k,a", "odd_roots", "quantum identity, exact at odd roots"))
    return rows


def cmd_list(args) -> int:
    rows = [r for r in _listing() if args.validity is None or r[2] == args.validity]
    w0 = max((len(r[0]) for r in rows), default=0)
    w1 = max((len(r[1]) for r in rows), default=0)
    w2 = max((len(r[2]) for r in rows), default=0)
    for r in rows:
        print(f"{r[0].ljust(w0)}  {r[1].ljust(w1)}  {r[2].ljust(w2)}  {r[3]}".rstrip())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qstrange", description="Exact verification of q-series identities.")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp):
        sp.add_argument("--format", choices=("human", "json"), default="human")

    v = sub.add_parser("verify", help="verify formal identities as truncated power series")
    v.add_argument("--name", required=True, help="glob over formal identity names")
    v.add_argument("--k", type=int)
    v.add_argument("--a", type=int)
    v.add_argument("--i", type=int)
    v.add_argument("--family", choices=FAMILIES + ("zagier",))
    v.add_argument("--shifted", action="store_true", default=None)
    v.add_argument("--order", type=int)
    fmt(v)
    v.set_defaults(func=cmd_verify)

    pr = sub.add_parser("pair", help="verify a Bailey pair")
    pr.add_argument("--family", required=True)
    pr.add_argument("--k", type=int, default=1)
    pr.add_argument("--a", type=int, default=0)
    pr.add_argument("--base", action="store_true", help="check a named base Slater pair instead of a family pair")
    pr.add_argument("--n-max", type=int)
    pr.add_argument("--order", type=int)
    fmt(pr)
    pr.set_defaults(func=cmd_pair)

    s = sub.add_parser("strange", help="check a strange identity at a root of unity")
    s.add_argument("--name", required=True, help="glob over " + ", ".join(STRANGE_NAMES))
    s.add_argument("--root", type=int, required=True, help="order M of the primitive root")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--a", type=int, default=0)
    s.add_argument("--t-order", type=int)
    fmt(s)
    s.set_defaults(func=cmd_strange)

    q = sub.add_parser("quantum", help="check a quantum identity at a root of unity")
    q.add_argument("--id", required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--a", type=int, default=0)
    q.add_argument("--root", type=int, required=True)
    fmt(q)
    q.set_defaults(func=cmd_quantum)

    su = sub.add_parser("suite", help="run a catalog")
    su.add_argument("--catalog", help="catalog file (default: the bundled catalog)")
    su.add_argument("--filter", help="glob over entry names, families or 'name key=value' labels")
    su.add_argument("--order", type=int, help="override the q-order of formal and pair entries")
    su.add_argument("--t-order", type=int, help="override the t-order of strange entries")
    su.add_argument("--jobs", type=int, default=1)
    su.add_argument("--cache-dir", default=".qstrange-cache")
    su.add_argument("--no-cache", action="store_true")
    fmt(su)
    su.set_defaults(func=cmd_suite)

    ls = sub.add_parser("list", help="list catalog identities")
    ls.add_argument("--validity", choices=("formal", "roots", "odd_roots", "even_roots", "roots_not_2_mod_4", "all_roots"))
    ls.set_defaults(func=cmd_list)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    for opt in ("order", "t_order", "n_max", "jobs", "root"):
        val = getattr(args, opt, None)
        if val is not None and val < (1 if opt in ("jobs", "root") else 0):
            return _usage(f"--{opt.replace('_', '-')} must be positive")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
