"""Execute catalog entries and collect run reports."""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .. import __version__
from ..bailey import base_pair, build_family_pair, closed_beta, verify_pair
from ..identities import UnknownIdentity, lookup, verify_identity
from ..qfunctions import BadParams
from ..strange import QUANTUM_IDS, STRANGE_NAMES, StrangeReport, quantum_check, strange_check
from .catalog import Catalog, Entry, matches
from .report import RunReport, rational

DEFAULTS = {"formal": {"order": 30}, "pair": {"order": 25, "n_max": 4}, "strange": {"t_order": 4}, "quantum": {}}
PAIR_NAMES = ("family", "base")


class UsageError(ValueError):
    pass


def _qwitness(keys: Tuple[str, ...], w) -> Dict[str, object]:
    *head, expected, got = w
    out: Dict[str, object] = dict(zip(keys, head))
    out["expected"] = rational(expected)
    out["got"] = rational(got)
    return out


def _from_strange(r: StrangeReport) -> Tuple[str, Optional[dict], str]:
    return r.status, r.witness(), r.reason


def _run_formal(e: Entry, opts: Dict[str, int]):
    spec = lookup(e.name)
    if spec.validity != "formal":
        raise UsageError(f"{e.name} is not a formal identity; use the strange or quantum modes")
    rep = verify_identity(e.name, e.param_dict, opts["order"])
    if rep.ok:
        return "pass", None, ""
    return "fail", _qwitness(("side", "q_degree", "x_degree"), rep.witness), ""


def _run_pair(e: Entry, opts: Dict[str, int]):
    p = e.param_dict
    order, n_max = opts["order"], opts["n_max"]
    if e.name == "base":
        pair = base_pair(str(p["family"]))
    elif e.name == "family":
        pair = build_family_pair(str(p["family"]), int(p.get("k", 1)), int(p.get("a", 0)))
    else:
        raise UsageError(f"unknown pair entry {e.name!r} (expected one of {', '.join(PAIR_NAMES)})")
    rep = verify_pair(pair, n_max, order)
    if not rep.ok:
        w = _qwitness(("n", "q_degree", "x_degree"), rep.witness)
        w["check"] = "pair_relation"
        return "fail", w, ""
    if e.name == "family":
        fam, k, a = str(p["family"]), int(p.get("k", 1)), int(p.get("a", 0))
        for n in range(n_max + 1):
            bad = closed_beta(fam, k, a, n, order).first_mismatch(pair.beta(n, order), order)
            if bad is not None:
                w = _qwitness(("q_degree", "x_degree"), bad)
                w.update(check="closed_beta", n=n)
                return "fail", w, ""
    return "pass", None, ""


def _run_strange(e: Entry, opts: Dict[str, int]):
    if e.name not in STRANGE_NAMES:
        raise UsageError(f"unknown strange identity {e.name!r}")
    if "root" not in opts:
        raise UsageError("strange entries need root=")
    p = e.param_dict
    r = strange_check(e.name, int(p.get("k", 1)), int(p.get("a", 0)), opts["root"], opts["t_order"])
    return _from_strange(r)


def _run_quantum(e: Entry, opts: Dict[str, int]):
    if e.name not in QUANTUM_IDS:
        raise UsageError(f"unknown quantum identity {e.name!r}")
    if "root" not in opts:
        raise UsageError("quantum entries need root=")
    p = e.param_dict
    return _from_strange(quantum_check(e.name, int(p.get("k", 1)), int(p.get("a", 0)), opts["root"]))


_RUNNERS = {"formal": _run_formal, "pair": _run_pair, "strange": _run_strange, "quantum": _run_quantum}


def effective_options(e: Entry) -> Dict[str, int]:
    opts = dict(DEFAULTS[e.mode])
    opts.update(dict(e.options))
    return opts


def run_entry(e: Entry, catalog_digest: str = "") -> RunReport:
    opts = effective_options(e)
    start = time.perf_counter()
    try:
        status, witness, message = _RUNNERS[e.mode](e, opts)
    except (BadParams, UnknownIdentity, UsageError, TypeError, KeyError, ValueError) as exc:
        status, witness, message = "error", None, f"{type(exc).__name__}: {exc}"
    secs = round(time.perf_counter() - start, 4)
    return RunReport(
        e.name, e.mode, e.param_dict, opts, status, witness, message,
        {"seconds": secs, "cached": False}, __version__, catalog_digest,
    )


# -- cache ----------------------------------------------------------------------------


class ResultCache:
    """One JSON file per (engine version, entry digest); the timing field records cache hits."""

    def __init__(self, root: Path):
        self.root = Path(root)

    def _path(self, e: Entry, catalog_digest: str) -> Path:
        opts = tuple(sorted(effective_options(e).items()))
        key = hashlib.sha256(repr((__version__, e.digest(), opts, catalog_digest)).encode()).hexdigest()[:24]
        return self.root / f"{key}.json"

    def get(self, e: Entry, catalog_digest: str) -> Optional[RunReport]:
        p = self._path(e, catalog_digest)
        try:
            rec = json.loads(p.read_text(encoding="utf-8"))
        except (OSError, ValueError):
            return None
        r = RunReport.from_record(rec)
        r.timing = {"seconds": r.timing.get("seconds", 0.0), "cached": True}
        return r

    def put(self, e: Entry, catalog_digest: str, r: RunReport) -> None:
        if r.status == "error":
            return
        self.root.mkdir(parents=True, exist_ok=True)
        p = self._path(e, catalog_digest)
        tmp = p.with_suffix(f".{os.getpid()}.tmp")
        tmp.write_text(json.dumps(r.to_record()), encoding="utf-8")
        tmp.replace(p)


def _run_one(args: Tuple[Entry, str]) -> RunReport:
    return run_entry(*args)


def run_entries(
    entries: Sequence[Entry],
    catalog_digest: str = "",
    jobs: int = 1,
    cache: Optional[ResultCache] = None,
) -> List[RunReport]:
    """Run entries, reusing cached reports; output order follows ``entries``."""
    out: List[Optional[RunReport]] = [None] * len(entries)
    todo: List[int] = []
    for i, e in enumerate(entries):
        hit = cache.get(e, catalog_digest) if cache else None
        if hit is not None:
            out[i] = hit
        else:
            todo.append(i)
    work = [(entries[i], catalog_digest) for i in todo]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            fresh = list(pool.map(_run_one, work))
    else:
        fresh = [_run_one(w) for w in work]
    for i, r in zip(todo, fresh):
        out[i] = r
        if cache:
            cache.put(entries[i], catalog_digest, r)
    return [r for r in out if r is not None]


def run_suite(
    catalog: Catalog,
    pattern: Optional[str] = None,
    order: Optional[int] = None,
    t_order: Optional[int] = None,
    jobs: int = 1,
    cache: Optional[ResultCache] = None,
) -> List[RunReport]:
    selected = []
    for e in catalog.entries:
        if not matches(e, pattern):
            continue
        over = {"t_order": t_order} if e.mode == "strange" else {}
        if e.mode in ("formal", "pair"):
            over["order"] = order
        selected.append(e.with_options(**over))
    return run_entries(selected, catalog.digest, jobs, cache)


def exit_code(reports: Sequence[RunReport]) -> int:
    return 1 if any(r.failed for r in reports) else 0

