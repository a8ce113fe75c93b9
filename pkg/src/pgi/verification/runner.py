"""Run suites over a corpus, optionally across worker processes.

Row order is deterministic and independent of the worker count: corpus
skips first, then for each suite its per-entry rows in corpus order followed
by its corpus-level rows, then one coverage row per claim.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Iterable

from ..errors import SizeLimitError, SpecError
from ..families import FamilySpec, build_group
from ..lattice import all_subgroups
from ..report import VerificationReport
from .claims import CLAIMS
from .corpus import Corpus, CorpusConfig, CorpusEntry, build_corpus
from .suites import SUITE_ORDER, SUITES, EntryContext

RESOURCE_CLAIM = "corpus_entry"


def resolve_suites(names: Iterable[str]) -> list[str]:
    names = list(names)
    if not names or names == ["all"]:
        return list(SUITE_ORDER)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise SpecError(f"unknown suite(s): {', '.join(unknown)}; known: {', '.join(SUITE_ORDER)}")
    return [n for n in SUITE_ORDER if n in names]


def _run_entry(job: tuple) -> tuple[dict, str | None]:
    """Worker body; rebuilds the group from its spec so only JSON crosses processes."""
    spec_json, gid, roles, label, order, suite_names, cfg_dict = job
    cfg = CorpusConfig.from_dict(cfg_dict)
    entry = CorpusEntry(gid, FamilySpec.from_json(spec_json), tuple(roles), label, order)
    out = {}
    try:
        G = build_group(entry.spec, cap=cfg.order_cap)
        all_subgroups(G, cap=cfg.subgroup_cap)
        ctx = EntryContext(entry, G, cfg)
        for name in suite_names:
            fn = SUITES[name].per_entry
            if fn is not None:
                rep, fact = fn(ctx)
                out[name] = (rep.rows, fact)
    except SizeLimitError as exc:
        return {}, str(exc)
    return out, None


def run_verification(
    suites: Iterable[str] = ("all",),
    config: CorpusConfig | None = None,
    *,
    workers: int = 1,
    corpus: Corpus | None = None,
) -> VerificationReport:
    names = resolve_suites(suites)
    cfg = config or CorpusConfig()
    corpus = corpus or build_corpus(cfg)
    rep = VerificationReport()
    for gid, label, reason in corpus.skipped:
        rep.skip(gid, RESOURCE_CLAIM, f"{label}: {reason}")

    per_entry = [n for n in names if SUITES[n].per_entry is not None]
    cfg_dict = cfg.to_dict()
    jobs = [(e.spec.to_json(), e.group_id, e.roles, e.label, e.order, per_entry, cfg_dict) for e in corpus]
    if per_entry and jobs:
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_run_entry, jobs, chunksize=1))
        else:
            results = [_run_entry(j) for j in jobs]
    else:
        results = [({}, None)] * len(jobs)

    for entry, (_, err) in zip(corpus, results):
        if err is not None:
            rep.skip(entry.group_id, RESOURCE_CLAIM, f"{entry.label}: {err}")

    for name in names:
        suite = SUITES[name]
        facts = []
        for entry, (out, _) in zip(corpus, results):
            if name in out:
                rows, fact = out[name]
                rep.rows.extend(rows)
                facts.append((entry.group_id, fact))
        if suite.finalize is not None:
            rep.extend(suite.finalize(corpus, facts, cfg))
    _coverage(rep, names)
    return rep


def _coverage(rep: VerificationReport, names: list[str]) -> None:
    seen: dict[str, set[str]] = {}
    for r in rep.rows:
        seen.setdefault(r.claim_id, set()).add(r.status)
    claims = []
    for n in names:
        claims += [c for c in SUITES[n].claims if c not in claims]
    for c in claims:
        st = seen.get(c, set())
        if "pass" in st or "fail" in st:
            rep.add("coverage", c, "exercised", "exercised", True, CLAIMS[c].statement)
        elif "skip" in st:
            rep.add("coverage", c, "exercised", "only skipped", None, CLAIMS[c].statement)
        else:
            rep.add("coverage", c, "exercised", "no applicable corpus entries", None, CLAIMS[c].statement)


def resource_skips(rep: VerificationReport) -> list:
    return [r for r in rep.rows if r.claim_id == RESOURCE_CLAIM and r.status == "skip"]
