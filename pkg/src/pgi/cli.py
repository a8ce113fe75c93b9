"""Command-line front end.

Exit codes: 0 success, 1 a verification row failed, 2 usage or spec error,
3 a size cap was exceeded (or, with ``--strict``, a corpus entry was skipped
for size).
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

from .core import default_order_cap, prime_power
from .errors import DedekindError, SizeLimitError, SpecError
from .families import FamilySpec, build_group, named_spec
from .invariants import invariants
from .lattice import DEFAULT_SUBGROUP_CAP, abelian_invariants, all_subgroups, center, is_dedekind
from .recognizers import structure_tags
from .verification import SUITE_ORDER, CorpusConfig, build_corpus, resolve_suites, resource_skips, run_verification

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--order-cap", type=int, default=None, help="largest group order to build (default: PGI_ORDER_CAP or 2048)")
    p.add_argument("--subgroup-cap", type=int, default=DEFAULT_SUBGROUP_CAP, help="largest subgroup count to enumerate")
    p.add_argument("--format", choices=("tsv", "json"), default="tsv", help="format of files written with --out")
    p.add_argument("--out", type=Path, default=None, help="write the full result to this file")
    p.add_argument("--workers", type=int, default=1, help="worker processes for verify")
    p.add_argument("--seedless", action="store_true", help="accepted for scripts; every computation is deterministic")
    return p


def _spec_flags(p: argparse.ArgumentParser) -> None:
    src = p.add_argument_group("group selection (a spec file wins over inline flags)")
    src.add_argument("--spec", help="FamilySpec JSON file, or - for stdin")
    src.add_argument("--json", dest="spec_json", help="FamilySpec JSON text")
    src.add_argument("--name", help="named group such as D16, SD32, Q16, A5, Q8xC4")
    src.add_argument("--family", choices=("f1", "f2"))
    src.add_argument("--n", type=int)
    src.add_argument("--s", default=None, help="-1 or -1+2^(n-1); write --s=VALUE for the second form")
    src.add_argument("--bsq", help="comma-separated bits")
    src.add_argument("--z", help="comma-separated bits (f2)")
    src.add_argument("--extra-factors", help="comma-separated exponents (f1)")
    src.add_argument("--astar-factors", help="comma-separated exponents (f2)")
    src.add_argument("--example", action="store_true", help="metacyclic sharpness example; needs --p and --k")
    src.add_argument("--p", type=int)
    src.add_argument("--k", type=int)


def _ints(text: str | None, field: str) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise SpecError(f"{field}: expected comma-separated integers, got {text!r}") from None


def spec_from_args(args) -> FamilySpec:
    if args.spec:
        text = sys.stdin.read() if args.spec == "-" else _read(args.spec)
        return FamilySpec.from_json(text)
    if args.spec_json:
        return FamilySpec.from_json(args.spec_json)
    if args.name:
        return named_spec(args.name)
    if args.example:
        if args.p is None or args.k is None:
            raise SpecError("--example needs --p and --k")
        return FamilySpec("sharpness_example", p=args.p, k=args.k)
    if args.family:
        if args.n is None:
            raise SpecError("--family needs --n")
        d = {"n": args.n}
        if args.s is not None:
            d["s"] = args.s
        for flag, key in (("bsq", "bsq"), ("z", "z"), ("extra_factors", "extra_factors"),
                          ("astar_factors", "astar_factors")):
            vals = _ints(getattr(args, flag), key)
            if vals is not None:
                d[key] = vals
        return FamilySpec(args.family, **d)
    raise UsageError("select a group with --spec, --json, --name, --family or --example")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from None


def _cap(args) -> int:
    cap = args.order_cap if args.order_cap is not None else default_order_cap()
    if cap <= 0 or args.subgroup_cap <= 0:
        raise SpecError("caps must be positive")
    return cap


def _write(path: Path | None, text: str) -> None:
    if path is not None:
        path.write_text(text, encoding="utf-8")


def _maximal_abelian_normal(G, lat):
    best = None
    for S, normal in zip(lat.subgroups, lat.normal):
        if normal and S.is_abelian and (best is None or S.order > best.order):
            best = S
    return best


# -- commands -------------------------------------------------------------------------


def cmd_construct(args) -> int:
    spec = spec_from_args(args)
    G = build_group(spec, cap=_cap(args))
    lat = all_subgroups(G, cap=args.subgroup_cap)
    pp = prime_power(G.order)
    A = _maximal_abelian_normal(G, lat)
    tags = structure_tags(G)
    print(f"group_id={spec.group_id}")
    print(f"order={G.order} p={pp[0] if pp else '-'} center={center(G).order} "
          f"abelian_normal={abelian_invariants(A)} dedekind={str(is_dedekind(G)).lower()}")
    print("tags=" + ",".join(str(t) for t in tags))
    if args.out is not None:
        doc = {"spec": spec.to_dict(), "group_id": spec.group_id, "group": json.loads(G.to_json()),
               "tags": [str(t) for t in tags]}
        _write(args.out, json.dumps(doc, separators=(",", ":")) + "\n")
    return EXIT_OK


def cmd_invariants(args) -> int:
    spec = spec_from_args(args)
    G = build_group(spec, cap=_cap(args))
    all_subgroups(G, cap=args.subgroup_cap)
    try:
        vals = invariants(G)
    except DedekindError:
        print("mni=undefined (Dedekind) mni*=undefined (Dedekind) mci*=undefined (Dedekind)")
        _write(args.out, json.dumps({"group_id": spec.group_id, "dedekind": True}) + "\n")
        return EXIT_OK
    names = {"mni": "mni", "mni_star": "mni*", "mci_star": "mci*"}
    print(" ".join(f"{names[k]}={v.value}" for k, v in vals.items()))
    for v in vals.values():
        print("  " + v.describe())
    _write(args.out, json.dumps({"group_id": spec.group_id, "dedekind": False,
                                 **{k: v.value for k, v in vals.items()}}) + "\n")
    return EXIT_OK


def cmd_subgroups(args) -> int:
    spec = spec_from_args(args)
    G = build_group(spec, cap=_cap(args))
    lat = all_subgroups(G, cap=args.subgroup_cap)
    total = Counter(int(o) for o in lat.orders)
    normal = Counter(int(o) for o, f in zip(lat.orders, lat.normal) if f)
    print(f"order={G.order} subgroups={len(lat)} normal={int(lat.normal.sum())}")
    for o in sorted(total):
        print(f"  order {o}: {total[o]} ({normal[o]} normal)")
    if args.out is not None:
        if args.format == "json":
            _write(args.out, json.dumps(lat.to_json(), separators=(",", ":")) + "\n")
        else:
            lines = ["index\torder\tnormal\tgenerators"]
            lines += [f"{i}\t{S.order}\t{str(bool(f)).lower()}\t{S.describe()}"
                      for i, (S, f) in enumerate(zip(lat.subgroups, lat.normal))]
            _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _config(args) -> CorpusConfig:
    d = {}
    if args.config:
        try:
            d = json.loads(_read(args.config))
        except json.JSONDecodeError as exc:
            raise SpecError(f"config: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        if not isinstance(d, dict):
            raise SpecError("config must be a JSON object")
    if args.order_cap is not None:
        d["order_cap"] = args.order_cap
    d.setdefault("order_cap", default_order_cap())
    d["subgroup_cap"] = d.get("subgroup_cap", args.subgroup_cap)
    if args.prime:
        d["primes"] = list(args.prime)
    return CorpusConfig.from_dict(d)


def cmd_verify(args) -> int:
    suites = [s for item in (args.suite or ["all"]) for s in item.split(",") if s]
    names = resolve_suites(suites)
    if args.workers < 1:
        raise SpecError("--workers must be at least 1")
    rep = run_verification(names, _config(args), workers=args.workers)
    out = args.out or Path(f"pgi-report.{args.format}")
    _write(out, rep.to_json() if args.format == "json" else rep.to_tsv())
    print(rep.summary())
    for r in rep.failures():
        print(f"FAIL {r.group_id} {r.claim_id}: {r.witness}")
    if rep.failures():
        return EXIT_FAIL
    if args.strict and resource_skips(rep):
        print(f"strict: {len(resource_skips(rep))} corpus entries skipped for size")
        return EXIT_CAP
    return EXIT_OK


def cmd_corpus(args) -> int:
    corpus = build_corpus(_config(args))
    print(f"entries={len(corpus)} skipped={len(corpus.skipped)}")
    rows = [(e.group_id, e.label, e.order, ",".join(e.roles)) for e in corpus]
    if args.out is not None:
        if args.format == "json":
            doc = {"entries": [{"group_id": e.group_id, "label": e.label, "order": e.order, "roles": list(e.roles),
                                "spec": e.spec.to_dict()} for e in corpus],
                   "skipped": [{"group_id": g, "label": lab, "reason": why} for g, lab, why in corpus.skipped]}
            _write(args.out, json.dumps(doc, indent=1) + "\n")
        else:
            _write(args.out, "group_id\tlabel\torder\troles\n" + "".join(f"{a}\t{b}\t{c}\t{d}\n" for a, b, c, d in rows))
    else:
        for a, b, c, d in rows:
            print(f"{a}\t{b}\t{c}\t{d}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="pgi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", parents=[common], help="build a group and print a summary")
    _spec_flags(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("invariants", parents=[common], help="compute mni, mni* and mci* with witnesses")
    _spec_flags(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("subgroups", parents=[common], help="enumerate the subgroup lattice")
    _spec_flags(p)
    p.set_defaults(func=cmd_subgroups)

    for name, func, helptext in (("verify", cmd_verify, "run verification suites over the corpus"),
                                 ("corpus", cmd_corpus, "list the corpus entries")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--config", help="JSON file of corpus options")
        p.add_argument("--prime", type=int, action="append", help="keep only groups of this prime (repeatable)")
        if name == "verify":
            p.add_argument("--suite", action="append",
                           help=f"suite name, comma list or 'all' (repeatable); known: {', '.join(SUITE_ORDER)}")
            p.add_argument("--strict", action="store_true", help="exit 3 if any corpus entry was skipped for size")
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SizeLimitError as exc:
        print(f"pgi: size limit: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (SpecError, UsageError) as exc:
        print(f"pgi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
