"""Deterministic corpus of groups built from parameter grids."""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field, fields

from ..core import Group, prime_power
from ..errors import SizeLimitError, SpecError
from ..families import (
    FamilySpec,
    alternating_spec,
    build_group,
    cyclic_spec,
    describe,
    dihedral_spec,
    expected_order,
    heisenberg_spec,
    k1_family_spec,
    metacyclic_spec,
    named_spec,
    product_spec,
    quaternion_spec,
    semidihedral_spec,
)


@dataclass
class CorpusConfig:
    """Parameter grids and caps.  ``primes=None`` keeps every prime."""

    primes: tuple[int, ...] | None = None
    order_cap: int = 2048
    subgroup_cap: int = 200_000
    f1_n: tuple[int, int] = (1, 5)
    f1_extras: tuple[tuple[int, ...], ...] = ((), (1,), (2,), (1, 1))
    f2_n: tuple[int, int] = (2, 5)
    f2_astar: tuple[tuple[int, ...], ...] = ((1,), (2,), (1, 1))
    maximal_class_n: tuple[int, int] = (3, 6)
    k1_family_n: tuple[int, int] = (4, 7)
    q8_products: bool = True
    sharpness: tuple[tuple[int, int], ...] = ((2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (5, 2))
    odd_primes: tuple[int, ...] = (3, 5)
    odd_extras: bool = True
    permutation_groups: bool = True
    # per-suite work limits
    collection_max_order: int = 256
    quotient_all_normal_max_order: int = 1024
    splitting_max_order: int = 243
    aut_b_params: tuple[tuple[int, int, int], ...] = ((3, 2, 1), (5, 2, 1), (3, 3, 1))
    kummer_primes: tuple[int, ...] = (2, 3, 5)
    kummer_max_m: int = 5

    @classmethod
    def empty(cls, **overrides) -> "CorpusConfig":
        base = dict(
            f1_n=(1, 0), f1_extras=(), f2_n=(2, 1), f2_astar=(), maximal_class_n=(3, 2), k1_family_n=(4, 3),
            q8_products=False, sharpness=(), odd_primes=(), odd_extras=False, permutation_groups=False,
            aut_b_params=(), kummer_primes=(),
        )
        base.update(overrides)
        return cls(**base)

    @classmethod
    def from_dict(cls, d: dict) -> "CorpusConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise SpecError(f"unknown corpus option(s): {', '.join(sorted(unknown))}")
        kw = {}
        for k, v in d.items():
            kw[k] = _tupleize(v) if isinstance(v, list) else v
        cfg = cls(**kw)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        for name in ("order_cap", "subgroup_cap"):
            if getattr(self, name) <= 0:
                raise SpecError(f"{name} must be positive")

    def to_dict(self) -> dict:
        return asdict(self)


def _tupleize(v):
    if isinstance(v, list):
        return tuple(_tupleize(x) for x in v)
    return v


@dataclass
class CorpusEntry:
    group_id: str
    spec: FamilySpec
    roles: tuple[str, ...]
    label: str
    order: int
    _group: Group | None = field(default=None, repr=False, compare=False)

    @property
    def prime(self) -> int | None:
        pp = prime_power(self.order)
        return pp[0] if pp else None

    def group(self, cap: int) -> Group:
        if self._group is None:
            self._group = build_group(self.spec, cap=cap)
        return self._group


@dataclass
class Corpus:
    entries: list[CorpusEntry]
    skipped: list[tuple[str, str, str]]  # (group_id, label, reason)
    config: CorpusConfig

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def with_role(self, role: str) -> list[CorpusEntry]:
        return [e for e in self.entries if role in e.roles]


def _f1_specs(cfg: CorpusConfig):
    for n in range(cfg.f1_n[0], cfg.f1_n[1] + 1):
        for extra in cfg.f1_extras:
            if any(f > n for f in extra):
                continue
            for s in ("neg_one", "neg_one_plus"):
                if s == "neg_one_plus" and n < 3:
                    continue
                for bsq in itertools.product((0, 1), repeat=1 + len(extra)):
                    yield FamilySpec("f1", n=n, extra_factors=list(extra), s=s, bsq=list(bsq)), ("f1",)


def _f2_specs(cfg: CorpusConfig):
    for n in range(cfg.f2_n[0], cfg.f2_n[1] + 1):
        for astar in cfg.f2_astar:
            for s in ("neg_one", "neg_one_plus"):
                if (s == "neg_one" and n < 2) or (s == "neg_one_plus" and n < 3):
                    continue
                for z in itertools.product((0, 1), repeat=len(astar)):
                    if not any(z):
                        continue
                    for bsq in itertools.product((0, 1), repeat=1 + len(astar)):
                        yield (FamilySpec("f2", n=n, astar_factors=list(astar), s=s, z=list(z), bsq=list(bsq)),
                               ("f2",))


def _classical_specs(cfg: CorpusConfig):
    lo, hi = cfg.maximal_class_n
    for n in range(lo, hi + 1):
        yield dihedral_spec(n), ("maximal_class", "k1", f"D{2 ** n}")
        yield quaternion_spec(n), ("maximal_class", "k1", "quaternion", f"Q{2 ** n}")
        if n >= 4:
            yield semidihedral_spec(n), ("maximal_class", "k1", f"SD{2 ** n}")
    lo, hi = cfg.k1_family_n
    for n in range(lo, hi + 1):
        yield k1_family_spec(n), ("k1", "k1_cyclic_times_two")
        if n >= 5:
            yield k1_family_spec(n, twisted=True), ("k1", "k1_cyclic_times_two")
    if cfg.q8_products:
        yield named_spec("Q8xC4"), ("blackburn",)
        yield named_spec("Q8xQ8"), ("blackburn",)
        yield named_spec("Q8xC4xC2"), ("blackburn",)
        yield named_spec("Q8xC2"), ("hamiltonian",)
        yield named_spec("Q8xC2xC2"), ("hamiltonian",)


def _odd_specs(cfg: CorpusConfig):
    for p in cfg.odd_primes:
        yield heisenberg_spec(p), ("odd", "k1")
        yield metacyclic_spec(p, 2, 1, 1 + p), ("odd", "k1")
        yield metacyclic_spec(p, 2, 2, 1 + p), ("odd", "k1")
    if cfg.odd_extras and 3 in cfg.odd_primes:
        yield metacyclic_spec(3, 3, 2, 1 + 9), ("odd",)
        yield metacyclic_spec(3, 3, 1, 1 + 9), ("odd",)
        yield product_spec(heisenberg_spec(3), cyclic_spec(3)), ("odd",)
        yield product_spec(metacyclic_spec(3, 2, 1, 4), cyclic_spec(3)), ("odd",)
        yield cyclic_spec(9, 3), ("odd", "abelian")
        yield cyclic_spec(27), ("odd", "abelian")


def _sharpness_specs(cfg: CorpusConfig):
    for p, k in cfg.sharpness:
        yield FamilySpec("sharpness_example", p=p, k=k), ("sharpness",)


def _perm_specs(cfg: CorpusConfig):
    if cfg.permutation_groups:
        yield alternating_spec(4), ("perm", "A4")
        yield alternating_spec(5), ("perm", "A5")


def build_corpus(config: CorpusConfig | None = None) -> Corpus:
    """Entries in a fixed order: families, classical 2-groups, odd groups, sharpness, permutation groups."""
    cfg = config or CorpusConfig()
    cfg.validate()
    entries: list[CorpusEntry] = []
    skipped: list[tuple[str, str, str]] = []
    seen: set[str] = set()
    sources = (_f1_specs, _f2_specs, _classical_specs, _odd_specs, _sharpness_specs, _perm_specs)
    for source in sources:
        for spec, roles in source(cfg):
            gid = spec.group_id
            if gid in seen:
                continue
            seen.add(gid)
            label = _label(spec, roles)
            try:
                order = expected_order(spec)
            except SpecError:
                try:
                    order = build_group(spec, cap=cfg.order_cap).order
                except SizeLimitError as exc:
                    skipped.append((gid, label, str(exc)))
                    continue
            pp = prime_power(order)
            if cfg.primes is not None and (pp is None or pp[0] not in cfg.primes):
                continue
            if order > cfg.order_cap:
                skipped.append((gid, label, f"order {order} exceeds order cap {cfg.order_cap}"))
                continue
            entries.append(CorpusEntry(gid, spec, tuple(roles), label, order))
    return Corpus(entries, skipped, cfg)


def _label(spec: FamilySpec, roles) -> str:
    named = [r for r in roles if r[:1].isupper()]
    return named[0] if named else describe(spec)

